//! Dense state-vector simulator used as the reference for the holomorphic engine.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::gates::{Circuit, GateKind, GateSpec};
use crate::holostate::{BasisConvention, HoloState};
use crate::{Unitary2, C64, NORM_TOL};

/// Big-endian amplitude vector, same ordering as [`HoloState::to_vector`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    nqubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        Ok(Self {
            nqubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    /// `|0...0>`
    pub fn zero_state(nqubits: usize) -> Self {
        let mut amps = vec![C64::default(); 1 << nqubits];
        amps[0] = C64::new(1.0, 0.0);
        Self { nqubits, amps }
    }

    pub fn from_holo(state: &HoloState) -> Self {
        Self {
            nqubits: state.nqubits(),
            amps: state.to_vector(),
        }
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << BasisConvention::bit_position(qubit, self.nqubits)
    }

    fn apply_1q(&mut self, qubit: usize, u: &Unitary2) {
        let m = self.mask(qubit);
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | m]);
                self.amps[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                self.amps[i | m] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
            }
        }
    }

    /// `u` acts on the ordered pair `|q1 q2>`, `q1` the high bit of the 4x4 index.
    fn apply_2q(&mut self, q1: usize, q2: usize, u: &Matrix4<C64>) {
        let (m1, m2) = (self.mask(q1), self.mask(q2));
        for i in 0..self.amps.len() {
            if i & (m1 | m2) == 0 {
                let idx = [i, i | m2, i | m1, i | m1 | m2];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] = (0..4).map(|col| u[(r, col)] * v[col]).sum();
                }
            }
        }
    }
}

/// Textbook 4x4 matrix of a two-qubit gate in the basis `|control target>`.
pub fn two_qubit_matrix(g: &GateSpec) -> Option<Matrix4<C64>> {
    let one = C64::new(1.0, 0.0);
    let mut m = Matrix4::<C64>::zeros();
    match g.kind {
        GateKind::Swap => {
            m[(0, 0)] = one;
            m[(1, 2)] = one;
            m[(2, 1)] = one;
            m[(3, 3)] = one;
        }
        GateKind::Cnot | GateKind::Cz | GateKind::Cu => {
            let u = g.single_qubit_matrix()?;
            m[(0, 0)] = one;
            m[(1, 1)] = one;
            for r in 0..2 {
                for c in 0..2 {
                    m[(2 + r, 2 + c)] = u[(r, c)];
                }
            }
        }
        _ => return None,
    }
    Some(m)
}

/// Applies one gate by index arithmetic, never forming a `2^N x 2^N` matrix.
pub fn apply_gate_matrix(g: &GateSpec, v: &StateVector) -> Result<StateVector> {
    g.validate(v.nqubits)?;
    let mut out = v.clone();
    if g.kind.arity() == 1 {
        let u = g.single_qubit_matrix().expect("single-qubit kind");
        out.apply_1q(g.qubits[0], &u);
    } else {
        let m = two_qubit_matrix(g).expect("two-qubit kind");
        out.apply_2q(g.qubits[0], g.qubits[1], &m);
    }
    Ok(out)
}

pub fn run_circuit_matrix(circuit: &Circuit, v: &StateVector) -> Result<StateVector> {
    if circuit.nqubits != v.nqubits {
        return Err(Error::QubitMismatch {
            left: circuit.nqubits,
            right: v.nqubits,
        });
    }
    circuit
        .gates
        .iter()
        .try_fold(v.clone(), |s, g| apply_gate_matrix(g, &s))
}

/// Max entrywise deviation of two amplitude vectors after global-phase alignment.
///
/// The phase is fixed on the index maximizing `|a_k| |b_k|`; if no index carries
/// weight in both vectors no alignment is applied.
pub fn max_deviation_aligned(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len(), "vectors of different length");
    let (k, w) = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| (i, x.norm() * y.norm()))
        .fold(
            (0, 0.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    let phase = if w > 0.0 {
        let r = a[k] / b[k];
        r / r.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y * phase).norm())
        .fold(0.0, f64::max)
}

pub fn compare_states(a: &StateVector, b: &HoloState) -> Result<f64> {
    if a.nqubits != b.nqubits() {
        return Err(Error::QubitMismatch {
            left: a.nqubits,
            right: b.nqubits(),
        });
    }
    Ok(max_deviation_aligned(&a.amps, &b.to_vector()))
}
