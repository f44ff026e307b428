//! Gate specifications, circuits and the holomorphic gate engine.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;

use crate::diffop::{DiffOperator, Substitution};
use crate::error::{Error, Result};
use crate::holostate::{from_poly, to_poly, HoloState};
use crate::poly::SparsePoly;
use crate::{Unitary2, C64, UNITARY_TOL};

/// The three Pauli generators, shared by the torus and semiclassical modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn kind(self) -> GateKind {
        match self {
            Pauli::X => GateKind::X,
            Pauli::Y => GateKind::Y,
            Pauli::Z => GateKind::Z,
        }
    }

    pub fn matrix(self) -> Unitary2 {
        pauli_matrix(self.kind())
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind().name())
    }
}

impl FromStr for Pauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Pauli::X),
            "Y" | "y" => Ok(Pauli::Y),
            "Z" | "z" => Ok(Pauli::Z),
            other => Err(Error::InvalidParameter(format!(
                "generator must be X, Y or Z, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    Swap,
    Cnot,
    Cz,
    Cu,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::Swap,
        GateKind::Cnot,
        GateKind::Cz,
        GateKind::Cu,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::Y | GateKind::Z | GateKind::H => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::Swap => "SWAP",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::Cu => "CU",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownGate(s.to_string()))
    }
}

/// A gate application: kind, 1-based qubit indices and the CU payload.
///
/// For two-qubit gates `qubits = [control, target]` (SWAP is symmetric).
#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub u: Option<Unitary2>,
}

impl GateSpec {
    pub fn single(kind: GateKind, qubit: usize) -> Self {
        Self {
            kind,
            qubits: vec![qubit],
            u: None,
        }
    }

    pub fn two(kind: GateKind, first: usize, second: usize) -> Self {
        Self {
            kind,
            qubits: vec![first, second],
            u: None,
        }
    }

    pub fn cu(control: usize, target: usize, u: Unitary2) -> Self {
        Self {
            kind: GateKind::Cu,
            qubits: vec![control, target],
            u: Some(u),
        }
    }

    /// Checks arity, index range, distinctness and the CU payload.
    pub fn validate(&self, nqubits: usize) -> Result<()> {
        if self.qubits.len() != self.kind.arity() {
            return Err(Error::GateArity {
                kind: self.kind.to_string(),
                expected: self.kind.arity(),
                actual: self.qubits.len(),
            });
        }
        for &q in &self.qubits {
            if q == 0 || q > nqubits {
                return Err(Error::QubitOutOfRange { index: q, nqubits });
            }
        }
        if self.qubits.len() == 2 && self.qubits[0] == self.qubits[1] {
            return Err(Error::RepeatedQubit(self.qubits[0]));
        }
        match (self.kind, &self.u) {
            (GateKind::Cu, None) => return Err(Error::MissingUnitary),
            (GateKind::Cu, Some(u)) => check_unitary(u)?,
            _ => {}
        }
        Ok(())
    }

    /// The 2x2 matrix of a single-qubit kind, or the CU target unitary.
    pub fn single_qubit_matrix(&self) -> Option<Unitary2> {
        match self.kind {
            GateKind::X => Some(pauli_matrix(GateKind::X)),
            GateKind::Y => Some(pauli_matrix(GateKind::Y)),
            GateKind::Z => Some(pauli_matrix(GateKind::Z)),
            GateKind::H => Some(hadamard_matrix()),
            GateKind::Cnot => Some(pauli_matrix(GateKind::X)),
            GateKind::Cz => Some(pauli_matrix(GateKind::Z)),
            GateKind::Cu => self.u,
            GateKind::Swap => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub nqubits: usize,
    pub gates: Vec<GateSpec>,
}

impl Circuit {
    pub fn new(nqubits: usize, gates: Vec<GateSpec>) -> Result<Self> {
        if nqubits == 0 {
            return Err(Error::InvalidParameter(
                "circuit needs at least one qubit".into(),
            ));
        }
        for g in &gates {
            g.validate(nqubits)?;
        }
        Ok(Self { nqubits, gates })
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// X, Y or Z as a 2x2 matrix. Panics for other kinds.
pub fn pauli_matrix(kind: GateKind) -> Unitary2 {
    match kind {
        GateKind::X => Matrix2::new(c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)),
        GateKind::Y => Matrix2::new(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)),
        GateKind::Z => Matrix2::new(c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)),
        other => panic!("{other} is not a Pauli gate"),
    }
}

pub fn hadamard_matrix() -> Unitary2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Matrix2::new(c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.))
}

pub fn unitarity_defect(u: &Unitary2) -> f64 {
    (u.adjoint() * u - Unitary2::identity())
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
}

pub fn check_unitary(u: &Unitary2) -> Result<()> {
    let d = unitarity_defect(u);
    if d > UNITARY_TOL || !d.is_finite() {
        return Err(Error::NotUnitary(d));
    }
    Ok(())
}

/// Coefficients `(a0, ax, ay, az)` with `u = a0 I + ax X + ay Y + az Z`.
pub fn pauli_decomposition(u: &Unitary2) -> [C64; 4] {
    let half = c(0.5, 0.0);
    [
        u.trace() * half,
        (pauli_matrix(GateKind::X) * u).trace() * half,
        (pauli_matrix(GateKind::Y) * u).trace() * half,
        (pauli_matrix(GateKind::Z) * u).trace() * half,
    ]
}

/// Which representation `gate_operator` should produce for H and SWAP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OperatorForm {
    /// Substitutions for H and SWAP, differential operators otherwise.
    #[default]
    Native,
    /// Differential operators for every kind.
    Differential,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateOperator {
    Diff(DiffOperator),
    Subst(Substitution),
}

impl GateOperator {
    pub fn apply(&self, p: &SparsePoly) -> Result<SparsePoly> {
        match self {
            GateOperator::Diff(op) => op.apply(p),
            GateOperator::Subst(s) => s.apply(p),
        }
    }

    pub fn as_diff(&self) -> Option<&DiffOperator> {
        match self {
            GateOperator::Diff(op) => Some(op),
            GateOperator::Subst(_) => None,
        }
    }
}

/// `u` written as `a0 + ax X + ay Y + az Z` on `qubit`.
pub fn single_qubit_operator(nqubits: usize, qubit: usize, u: &Unitary2) -> DiffOperator {
    let [a0, ax, ay, az] = pauli_decomposition(u);
    DiffOperator::scalar(nqubits, a0)
        + DiffOperator::pauli_x(nqubits, qubit).scale(ax)
        + DiffOperator::pauli_y(nqubits, qubit).scale(ay)
        + DiffOperator::pauli_z(nqubits, qubit).scale(az)
}

/// `(1 + Z_c)/2 + (1 - Z_c)/2 ∘ U_t` with `U_t` from the Pauli decomposition of `u`.
pub fn controlled_u(
    nqubits: usize,
    control: usize,
    target: usize,
    u: &Unitary2,
) -> Result<DiffOperator> {
    check_unitary(u)?;
    if control == target {
        return Err(Error::RepeatedQubit(control));
    }
    for q in [control, target] {
        if q == 0 || q > nqubits {
            return Err(Error::QubitOutOfRange { index: q, nqubits });
        }
    }
    let ut = single_qubit_operator(nqubits, target, u);
    Ok(controlled(nqubits, control, &ut))
}

fn controlled(nqubits: usize, control: usize, ut: &DiffOperator) -> DiffOperator {
    let half = c(0.5, 0.0);
    let one = DiffOperator::identity(nqubits);
    let zc = DiffOperator::pauli_z(nqubits, control);
    let p0 = (one.clone() + zc.clone()).scale(half);
    let p1 = (one - zc).scale(half);
    p0 + &p1 * ut
}

/// The operator of a gate in the requested form.
pub fn gate_operator(nqubits: usize, g: &GateSpec, form: OperatorForm) -> Result<GateOperator> {
    g.validate(nqubits)?;
    let n = nqubits;
    let q = &g.qubits;
    let half = c(0.5, 0.0);
    let op = match g.kind {
        GateKind::X => DiffOperator::pauli_x(n, q[0]),
        GateKind::Y => DiffOperator::pauli_y(n, q[0]),
        GateKind::Z => DiffOperator::pauli_z(n, q[0]),
        GateKind::H => match form {
            OperatorForm::Native => {
                return Ok(GateOperator::Subst(Substitution::hadamard(n, q[0])))
            }
            OperatorForm::Differential => (DiffOperator::pauli_x(n, q[0])
                + DiffOperator::pauli_z(n, q[0]))
            .scale(c(std::f64::consts::FRAC_1_SQRT_2, 0.0)),
        },
        GateKind::Swap => match form {
            OperatorForm::Native => {
                return Ok(GateOperator::Subst(Substitution::swap(n, q[0], q[1])))
            }
            OperatorForm::Differential => swap_pauli_form(n, q[0], q[1]),
        },
        GateKind::Cnot => controlled(n, q[0], &DiffOperator::pauli_x(n, q[1])),
        GateKind::Cz => {
            let zc = DiffOperator::pauli_z(n, q[0]);
            let zt = DiffOperator::pauli_z(n, q[1]);
            let zz = &zc * &zt;
            (DiffOperator::identity(n) + zc + zt - zz).scale(half)
        }
        GateKind::Cu => {
            let u = g.u.as_ref().ok_or(Error::MissingUnitary)?;
            controlled_u(n, q[0], q[1], u)?
        }
    };
    Ok(GateOperator::Diff(op))
}

/// `½(1 + X_j X_k + Y_j Y_k + Z_j Z_k)`.
pub fn swap_pauli_form(n: usize, j: usize, k: usize) -> DiffOperator {
    let xx = &DiffOperator::pauli_x(n, j) * &DiffOperator::pauli_x(n, k);
    let yy = &DiffOperator::pauli_y(n, j) * &DiffOperator::pauli_y(n, k);
    let zz = &DiffOperator::pauli_z(n, j) * &DiffOperator::pauli_z(n, k);
    (DiffOperator::identity(n) + xx + yy + zz).scale(c(0.5, 0.0))
}

/// Raw polynomial action of a gate, without the physicality check.
pub fn apply_gate_poly(g: &GateSpec, p: &SparsePoly) -> Result<SparsePoly> {
    gate_operator(p.nqubits(), g, OperatorForm::Native)?.apply(p)
}

/// `to_poly -> operator -> from_poly`; fails if the output leaves the physical subspace.
pub fn apply_gate(g: &GateSpec, state: &HoloState) -> Result<HoloState> {
    from_poly(&apply_gate_poly(g, &to_poly(state))?)
}

pub fn run_circuit_holo(circuit: &Circuit, state: &HoloState) -> Result<HoloState> {
    if circuit.nqubits != state.nqubits() {
        return Err(Error::QubitMismatch {
            left: circuit.nqubits,
            right: state.nqubits(),
        });
    }
    circuit
        .gates
        .iter()
        .try_fold(state.clone(), |s, g| apply_gate(g, &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holostate::{check_homogeneity, encode_basis};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn pauli_x_operator_terms() {
        let op = gate_operator(1, &GateSpec::single(GateKind::X, 1), OperatorForm::Native).unwrap();
        let op = op.as_diff().unwrap();
        assert_eq!(op.len(), 2);
        assert_eq!(op.coeff(&[1, 0], &[0, 1]), c(1., 0.));
        assert_eq!(op.coeff(&[0, 1], &[1, 0]), c(1., 0.));
    }

    #[test]
    fn hadamard_is_substitution_by_default() {
        let op = gate_operator(1, &GateSpec::single(GateKind::H, 1), OperatorForm::Native).unwrap();
        let GateOperator::Subst(s) = op else {
            panic!("expected substitution");
        };
        let m = s.matrix();
        assert!((m[(0, 0)] - c(FRAC_1_SQRT_2, 0.)).norm() < 1e-15);
        assert!((m[(0, 1)] - c(FRAC_1_SQRT_2, 0.)).norm() < 1e-15);
        assert!((m[(1, 0)] - c(FRAC_1_SQRT_2, 0.)).norm() < 1e-15);
        assert!((m[(1, 1)] + c(FRAC_1_SQRT_2, 0.)).norm() < 1e-15);
    }

    #[test]
    fn cnot_on_10() {
        let g = GateSpec::two(GateKind::Cnot, 1, 2);
        let out = apply_gate_poly(&g, &encode_basis("10").unwrap()).unwrap();
        assert_eq!(out, encode_basis("11").unwrap());
    }

    #[test]
    fn cnot_fixes_00() {
        // the CNOT formula alone keeps z_a1 z_a2; entanglement needs a preceding H
        let g = GateSpec::two(GateKind::Cnot, 1, 2);
        let out = apply_gate_poly(&g, &encode_basis("00").unwrap()).unwrap();
        assert_eq!(out, encode_basis("00").unwrap());
    }

    #[test]
    fn apply_gate_examples() {
        let x = apply_gate(
            &GateSpec::single(GateKind::X, 1),
            &HoloState::basis("0").unwrap(),
        )
        .unwrap();
        assert_eq!(x, HoloState::basis("1").unwrap());

        let h = apply_gate(
            &GateSpec::single(GateKind::H, 1),
            &HoloState::basis("0").unwrap(),
        )
        .unwrap();
        for s in ["0", "1"] {
            assert!((h.amplitude(&s.parse().unwrap()) - c(FRAC_1_SQRT_2, 0.)).norm() < 1e-15);
        }
    }

    #[test]
    fn bell_circuit() {
        let circ = Circuit::new(
            2,
            vec![
                GateSpec::single(GateKind::H, 1),
                GateSpec::two(GateKind::Cnot, 1, 2),
            ],
        )
        .unwrap();
        let out = run_circuit_holo(&circ, &HoloState::basis("00").unwrap()).unwrap();
        assert_eq!(out.amplitudes().len(), 2);
        for s in ["00", "11"] {
            assert!((out.amplitude(&s.parse().unwrap()) - c(FRAC_1_SQRT_2, 0.)).norm() < 1e-15);
        }
    }

    #[test]
    fn empty_and_involution_circuits() {
        let psi = HoloState::basis("0").unwrap();
        let empty = Circuit::new(1, vec![]).unwrap();
        assert_eq!(run_circuit_holo(&empty, &psi).unwrap(), psi);
        let xx = Circuit::new(1, vec![GateSpec::single(GateKind::X, 1); 2]).unwrap();
        assert_eq!(run_circuit_holo(&xx, &psi).unwrap(), psi);
    }

    #[test]
    fn invalid_specs() {
        assert!(matches!(
            GateSpec::two(GateKind::Cnot, 1, 1).validate(2),
            Err(Error::RepeatedQubit(1))
        ));
        assert!(matches!(
            GateSpec::single(GateKind::X, 3).validate(2),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(matches!(
            GateSpec::single(GateKind::Cnot, 1).validate(2),
            Err(Error::GateArity { .. })
        ));
        let bad = Unitary2::new(c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.));
        assert!(matches!(
            GateSpec::cu(1, 2, bad).validate(2),
            Err(Error::NotUnitary(_))
        ));
        assert!(matches!(
            controlled_u(2, 1, 2, &bad),
            Err(Error::NotUnitary(_))
        ));
        let mut g = GateSpec::two(GateKind::Cu, 1, 2);
        g.u = None;
        assert_eq!(g.validate(2), Err(Error::MissingUnitary));
        assert_eq!(
            "FOO".parse::<GateKind>(),
            Err(Error::UnknownGate("FOO".into()))
        );
    }

    #[test]
    fn controlled_identity_acts_trivially() {
        let op = controlled_u(2, 1, 2, &Unitary2::identity()).unwrap();
        for s in ["00", "01", "10", "11"] {
            let p = encode_basis(s).unwrap();
            assert!(op.apply(&p).unwrap().max_abs_diff(&p) < 1e-15);
        }
    }

    #[test]
    fn pauli_decomposition_recovers_matrix() {
        let u = hadamard_matrix();
        let [a0, ax, ay, az] = pauli_decomposition(&u);
        let rebuilt = Unitary2::identity() * a0
            + pauli_matrix(GateKind::X) * ax
            + pauli_matrix(GateKind::Y) * ay
            + pauli_matrix(GateKind::Z) * az;
        assert!((rebuilt - u).norm() < 1e-15);
    }

    #[test]
    fn cz_output_stays_physical() {
        let g = GateSpec::two(GateKind::Cz, 2, 1);
        let p = to_poly(&HoloState::basis("11").unwrap());
        let out = apply_gate_poly(&g, &p).unwrap();
        assert!(check_homogeneity(&out, 1) && check_homogeneity(&out, 2));
        assert_eq!(out, p.scale(c(-1., 0.)));
    }
}
