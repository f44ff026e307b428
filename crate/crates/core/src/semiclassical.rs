//! Classical Hamilton flow `i dz/dt = dH/dzbar` on `C^{2N}`.
//!
//! For a quadratic Hamiltonian `H = zbar^T h z` the flow is linear,
//! `z(t) = exp(-i h t) z(0)`, and coincides with the one-particle unitary.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gates::{hadamard_matrix, Pauli};
use crate::sampling::{self, gaussian_complex};
use crate::{BasisConvention, C64};

/// Hermiticity tolerance for [`QuadraticHamiltonian::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Mode amplitudes `(z_a1, z_b1, ..., z_aN, z_bN)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherentPoint {
    z: Vec<C64>,
}

impl CoherentPoint {
    pub fn new(z: Vec<C64>) -> Result<Self> {
        if z.is_empty() || !z.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "coherent point needs an even, nonzero number of modes, got {}",
                z.len()
            )));
        }
        if z.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite mode amplitude".into()));
        }
        Ok(Self { z })
    }

    pub fn nqubits(&self) -> usize {
        self.z.len() / 2
    }

    pub fn z(&self) -> &[C64] {
        &self.z
    }

    pub fn norm(&self) -> f64 {
        self.z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.z
            .iter()
            .zip(&other.z)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// `H(zbar, z) = zbar^T h z` with Hermitian `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticHamiltonian {
    h: DMatrix<C64>,
}

impl QuadraticHamiltonian {
    pub fn new(h: DMatrix<C64>) -> Result<Self> {
        if !h.is_square() || h.nrows() == 0 || !h.nrows().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "hamiltonian must be 2N x 2N, got {}x{}",
                h.nrows(),
                h.ncols()
            )));
        }
        let defect = (&h - h.adjoint())
            .iter()
            .map(|d| d.norm())
            .fold(0.0, f64::max);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { h })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.h
    }

    pub fn nqubits(&self) -> usize {
        self.h.nrows() / 2
    }

    pub fn energy(&self, p: &CoherentPoint) -> f64 {
        let z = DVector::from_column_slice(p.z());
        (z.adjoint() * &self.h * &z)[(0, 0)].re
    }

    /// `dH/dzbar = h z`.
    pub fn gradient(&self, z: &[C64]) -> Vec<C64> {
        (&self.h * DVector::from_column_slice(z))
            .iter()
            .copied()
            .collect()
    }

    /// `exp(-i h t)` from the Hermitian eigendecomposition of `h`.
    pub fn propagator(&self, t: f64) -> DMatrix<C64> {
        if t == 0.0 {
            return DMatrix::identity(self.h.nrows(), self.h.ncols());
        }
        let eig = self.h.clone().symmetric_eigen();
        let phases = DMatrix::from_diagonal(&DVector::from_iterator(
            eig.eigenvalues.len(),
            eig.eigenvalues
                .iter()
                .map(|&l| C64::from_polar(1.0, -l * t)),
        ));
        &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
    }
}

/// The Pauli matrix of `kind` embedded at the mode pair of `qubit`.
pub fn pauli_hamiltonian(
    kind: Pauli,
    nqubits: usize,
    qubit: usize,
) -> Result<QuadraticHamiltonian> {
    if qubit == 0 || qubit > nqubits {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            nqubits,
        });
    }
    let p = kind.matrix();
    let (a, b) = (BasisConvention::var_a(qubit), BasisConvention::var_b(qubit));
    let mut h = DMatrix::zeros(2 * nqubits, 2 * nqubits);
    h[(a, a)] = p[(0, 0)];
    h[(a, b)] = p[(0, 1)];
    h[(b, a)] = p[(1, 0)];
    h[(b, b)] = p[(1, 1)];
    QuadraticHamiltonian::new(h)
}

fn check_compatible(h: &QuadraticHamiltonian, z: &CoherentPoint) -> Result<()> {
    if h.nqubits() != z.nqubits() {
        return Err(Error::QubitMismatch {
            left: h.nqubits(),
            right: z.nqubits(),
        });
    }
    Ok(())
}

/// Exact classical evolution `z(t) = exp(-i h t) z0`.
pub fn evolve_classical(
    h: &QuadraticHamiltonian,
    z0: &CoherentPoint,
    t: f64,
) -> Result<CoherentPoint> {
    check_compatible(h, z0)?;
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    let z = h.propagator(t) * DVector::from_column_slice(z0.z());
    CoherentPoint::new(z.iter().copied().collect())
}

/// RK4 integration of `dz/dt = -i dH/dzbar` for an arbitrary gradient.
pub fn integrate_hamilton<F>(
    grad_zbar: F,
    z0: &CoherentPoint,
    t: f64,
    dt: f64,
) -> Result<CoherentPoint>
where
    F: Fn(&[C64]) -> Vec<C64>,
{
    if dt.is_nan() || dt <= 0.0 || t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need dt > 0 and t >= 0, got dt={dt}, t={t}"
        )));
    }
    let minus_i = C64::new(0.0, -1.0);
    let rhs = |z: &[C64]| -> Vec<C64> { grad_zbar(z).into_iter().map(|g| minus_i * g).collect() };
    let axpy = |z: &[C64], k: &[C64], h: f64| -> Vec<C64> {
        z.iter().zip(k).map(|(a, b)| a + b * h).collect()
    };
    let steps = ((t / dt) - 1e-9).ceil().max(0.0) as usize;
    let mut z = z0.z().to_vec();
    let mut now = 0.0;
    for k in 0..steps {
        let next = if k + 1 == steps {
            t
        } else {
            (k + 1) as f64 * dt
        };
        let h = next - now;
        let k1 = rhs(&z);
        let k2 = rhs(&axpy(&z, &k1, 0.5 * h));
        let k3 = rhs(&axpy(&z, &k2, 0.5 * h));
        let k4 = rhs(&axpy(&z, &k3, h));
        for i in 0..z.len() {
            z[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
        now = next;
    }
    CoherentPoint::new(z)
}

/// Stepped counterpart of [`evolve_classical`].
pub fn evolve_stepped(
    h: &QuadraticHamiltonian,
    z0: &CoherentPoint,
    t: f64,
    dt: f64,
) -> Result<CoherentPoint> {
    check_compatible(h, z0)?;
    integrate_hamilton(|z| h.gradient(z), z0, t, dt)
}

/// Hadamard applied instantaneously to the mode pair of `qubit`.
pub fn hadamard_classical(z: &CoherentPoint, qubit: usize) -> Result<CoherentPoint> {
    if qubit == 0 || qubit > z.nqubits() {
        return Err(Error::QubitOutOfRange {
            index: qubit,
            nqubits: z.nqubits(),
        });
    }
    let (a, b) = (BasisConvention::var_a(qubit), BasisConvention::var_b(qubit));
    let m = hadamard_matrix();
    let mut out = z.z.clone();
    out[a] = m[(0, 0)] * z.z[a] + m[(0, 1)] * z.z[b];
    out[b] = m[(1, 0)] * z.z[a] + m[(1, 1)] * z.z[b];
    CoherentPoint::new(out)
}

/// Largest deviation between the classical flow of a Pauli Hamiltonian and
/// `exp(-i P t) = cos t - i sin t P` applied to random single-qubit mode pairs.
pub fn compare_with_gate(kind: Pauli, t: f64, samples: usize, seed: u64) -> Result<f64> {
    let h = pauli_hamiltonian(kind, 1, 1)?;
    let p = kind.matrix();
    let (c, s) = (C64::new(t.cos(), 0.0), C64::new(0.0, -t.sin()));
    let mut rng = sampling::rng(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z0 = [gaussian_complex(&mut rng), gaussian_complex(&mut rng)];
        let classical = evolve_classical(&h, &CoherentPoint::new(z0.to_vec())?, t)?;
        let expected = [
            c * z0[0] + s * (p[(0, 0)] * z0[0] + p[(0, 1)] * z0[1]),
            c * z0[1] + s * (p[(1, 0)] * z0[0] + p[(1, 1)] * z0[1]),
        ];
        let d = CoherentPoint::new(expected.to_vec())?.distance(&classical);
        worst = worst.max(d);
    }
    Ok(worst)
}
