//! Differential operators and linear variable substitutions on [`SparsePoly`].
//!
//! Under the Bargmann correspondence a creation operator acts as multiplication
//! by `z` and an annihilation operator as `d/dz`. A [`DiffOperator`] is a finite
//! sum of normal-ordered words `c * z^mult * d^deriv` (multiplications to the
//! left of derivatives).

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::poly::{Exponents, SparsePoly};
use crate::{BasisConvention, C64, ZERO_TOL};

/// One normal-ordered word of a [`DiffOperator`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiffTerm {
    pub coeff: C64,
    pub mult: Exponents,
    pub deriv: Exponents,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator {
    nqubits: usize,
    terms: BTreeMap<(Exponents, Exponents), C64>,
}

impl DiffOperator {
    pub fn zero(nqubits: usize) -> Self {
        assert!(nqubits > 0, "operator needs at least one qubit");
        Self {
            nqubits,
            terms: BTreeMap::new(),
        }
    }

    /// Multiplication by the constant `c`.
    pub fn scalar(nqubits: usize, c: C64) -> Self {
        let mut op = Self::zero(nqubits);
        let z = vec![0; 2 * nqubits];
        op.add_term(z.clone(), z, c);
        op
    }

    pub fn identity(nqubits: usize) -> Self {
        Self::scalar(nqubits, C64::new(1.0, 0.0))
    }

    /// The word `c * z^mult * d^deriv`.
    pub fn word(nqubits: usize, mult: Exponents, deriv: Exponents, c: C64) -> Self {
        let mut op = Self::zero(nqubits);
        op.add_term(mult, deriv, c);
        op
    }

    /// `z_mult * d/dz_deriv` for two flat variable indices.
    pub fn hop(nqubits: usize, mult_var: usize, deriv_var: usize) -> Self {
        let mut m = vec![0; 2 * nqubits];
        let mut d = vec![0; 2 * nqubits];
        m[mult_var] = 1;
        d[deriv_var] = 1;
        Self::word(nqubits, m, d, C64::new(1.0, 0.0))
    }

    pub fn multiply_by(nqubits: usize, var: usize) -> Self {
        let mut m = vec![0; 2 * nqubits];
        m[var] = 1;
        Self::word(nqubits, m, vec![0; 2 * nqubits], C64::new(1.0, 0.0))
    }

    pub fn derivative(nqubits: usize, var: usize) -> Self {
        let mut d = vec![0; 2 * nqubits];
        d[var] = 1;
        Self::word(nqubits, vec![0; 2 * nqubits], d, C64::new(1.0, 0.0))
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = DiffTerm> + '_ {
        self.terms.iter().map(|((m, d), c)| DiffTerm {
            coeff: *c,
            mult: m.clone(),
            deriv: d.clone(),
        })
    }

    pub fn coeff(&self, mult: &[u16], deriv: &[u16]) -> C64 {
        self.terms
            .get(&(mult.to_vec(), deriv.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    pub fn add_term(&mut self, mult: Exponents, deriv: Exponents, c: C64) {
        assert_eq!(mult.len(), 2 * self.nqubits);
        assert_eq!(deriv.len(), 2 * self.nqubits);
        use std::collections::btree_map::Entry;
        match self.terms.entry((mult, deriv)) {
            Entry::Occupied(mut o) => {
                let v = *o.get() + c;
                if v.norm() <= ZERO_TOL {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                if c.norm() > ZERO_TOL {
                    v.insert(c);
                }
            }
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::zero(self.nqubits);
        for ((m, d), v) in &self.terms {
            out.add_term(m.clone(), d.clone(), v * c);
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nqubits != other.nqubits {
            return Err(Error::QubitMismatch {
                left: self.nqubits,
                right: other.nqubits,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for ((m, d), c) in &other.terms {
            out.add_term(m.clone(), d.clone(), *c);
        }
        Ok(out)
    }

    /// Exact action on a polynomial.
    pub fn apply(&self, p: &SparsePoly) -> Result<SparsePoly> {
        if self.nqubits != p.nqubits() {
            return Err(Error::QubitMismatch {
                left: self.nqubits,
                right: p.nqubits(),
            });
        }
        let mut out = SparsePoly::zero(self.nqubits);
        for ((m, d), c) in &self.terms {
            'poly: for (e, pc) in p.terms() {
                let mut coeff = c * pc;
                let mut exps = Vec::with_capacity(e.len());
                for k in 0..e.len() {
                    if e[k] < d[k] {
                        continue 'poly;
                    }
                    coeff *= falling_factorial(e[k], d[k]);
                    exps.push(e[k] - d[k] + m[k]);
                }
                out.add_term(exps, coeff);
            }
        }
        Ok(out)
    }

    /// Normal-ordered product `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let nv = 2 * self.nqubits;
        let mut out = Self::zero(self.nqubits);
        for ((m1, d1), c1) in &self.terms {
            for ((m2, d2), c2) in &other.terms {
                // d^d1 z^m2 = sum_k prod_v C(d1_v, k_v) (m2_v)_(k_v) z^(m2-k) d^(d1-k)
                let limits: Vec<u16> = (0..nv).map(|v| d1[v].min(m2[v])).collect();
                let mut k = vec![0u16; nv];
                loop {
                    let mut coeff = c1 * c2;
                    let mut mult = Vec::with_capacity(nv);
                    let mut deriv = Vec::with_capacity(nv);
                    for v in 0..nv {
                        coeff *= binomial(d1[v], k[v]) * falling_factorial(m2[v], k[v]);
                        mult.push(m1[v] + m2[v] - k[v]);
                        deriv.push(d1[v] - k[v] + d2[v]);
                    }
                    out.add_term(mult, deriv, coeff);
                    if !advance(&mut k, &limits) {
                        break;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Pauli X on `qubit`: `z_a d_b + z_b d_a`.
    pub fn pauli_x(nqubits: usize, qubit: usize) -> Self {
        let (a, b) = pair(qubit);
        Self::hop(nqubits, a, b) + Self::hop(nqubits, b, a)
    }

    /// Pauli Y on `qubit`: `-i (z_a d_b - z_b d_a)`.
    pub fn pauli_y(nqubits: usize, qubit: usize) -> Self {
        let (a, b) = pair(qubit);
        (Self::hop(nqubits, a, b) - Self::hop(nqubits, b, a)).scale(C64::new(0.0, -1.0))
    }

    /// Pauli Z on `qubit`: `z_a d_a - z_b d_b`.
    pub fn pauli_z(nqubits: usize, qubit: usize) -> Self {
        let (a, b) = pair(qubit);
        Self::hop(nqubits, a, a) - Self::hop(nqubits, b, b)
    }

    /// Euler (pair number) operator `z_a d_a + z_b d_b`.
    pub fn euler(nqubits: usize, qubit: usize) -> Self {
        let (a, b) = pair(qubit);
        Self::hop(nqubits, a, a) + Self::hop(nqubits, b, b)
    }
}

fn pair(qubit: usize) -> (usize, usize) {
    (BasisConvention::var_a(qubit), BasisConvention::var_b(qubit))
}

fn falling_factorial(n: u16, k: u16) -> f64 {
    (0..k).map(|i| f64::from(n - i)).product()
}

fn binomial(n: u16, k: u16) -> f64 {
    falling_factorial(n, k) / (1..=k).map(f64::from).product::<f64>()
}

/// Odometer step over the box `0..=limits`; false once wrapped around.
fn advance(k: &mut [u16], limits: &[u16]) -> bool {
    for v in 0..k.len() {
        if k[v] < limits[v] {
            k[v] += 1;
            return true;
        }
        k[v] = 0;
    }
    false
}

impl Add for DiffOperator {
    type Output = DiffOperator;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs)
            .expect("operators on different qubit counts")
    }
}

impl Sub for DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: Self) -> Self {
        self.try_add(&rhs.scale(C64::new(-1.0, 0.0)))
            .expect("operators on different qubit counts")
    }
}

impl Neg for DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> Self {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &DiffOperator {
    type Output = DiffOperator;
    fn mul(self, rhs: Self) -> DiffOperator {
        self.compose(rhs)
            .expect("operators on different qubit counts")
    }
}

/// Pullback `f(z) -> f(M z)` under a linear change of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    nqubits: usize,
    matrix: DMatrix<C64>,
}

impl Substitution {
    pub fn new(nqubits: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let n = 2 * nqubits;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidParameter(format!(
                "substitution matrix must be {n}x{n}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.clone().try_inverse().is_none() {
            return Err(Error::InvalidParameter(
                "substitution matrix is singular".into(),
            ));
        }
        Ok(Self { nqubits, matrix })
    }

    pub fn identity(nqubits: usize) -> Self {
        let n = 2 * nqubits;
        Self {
            nqubits,
            matrix: DMatrix::identity(n, n),
        }
    }

    /// Substitution implementing the single-qubit unitary `u` on `qubit`.
    ///
    /// `U f` has coefficients `u c`, which is the pullback under `u^T` on
    /// the pair `(z_a, z_b)`.
    pub fn single_qubit(nqubits: usize, qubit: usize, u: &crate::Unitary2) -> Self {
        let (a, b) = pair(qubit);
        let mut s = Self::identity(nqubits);
        s.matrix[(a, a)] = u[(0, 0)];
        s.matrix[(a, b)] = u[(1, 0)];
        s.matrix[(b, a)] = u[(0, 1)];
        s.matrix[(b, b)] = u[(1, 1)];
        s
    }

    /// `z_a -> (z_a + z_b)/sqrt2`, `z_b -> (z_a - z_b)/sqrt2`.
    pub fn hadamard(nqubits: usize, qubit: usize) -> Self {
        Self::single_qubit(nqubits, qubit, &crate::gates::hadamard_matrix())
    }

    /// Exchange of the variable pairs of `j` and `k`.
    pub fn swap(nqubits: usize, j: usize, k: usize) -> Self {
        let n = 2 * nqubits;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(BasisConvention::var_a(j), BasisConvention::var_a(k));
        perm.swap(BasisConvention::var_b(j), BasisConvention::var_b(k));
        let mut matrix = DMatrix::zeros(n, n);
        for (row, &col) in perm.iter().enumerate() {
            matrix[(row, col)] = C64::new(1.0, 0.0);
        }
        Self { nqubits, matrix }
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let n = self.matrix.nrows();
        let prod = self.matrix.adjoint() * &self.matrix;
        (prod - DMatrix::<C64>::identity(n, n))
            .iter()
            .all(|d| d.norm() <= tol)
    }

    /// Expands `p(M z)` and re-collects terms.
    pub fn apply(&self, p: &SparsePoly) -> Result<SparsePoly> {
        if self.nqubits != p.nqubits() {
            return Err(Error::QubitMismatch {
                left: self.nqubits,
                right: p.nqubits(),
            });
        }
        let n = self.nqubits;
        let nv = 2 * n;
        let forms: Vec<SparsePoly> = (0..nv)
            .map(|row| {
                let mut f = SparsePoly::zero(n);
                for col in 0..nv {
                    let c = self.matrix[(row, col)];
                    if c.norm() > ZERO_TOL {
                        let mut e = vec![0; nv];
                        e[col] = 1;
                        f.add_term(e, c);
                    }
                }
                f
            })
            .collect();
        let mut out = SparsePoly::zero(n);
        for (e, c) in p.terms() {
            let mut acc = SparsePoly::constant(n, *c);
            for (var, &k) in e.iter().enumerate() {
                if k > 0 {
                    acc = acc.mul(&forms[var].pow(k))?;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn pauli_x_flips_za() {
        let x = DiffOperator::pauli_x(1, 1);
        let out = x.apply(&SparsePoly::variable(1, 0)).unwrap();
        assert_eq!(out, SparsePoly::variable(1, 1));
    }

    #[test]
    fn pauli_z_on_zb() {
        let z = DiffOperator::pauli_z(1, 1);
        let out = z.apply(&SparsePoly::variable(1, 1)).unwrap();
        assert_eq!(out, SparsePoly::variable(1, 1).scale(r(-1.0)));
    }

    #[test]
    fn power_rule() {
        let d = DiffOperator::derivative(1, 0);
        let out = d
            .apply(&SparsePoly::monomial(1, vec![3, 0], r(1.0)))
            .unwrap();
        assert_eq!(out, SparsePoly::monomial(1, vec![2, 0], r(3.0)));
        // derivative of a variable that is absent vanishes
        let out = d.apply(&SparsePoly::variable(1, 1)).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn canonical_commutator() {
        let d = DiffOperator::derivative(1, 0);
        let z = DiffOperator::multiply_by(1, 0);
        let dz = &d * &z;
        let expected = DiffOperator::hop(1, 0, 0) + DiffOperator::identity(1);
        assert_eq!(dz, expected);
        let zd = &z * &d;
        assert_eq!(dz - zd, DiffOperator::identity(1));
    }

    #[test]
    fn higher_order_normal_ordering() {
        // d^2 z^2 = z^2 d^2 + 4 z d + 2
        let d2 = DiffOperator::word(1, vec![0, 0], vec![2, 0], r(1.0));
        let z2 = DiffOperator::word(1, vec![2, 0], vec![0, 0], r(1.0));
        let prod = &d2 * &z2;
        assert_eq!(prod.coeff(&[2, 0], &[2, 0]), r(1.0));
        assert_eq!(prod.coeff(&[1, 0], &[1, 0]), r(4.0));
        assert_eq!(prod.coeff(&[0, 0], &[0, 0]), r(2.0));
        assert_eq!(prod.len(), 3);
        // and agrees with sequential application on a generic polynomial
        let p = SparsePoly::from_terms(1, [(vec![3, 1], r(0.5)), (vec![1, 0], r(2.0))]);
        let seq = d2.apply(&z2.apply(&p).unwrap()).unwrap();
        assert!(prod.apply(&p).unwrap().max_abs_diff(&seq) < 1e-12);
    }

    #[test]
    fn hadamard_substitution() {
        let h = Substitution::hadamard(1, 1);
        let s = FRAC_1_SQRT_2;
        let out = h.apply(&SparsePoly::variable(1, 0)).unwrap();
        assert_eq!(out.coeff(&[1, 0]), r(s));
        assert_eq!(out.coeff(&[0, 1]), r(s));
        let out = h.apply(&SparsePoly::variable(1, 1)).unwrap();
        assert_eq!(out.coeff(&[1, 0]), r(s));
        assert_eq!(out.coeff(&[0, 1]), r(-s));
        assert!(h.is_unitary(1e-12));
    }

    #[test]
    fn swap_substitution_exchanges_pairs() {
        let sw = Substitution::swap(2, 1, 2);
        let p = SparsePoly::monomial(2, vec![1, 0, 0, 1], r(1.0));
        let out = sw.apply(&p).unwrap();
        assert_eq!(out, SparsePoly::monomial(2, vec![0, 1, 1, 0], r(1.0)));
    }

    #[test]
    fn singular_substitution_rejected() {
        let m = DMatrix::<C64>::zeros(2, 2);
        assert!(Substitution::new(1, m).is_err());
        assert!(Substitution::new(1, DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn mismatched_operator_sizes() {
        let x = DiffOperator::pauli_x(1, 1);
        assert!(x.apply(&SparsePoly::variable(2, 0)).is_err());
        assert!(x.compose(&DiffOperator::pauli_x(2, 1)).is_err());
    }
}
