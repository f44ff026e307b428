//! Sparse multivariate polynomials over the `2N` Schwinger-boson variables.
//!
//! Variables are laid out pairwise as `(z_{a_1}, z_{b_1}, ..., z_{a_N}, z_{b_N})`,
//! see [`BasisConvention`](crate::BasisConvention). Terms are kept in a
//! `BTreeMap` keyed by exponent vector so iteration order is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::{BasisConvention, C64, ZERO_TOL};

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<u16>;

#[derive(Clone, Debug, PartialEq)]
pub struct SparsePoly {
    nqubits: usize,
    terms: BTreeMap<Exponents, C64>,
}

impl SparsePoly {
    pub fn zero(nqubits: usize) -> Self {
        assert!(nqubits > 0, "polynomial needs at least one qubit");
        Self {
            nqubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nqubits: usize, c: C64) -> Self {
        let mut p = Self::zero(nqubits);
        p.add_term(vec![0; 2 * nqubits], c);
        p
    }

    /// Single monomial `c * z^exps`.
    pub fn monomial(nqubits: usize, exps: Exponents, c: C64) -> Self {
        let mut p = Self::zero(nqubits);
        p.add_term(exps, c);
        p
    }

    /// The bare variable with flat index `var`.
    pub fn variable(nqubits: usize, var: usize) -> Self {
        let mut e = vec![0; 2 * nqubits];
        e[var] = 1;
        Self::monomial(nqubits, e, C64::new(1.0, 0.0))
    }

    /// Build from arbitrary `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(nqubits: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, C64)>,
    {
        let mut p = Self::zero(nqubits);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn nvars(&self) -> usize {
        2 * self.nqubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> C64 {
        self.terms.get(exps).copied().unwrap_or_default()
    }

    /// Accumulate `c * z^exps`, dropping the term if it cancels below [`ZERO_TOL`].
    pub fn add_term(&mut self, exps: Exponents, c: C64) {
        assert_eq!(
            exps.len(),
            self.nvars(),
            "exponent vector length must be 2N"
        );
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
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
        Self::from_terms(
            self.nqubits,
            self.terms.iter().map(|(e, v)| (e.clone(), v * c)),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.nqubits);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u16) -> Self {
        let mut acc = Self::constant(self.nqubits, C64::new(1.0, 0.0));
        for _ in 0..k {
            acc = acc.mul(self).expect("same qubit count");
        }
        acc
    }

    /// Sum of `|c|^2` over stored coefficients (the physical-subspace norm).
    pub fn coeff_norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficient difference against `other`, term by term.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for (e, c) in &self.terms {
            d = d.max((c - other.coeff(e)).norm());
        }
        for (e, c) in &other.terms {
            if !self.terms.contains_key(e) {
                d = d.max(c.norm());
            }
        }
        d
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.nqubits != other.nqubits {
            return Err(Error::QubitMismatch {
                left: self.nqubits,
                right: other.nqubits,
            });
        }
        Ok(())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)", c.re, c.im)?;
            for (var, &k) in e.iter().enumerate() {
                if k > 0 {
                    write!(f, "*{}", BasisConvention::var_name(var))?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
