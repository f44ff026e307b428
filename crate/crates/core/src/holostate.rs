//! Qubit states as holomorphic polynomials in the Segal-Bargmann space.
//!
//! A basis state `|s_1 ... s_N>` is the monomial `prod_j z_{a_j}^{1-s_j} z_{b_j}^{s_j}`,
//! and a general state is the linear combination `f(z) = sum_s c_s prod_j (...)`.
//! Physical polynomials are exactly those with degree one in every pair
//! `(z_{a_j}, z_{b_j})`, i.e. eigenvalue 1 of each pair's Euler operator.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::{Exponents, SparsePoly};
use crate::{C64, NORM_TOL, ZERO_TOL};

/// The single qubit/variable convention shared by every module.
///
/// Qubits are numbered `1..=N`. Bit `0` of qubit `j` is `z_{a_j}`, bit `1`
/// is `z_{b_j}`. In the flat variable layout `z_{a_j}` sits at `2(j-1)` and
/// `z_{b_j}` at `2(j-1)+1`. Amplitude vectors are big-endian: qubit 1 is the
/// most significant bit of the index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BasisConvention;

impl BasisConvention {
    pub const fn var_a(qubit: usize) -> usize {
        2 * (qubit - 1)
    }

    pub const fn var_b(qubit: usize) -> usize {
        2 * (qubit - 1) + 1
    }

    /// Variable carrying bit value `bit` of `qubit`.
    pub const fn var_for(qubit: usize, bit: u8) -> usize {
        2 * (qubit - 1) + bit as usize
    }

    /// Position of `qubit` in a big-endian basis index of an `nqubits` register.
    pub const fn bit_position(qubit: usize, nqubits: usize) -> usize {
        nqubits - qubit
    }

    pub fn var_name(var: usize) -> String {
        let q = var / 2 + 1;
        if var.is_multiple_of(2) {
            format!("za{q}")
        } else {
            format!("zb{q}")
        }
    }
}

/// Computational basis label `s_1 s_2 ... s_N`, qubit 1 first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidBitString(
                bits.iter().map(|b| b.to_string()).collect(),
            ));
        }
        Ok(Self(bits))
    }

    /// Big-endian decoding of a basis index.
    pub fn from_index(index: usize, nqubits: usize) -> Self {
        let bits = (1..=nqubits)
            .map(|q| ((index >> BasisConvention::bit_position(q, nqubits)) & 1) as u8)
            .collect();
        Self(bits)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    /// Bit of the 1-based `qubit`.
    pub fn bit(&self, qubit: usize) -> u8 {
        self.0[qubit - 1]
    }

    fn exponents(&self) -> Exponents {
        let mut e = vec![0; 2 * self.0.len()];
        for (j, &b) in self.0.iter().enumerate() {
            e[BasisConvention::var_for(j + 1, b)] = 1;
        }
        e
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits: Option<Vec<u8>> = s
            .chars()
            .map(|ch| match ch {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect();
        match bits {
            Some(b) if !b.is_empty() => Ok(Self(b)),
            _ => Err(Error::InvalidBitString(s.to_string())),
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Physical-subspace state: the coefficients `c_s` of the basis expansion.
///
/// Amplitudes with magnitude at or below [`ZERO_TOL`] are not stored. The
/// `normalized` flag is computed once and never used to rescale.
#[derive(Clone, Debug, PartialEq)]
pub struct HoloState {
    nqubits: usize,
    amplitudes: BTreeMap<BitString, C64>,
    normalized: bool,
}

impl HoloState {
    pub fn from_amplitudes<I>(nqubits: usize, amps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BitString, C64)>,
    {
        if nqubits == 0 {
            return Err(Error::InvalidParameter(
                "state needs at least one qubit".into(),
            ));
        }
        let mut amplitudes = BTreeMap::new();
        for (s, c) in amps {
            if s.len() != nqubits {
                return Err(Error::BitStringLength {
                    bits: s.to_string(),
                    len: s.len(),
                    expected: nqubits,
                });
            }
            let slot = amplitudes.entry(s).or_insert(C64::default());
            *slot += c;
        }
        amplitudes.retain(|_, c: &mut C64| c.norm() > ZERO_TOL);
        let norm_sqr: f64 = amplitudes.values().map(|c| c.norm_sqr()).sum();
        Ok(Self {
            nqubits,
            amplitudes,
            normalized: (norm_sqr - 1.0).abs() <= NORM_TOL,
        })
    }

    /// Basis state `|s>`.
    pub fn basis(s: &str) -> Result<Self> {
        let bits: BitString = s.parse()?;
        let n = bits.len();
        Self::from_amplitudes(n, [(bits, C64::new(1.0, 0.0))])
    }

    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn amplitudes(&self) -> &BTreeMap<BitString, C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, s: &BitString) -> C64 {
        self.amplitudes.get(s).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|c| c.norm_sqr()).sum()
    }

    /// Dense big-endian amplitude vector of length `2^N`.
    pub fn to_vector(&self) -> Vec<C64> {
        let mut v = vec![C64::default(); 1 << self.nqubits];
        for (s, c) in &self.amplitudes {
            v[s.index()] = *c;
        }
        v
    }

    /// Returns a copy scaled to unit norm.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n <= ZERO_TOL {
            return Err(Error::ZeroState);
        }
        Self::from_amplitudes(
            self.nqubits,
            self.amplitudes.iter().map(|(s, c)| (s.clone(), c / n)),
        )
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::from_amplitudes(
            self.nqubits,
            self.amplitudes.iter().map(|(s, v)| (s.clone(), v * c)),
        )
        .expect("same shape")
    }
}

/// Monomial `prod_j z_{a_j}^{1-s_j} z_{b_j}^{s_j}` with coefficient 1.
pub fn encode_basis(s: &str) -> Result<SparsePoly> {
    let bits: BitString = s.parse()?;
    Ok(SparsePoly::monomial(
        bits.len(),
        bits.exponents(),
        C64::new(1.0, 0.0),
    ))
}

/// Reads a big-endian amplitude vector of length `2^N`.
pub fn encode_state(amps: &[C64]) -> Result<HoloState> {
    let len = amps.len();
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    HoloState::from_amplitudes(
        n,
        amps.iter()
            .enumerate()
            .map(|(i, c)| (BitString::from_index(i, n), *c)),
    )
}

pub fn to_poly(state: &HoloState) -> SparsePoly {
    SparsePoly::from_terms(
        state.nqubits,
        state.amplitudes.iter().map(|(s, c)| (s.exponents(), *c)),
    )
}

/// Reads the coefficients of a physical polynomial back into a state.
///
/// Fails on the first term outside the degree-one-per-pair lattice.
pub fn from_poly(p: &SparsePoly) -> Result<HoloState> {
    let n = p.nqubits();
    let mut amps = Vec::with_capacity(p.len());
    for (e, c) in p.terms() {
        let mut bits = Vec::with_capacity(n);
        for j in 1..=n {
            let ea = e[BasisConvention::var_a(j)];
            let eb = e[BasisConvention::var_b(j)];
            match (ea, eb) {
                (1, 0) => bits.push(0),
                (0, 1) => bits.push(1),
                _ => return Err(Error::NotPhysical(e.clone())),
            }
        }
        amps.push((BitString(bits), *c));
    }
    HoloState::from_amplitudes(n, amps)
}

/// Euler condition for pair `qubit`: every term has `e_{a_j} + e_{b_j} = 1`.
///
/// The zero polynomial passes vacuously.
pub fn check_homogeneity(p: &SparsePoly, qubit: usize) -> bool {
    assert!(
        (1..=p.nqubits()).contains(&qubit),
        "qubit index {qubit} out of range"
    );
    let (a, b) = (BasisConvention::var_a(qubit), BasisConvention::var_b(qubit));
    p.terms().all(|(e, _)| e[a] + e[b] == 1)
}

pub fn is_physical(p: &SparsePoly) -> bool {
    (1..=p.nqubits()).all(|j| check_homogeneity(p, j))
}

fn factorial(k: u16) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Bargmann inner product `<f, g>`, antilinear in `f`.
///
/// Distinct monomials are orthogonal and `<z^e, z^e> = prod_k e_k!`.
pub fn sb_inner_product(f: &SparsePoly, g: &SparsePoly) -> Result<C64> {
    f.check_same(g)?;
    let (small, large, conj_small) = if f.len() <= g.len() {
        (f, g, true)
    } else {
        (g, f, false)
    };
    let mut acc = C64::default();
    for (e, cs) in small.terms() {
        let cl = large.coeff(e);
        if cl == C64::default() {
            continue;
        }
        let w: f64 = e.iter().map(|&k| factorial(k)).product();
        let term = if conj_small {
            cs.conj() * cl
        } else {
            cl.conj() * cs
        };
        acc += term * w;
    }
    Ok(acc)
}

/// Hermitian dot product of two states (amplitudes of `a` conjugated).
pub fn state_inner(a: &HoloState, b: &HoloState) -> Result<C64> {
    sb_inner_product(&to_poly(a), &to_poly(b))
}
