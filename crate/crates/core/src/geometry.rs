//! Projective geometry of pure states: fidelity, Fubini-Study distance,
//! distance to the product-state (Segre) manifold and discrete Berry holonomy.

use nalgebra::Matrix2;
use rand::Rng;

use crate::error::{Error, Result};
use crate::holostate::{state_inner, BitString, HoloState};
use crate::sampling::{self, random_unit_vector};
use crate::{C64, NORM_TOL};

/// Default distance below which a state counts as separable.
pub const SEPARABLE_TOL: f64 = 1e-6;

fn require_normalized(s: &HoloState) -> Result<()> {
    if !s.is_normalized() {
        return Err(Error::NotNormalized(s.norm_sqr()));
    }
    Ok(())
}

/// `|<psi|phi>|^2` for normalized states.
pub fn fidelity(psi: &HoloState, phi: &HoloState) -> Result<f64> {
    require_normalized(psi)?;
    require_normalized(phi)?;
    Ok(state_inner(psi, phi)?.norm_sqr())
}

/// `arccos(|<psi|phi>| / (|psi| |phi|))`, in `[0, pi/2]`.
///
/// Evaluated as `2 asin(|psi - e^{i theta} phi| / 2)` on the normalized,
/// phase-aligned vectors, which keeps full precision near zero distance.
pub fn fubini_study_distance(psi: &HoloState, phi: &HoloState) -> Result<f64> {
    if psi.nqubits() != phi.nqubits() {
        return Err(Error::QubitMismatch {
            left: psi.nqubits(),
            right: phi.nqubits(),
        });
    }
    let (np, nf) = (psi.norm_sqr().sqrt(), phi.norm_sqr().sqrt());
    if np == 0.0 || nf == 0.0 {
        return Err(Error::ZeroState);
    }
    let ov = state_inner(phi, psi)?;
    let phase = if ov.norm() > 0.0 {
        ov / ov.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let (a, b) = (psi.to_vector(), phi.to_vector());
    let chord = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x / np - phase * y / nf).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(2.0 * (0.5 * chord).min(1.0).asin())
}

/// `prod_j (c_{0j} z_{a_j} + c_{1j} z_{b_j})` with each factor normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    factors: Vec<[C64; 2]>,
}

impl ProductState {
    pub fn new(factors: Vec<[C64; 2]>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "product state needs a factor".into(),
            ));
        }
        for f in &factors {
            let n = f[0].norm_sqr() + f[1].norm_sqr();
            if (n - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(n));
            }
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[[C64; 2]] {
        &self.factors
    }

    pub fn nqubits(&self) -> usize {
        self.factors.len()
    }

    pub fn to_vector(&self) -> Vec<C64> {
        let n = self.factors.len();
        (0..1usize << n)
            .map(|i| {
                let s = BitString::from_index(i, n);
                s.bits()
                    .iter()
                    .zip(&self.factors)
                    .map(|(&b, f)| f[b as usize])
                    .product()
            })
            .collect()
    }

    pub fn to_holo(&self) -> HoloState {
        crate::holostate::encode_state(&self.to_vector()).expect("power-of-two length")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub gain_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iterations: 500,
            gain_tol: 1e-12,
            seed: 0xC0FFEE,
        }
    }
}

/// Result of one alternating-maximization run.
#[derive(Clone, Debug, PartialEq)]
pub struct Optimized {
    pub witness: ProductState,
    pub overlap: f64,
    pub sweeps: usize,
    /// Overlap after every single-qubit update.
    pub history: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartStat {
    pub seed: u64,
    pub overlap: f64,
    pub sweeps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementReport {
    /// Fubini-Study distance to the closest product state found.
    pub measure: f64,
    pub max_overlap: f64,
    pub witness: ProductState,
    pub best_restart: usize,
    pub restarts: Vec<RestartStat>,
}

/// Maximizes `|<phi_1 ... phi_N|psi>|` by cycling closed-form single-qubit updates.
///
/// With all factors but `j` fixed, the overlap is `<phi_j|v>` for the partial
/// contraction `v`, maximized by `phi_j = v / |v|` with value `|v|`.
pub fn optimize_from(psi: &[C64], start: ProductState, opts: &OptimizerOptions) -> Optimized {
    let n = start.nqubits();
    assert_eq!(psi.len(), 1 << n, "state and product state sizes differ");
    let mut factors = start.factors;
    let mut history = Vec::new();
    let mut best = 0.0;
    let mut sweeps = 0;
    for sweep in 1..=opts.max_iterations {
        sweeps = sweep;
        let mut overlap = 0.0;
        for j in 0..n {
            let mask = 1usize << (n - 1 - j);
            let mut v = [C64::default(); 2];
            for (i, amp) in psi.iter().enumerate() {
                let mut w = *amp;
                for (k, f) in factors.iter().enumerate() {
                    if k != j {
                        let bit = (i >> (n - 1 - k)) & 1;
                        w *= f[bit].conj();
                    }
                }
                v[usize::from(i & mask != 0)] += w;
            }
            let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if norm > 0.0 {
                factors[j] = [v[0] / norm, v[1] / norm];
            }
            overlap = norm;
            history.push(norm);
        }
        let gain = overlap - best;
        best = best.max(overlap);
        if gain < opts.gain_tol {
            break;
        }
    }
    Optimized {
        witness: ProductState { factors },
        overlap: best,
        sweeps,
        history,
    }
}

fn random_product<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProductState {
    let factors = (0..n)
        .map(|_| {
            let v = random_unit_vector(rng, 2);
            [v[0], v[1]]
        })
        .collect();
    ProductState { factors }
}

pub fn entanglement_measure(psi: &HoloState) -> Result<EntanglementReport> {
    entanglement_measure_with(psi, &OptimizerOptions::default())
}

/// Minimum Fubini-Study distance from `psi` to the product states, by
/// multi-start alternating maximization of the product overlap.
pub fn entanglement_measure_with(
    psi: &HoloState,
    opts: &OptimizerOptions,
) -> Result<EntanglementReport> {
    require_normalized(psi)?;
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let amps = psi.to_vector();
    let n = psi.nqubits();
    let mut stats = Vec::with_capacity(opts.restarts);
    let mut best: Option<(usize, Optimized)> = None;
    for r in 0..opts.restarts {
        let seed = opts.seed.wrapping_add(r as u64);
        let start = random_product(&mut sampling::rng(seed), n);
        let run = optimize_from(&amps, start, opts);
        stats.push(RestartStat {
            seed,
            overlap: run.overlap,
            sweeps: run.sweeps,
        });
        // ties keep the earlier seed
        if best.as_ref().is_none_or(|(_, b)| run.overlap > b.overlap) {
            best = Some((r, run));
        }
    }
    let (best_restart, run) = best.expect("at least one restart");
    let measure = fubini_study_distance(psi, &run.witness.to_holo())?;
    Ok(EntanglementReport {
        measure,
        max_overlap: run.overlap.min(1.0),
        witness: run.witness,
        best_restart,
        restarts: stats,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Separability {
    pub separable: bool,
    pub measure: f64,
    /// Closest product state found; a factorization of `psi` when separable.
    pub witness: ProductState,
}

pub fn is_separable(psi: &HoloState, tol: f64) -> Result<Separability> {
    let report = entanglement_measure(psi)?;
    Ok(Separability {
        separable: report.measure <= tol,
        measure: report.measure,
        witness: report.witness,
    })
}

/// Largest Schmidt coefficient of a two-qubit state and its `arccos`.
pub fn schmidt_oracle(psi: &HoloState) -> Result<(f64, f64)> {
    if psi.nqubits() != 2 {
        return Err(Error::InvalidParameter(format!(
            "Schmidt oracle needs 2 qubits, got {}",
            psi.nqubits()
        )));
    }
    require_normalized(psi)?;
    let v = psi.to_vector();
    let m = Matrix2::new(v[0], v[1], v[2], v[3]);
    let sv = m.svd(false, false).singular_values;
    let top = sv.max().min(1.0);
    Ok((top, top.acos()))
}

/// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
pub fn bloch_state(theta: f64, phi: f64) -> HoloState {
    let amps = [
        C64::new((0.5 * theta).cos(), 0.0),
        C64::from_polar((0.5 * theta).sin(), phi),
    ];
    crate::holostate::encode_state(&amps).expect("two amplitudes")
}

/// Minimum number of points of a [`StateLoop`].
pub const MIN_LOOP_POINTS: usize = 16;
/// Consecutive overlaps below this magnitude reject the loop.
pub const VANISHING_OVERLAP: f64 = 1e-8;

/// Closed loop of `M` states; the last state connects back to the first.
#[derive(Clone, Debug, PartialEq)]
pub struct StateLoop {
    states: Vec<HoloState>,
}

impl StateLoop {
    pub fn new(states: Vec<HoloState>) -> Result<Self> {
        if states.len() < MIN_LOOP_POINTS {
            return Err(Error::LoopTooShort {
                min: MIN_LOOP_POINTS,
                actual: states.len(),
            });
        }
        let n = states[0].nqubits();
        for s in &states {
            if s.nqubits() != n {
                return Err(Error::QubitMismatch {
                    left: n,
                    right: s.nqubits(),
                });
            }
            if s.norm_sqr() == 0.0 {
                return Err(Error::ZeroState);
            }
        }
        Ok(Self { states })
    }

    /// `M` equally spaced points on the circle of polar angle `theta`.
    pub fn bloch_circle(theta: f64, m: usize) -> Result<Self> {
        Self::new(
            (0..m)
                .map(|k| bloch_state(theta, std::f64::consts::TAU * k as f64 / m as f64))
                .collect(),
        )
    }

    pub fn states(&self) -> &[HoloState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Multiplies every state by its own phase from `phases`.
    pub fn regauge(&self, phases: &[f64]) -> Self {
        assert_eq!(phases.len(), self.states.len());
        let states = self
            .states
            .iter()
            .zip(phases)
            .map(|(s, &p)| s.scale(C64::from_polar(1.0, p)))
            .collect();
        Self { states }
    }
}

/// `gamma = -arg prod_k <psi_k|psi_{k+1}>` over the closed loop, in `(-pi, pi]`.
pub fn berry_holonomy(lp: &StateLoop) -> Result<f64> {
    let m = lp.states.len();
    let mut acc = C64::new(1.0, 0.0);
    for k in 0..m {
        let (a, b) = (&lp.states[k], &lp.states[(k + 1) % m]);
        let ov = state_inner(a, b)?;
        let scale = (a.norm_sqr() * b.norm_sqr()).sqrt();
        if ov.norm() <= VANISHING_OVERLAP * scale {
            return Err(Error::VanishingOverlap {
                index: k,
                overlap: ov.norm() / scale,
            });
        }
        acc *= ov / ov.norm();
    }
    let gamma = -acc.arg();
    // -arg lands in [-pi, pi); move -pi to +pi
    Ok(if gamma <= -std::f64::consts::PI {
        gamma + std::f64::consts::TAU
    } else {
        gamma
    })
}

/// `-pi (1 - cos theta)`, the half solid angle of the circle at polar angle `theta`.
pub fn bloch_circle_phase(theta: f64) -> f64 {
    -std::f64::consts::PI * (1.0 - theta.cos())
}
