//! Phase-only dynamics on the torus obtained by setting `z = e^{i phi}`.
//!
//! Each qubit contributes a pair of angles `(phi_a, phi_b)`. The relative phase
//! is `dphi = phi_a - phi_b` and the total phase `sphi = phi_a + phi_b`. The
//! Pauli generators act as flows in the `(phi_a, phi_b)` plane:
//!
//! | generator | `H(dphi)`   | velocity `(phi_a', phi_b')` |
//! |-----------|-------------|-----------------------------|
//! | Z         | `dphi`      | `(-1, 1)`                   |
//! | X         | `sin dphi`  | `(cos dphi, -cos dphi)`     |
//! | Y         | `-cos dphi` | `(sin dphi, -sin dphi)`     |
//!
//! All three keep `sphi` fixed. Integration works on unwrapped angles; only
//! recorded samples are reduced to `[0, 2pi)`.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use crate::error::{Error, Result};
use crate::gates::Pauli;
use crate::C64;

/// Guard radius inside which the Hadamard map is undefined.
pub const SINGULAR_GUARD: f64 = 1e-9;
/// Minimum distance from a singularity for numeric Jacobians.
pub const JACOBIAN_GUARD: f64 = 1e-3;
/// Step of the central differences in [`poisson_bracket`].
pub const BRACKET_STEP: f64 = 1e-6;
/// Step of the central differences in the Jacobian routines.
pub const JACOBIAN_STEP: f64 = 1e-6;

/// Reduces an angle to `[0, 2pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_signed(x: f64) -> f64 {
    let r = wrap_angle(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Shortest arc length between two angles, in `[0, pi]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_signed(a - b).abs()
}

/// `cos(pi x)`, exactly zero at half-integers.
fn cos_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.5 || r == 1.5 {
        0.0
    } else {
        (r * PI).cos()
    }
}

/// `sin(pi x)`, exactly zero at integers.
fn sin_pi(x: f64) -> f64 {
    let r = x.rem_euclid(2.0);
    if r == 0.0 || r == 1.0 {
        0.0
    } else {
        (r * PI).sin()
    }
}

/// A point of the `2N`-torus, angles stored in `[0, 2pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint {
    phases: Vec<f64>,
}

impl TorusPoint {
    /// `phases = (phi_a1, phi_b1, ..., phi_aN, phi_bN)`, wrapped on construction.
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() || !phases.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "torus point needs an even, nonzero number of phases, got {}",
                phases.len()
            )));
        }
        if let Some(bad) = phases.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite phase {bad}")));
        }
        Ok(Self {
            phases: phases.into_iter().map(wrap_angle).collect(),
        })
    }

    pub fn pair(phi_a: f64, phi_b: f64) -> Result<Self> {
        Self::new(vec![phi_a, phi_b])
    }

    pub fn nqubits(&self) -> usize {
        self.phases.len() / 2
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit == 0 || qubit > self.nqubits() {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                nqubits: self.nqubits(),
            });
        }
        Ok(())
    }

    pub fn phi_a(&self, qubit: usize) -> f64 {
        self.phases[2 * (qubit - 1)]
    }

    pub fn phi_b(&self, qubit: usize) -> f64 {
        self.phases[2 * (qubit - 1) + 1]
    }

    /// `phi_a - phi_b` of the stored representatives, in `(-2pi, 2pi)`.
    pub fn delta(&self, qubit: usize) -> f64 {
        self.phi_a(qubit) - self.phi_b(qubit)
    }

    /// `phi_a + phi_b` of the stored representatives, in `[0, 4pi)`.
    pub fn sum(&self, qubit: usize) -> f64 {
        self.phi_a(qubit) + self.phi_b(qubit)
    }

    /// Largest circular distance between corresponding angles.
    pub fn distance(&self, other: &Self) -> f64 {
        self.phases
            .iter()
            .zip(&other.phases)
            .map(|(a, b)| circular_distance(*a, *b))
            .fold(0.0, f64::max)
    }

    fn with_pair(&self, qubit: usize, phi_a: f64, phi_b: f64) -> Self {
        let mut phases = self.phases.clone();
        phases[2 * (qubit - 1)] = wrap_angle(phi_a);
        phases[2 * (qubit - 1) + 1] = wrap_angle(phi_b);
        Self { phases }
    }
}

/// Value of the generator's Hamiltonian at relative phase `delta`.
pub fn pauli_hamiltonian(generator: Pauli, delta: f64) -> f64 {
    match generator {
        Pauli::Z => delta,
        Pauli::X => delta.sin(),
        Pauli::Y => -delta.cos(),
    }
}

/// Velocity `(phi_a', phi_b')` of the generator's flow at relative phase `delta`.
pub fn pair_velocity(generator: Pauli, delta: f64) -> (f64, f64) {
    let x = delta / PI;
    match generator {
        Pauli::Z => (-1.0, 1.0),
        Pauli::X => {
            let c = cos_pi(x);
            (c, -c)
        }
        Pauli::Y => {
            let s = sin_pi(x);
            (s, -s)
        }
    }
}

/// Velocity of the flowed pair at `point`; all other angles are at rest.
pub fn vector_field(generator: Pauli, point: &TorusPoint, qubit: usize) -> Result<(f64, f64)> {
    point.check_qubit(qubit)?;
    Ok(pair_velocity(generator, point.delta(qubit)))
}

/// One classical RK4 step of the pair `(phi_a, phi_b)`.
fn rk4_step(generator: Pauli, (a, b): (f64, f64), h: f64) -> (f64, f64) {
    let f = |a: f64, b: f64| pair_velocity(generator, a - b);
    let k1 = f(a, b);
    let k2 = f(a + 0.5 * h * k1.0, b + 0.5 * h * k1.1);
    let k3 = f(a + 0.5 * h * k2.0, b + 0.5 * h * k2.1);
    let k4 = f(a + h * k3.0, b + h * k3.1);
    (
        a + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        b + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

fn step_count(t_final: f64, dt: f64) -> usize {
    // absorb rounding in t_final/dt so that 10/1e-3 gives 10000 steps
    ((t_final / dt) - 1e-9).ceil().max(0.0) as usize
}

/// Time-`t` flow map of one pair on unwrapped angles.
pub fn flow_pair(generator: Pauli, start: (f64, f64), t: f64, dt: f64) -> (f64, f64) {
    let steps = step_count(t, dt);
    let mut s = start;
    let mut now = 0.0;
    for k in 0..steps {
        let next = if k + 1 == steps {
            t
        } else {
            (k + 1) as f64 * dt
        };
        s = rk4_step(generator, s, next - now);
        now = next;
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSpec {
    pub generator: Pauli,
    pub qubit: usize,
    pub t_final: f64,
    pub dt: f64,
}

impl FlowSpec {
    pub fn new(generator: Pauli, qubit: usize, t_final: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {dt}"
            )));
        }
        if !(t_final >= 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_final must be nonnegative, got {t_final}"
            )));
        }
        Ok(Self {
            generator,
            qubit,
            t_final,
            dt,
        })
    }
}

/// Samples of a flow, one per step, starting at `t = 0`.
///
/// `sums[k][j]` is the unwrapped total phase of qubit `j + 1` at sample `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, TorusPoint)>,
    pub sums: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> &TorusPoint {
        &self
            .samples
            .last()
            .expect("trajectory has a first sample")
            .1
    }

    /// Largest `|sphi_j(t) - sphi_j(0)|` over samples and qubits.
    pub fn max_sum_drift(&self) -> f64 {
        let first = &self.sums[0];
        self.sums
            .iter()
            .flat_map(|s| s.iter().zip(first).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// Delimiter-separated export: `t`, the wrapped angles, then the total phases.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let n = self.samples.first().map_or(0, |s| s.1.nqubits());
        let mut header = vec!["t".to_string()];
        for j in 1..=n {
            header.push(format!("phi_a_{j}"));
            header.push(format!("phi_b_{j}"));
        }
        for j in 1..=n {
            header.push(format!("sum_phase_{j}"));
        }
        writeln!(w, "{}", header.join(","))?;
        for ((t, p), sums) in self.samples.iter().zip(&self.sums) {
            let mut row = vec![format!("{t:.16e}")];
            row.extend(p.phases().iter().map(|x| format!("{x:.16e}")));
            row.extend(sums.iter().map(|x| format!("{x:.16e}")));
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Fixed-step RK4 integration of one generator acting on one qubit.
pub fn integrate_flow(spec: &FlowSpec, start: &TorusPoint) -> Result<Trajectory> {
    start.check_qubit(spec.qubit)?;
    let mut state: Vec<f64> = start.phases().to_vec();
    let (ia, ib) = (2 * (spec.qubit - 1), 2 * (spec.qubit - 1) + 1);
    let sums_of = |s: &[f64]| s.chunks(2).map(|p| p[0] + p[1]).collect::<Vec<f64>>();

    let steps = step_count(spec.t_final, spec.dt);
    let mut samples = Vec::with_capacity(steps + 1);
    let mut sums = Vec::with_capacity(steps + 1);
    samples.push((0.0, start.clone()));
    sums.push(sums_of(&state));

    let mut now = 0.0;
    for k in 0..steps {
        let next = if k + 1 == steps {
            spec.t_final
        } else {
            (k + 1) as f64 * spec.dt
        };
        let (a, b) = rk4_step(spec.generator, (state[ia], state[ib]), next - now);
        state[ia] = a;
        state[ib] = b;
        now = next;
        samples.push((now, TorusPoint::new(state.clone())?));
        sums.push(sums_of(&state));
    }
    Ok(Trajectory { samples, sums })
}

/// `{f, g} = df/dphi_a dg/dphi_b - df/dphi_b dg/dphi_a` by central differences.
pub fn poisson_bracket<F, G>(f: F, g: G, phi_a: f64, phi_b: f64) -> f64
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    let h = BRACKET_STEP;
    let grad = |u: &dyn Fn(f64, f64) -> f64| {
        (
            (u(phi_a + h, phi_b) - u(phi_a - h, phi_b)) / (2.0 * h),
            (u(phi_a, phi_b + h) - u(phi_a, phi_b - h)) / (2.0 * h),
        )
    };
    let (fa, fb) = grad(&f);
    let (ga, gb) = grad(&g);
    fa * gb - fb * ga
}

/// Bracket of two generator Hamiltonians, each a function of `phi_a - phi_b`.
pub fn pauli_bracket(first: Pauli, second: Pauli, phi_a: f64, phi_b: f64) -> f64 {
    poisson_bracket(
        |a, b| pauli_hamiltonian(first, a - b),
        |a, b| pauli_hamiltonian(second, a - b),
        phi_a,
        phi_b,
    )
}

/// Circular distance of `delta` from the singular set `{0, pi} mod 2pi`.
pub fn hadamard_singularity_distance(delta: f64) -> f64 {
    circular_distance(delta, 0.0).min(circular_distance(delta, PI))
}

/// Phase image of the Hadamard gate on qubit `qubit`:
///
/// `phi_a' = sphi/2 + arg(1 + e^{i dphi})`, `phi_b' = sphi/2 + arg(1 - e^{i dphi})`.
///
/// Undefined where either argument vanishes, i.e. `dphi = 0` or `pi`.
pub fn hadamard_torus_map(point: &TorusPoint, qubit: usize) -> Result<TorusPoint> {
    point.check_qubit(qubit)?;
    let (a, b) = hadamard_pair(point.phi_a(qubit), point.phi_b(qubit))?;
    Ok(point.with_pair(qubit, a, b))
}

/// Unwrapped form of [`hadamard_torus_map`] for a single pair.
///
/// `dphi` is taken in `(-pi, pi]` and `sphi/2 = phi_a - dphi/2`, so the result
/// does not depend on which representatives of the angles are passed in.
pub fn hadamard_pair(phi_a: f64, phi_b: f64) -> Result<(f64, f64)> {
    let delta = wrap_signed(phi_a - phi_b);
    if hadamard_singularity_distance(delta) <= SINGULAR_GUARD {
        return Err(Error::Singular(delta));
    }
    let half_sum = phi_a - 0.5 * delta;
    let e = C64::from_polar(1.0, delta);
    let one = C64::new(1.0, 0.0);
    Ok((half_sum + (one + e).arg(), half_sum + (one - e).arg()))
}

/// Determinant of the Jacobian of a map of the `(phi_a, phi_b)` plane.
///
/// Output differences are reduced to `(-pi, pi]` before dividing, so maps
/// that wrap their output are handled.
pub fn jacobian_det<M>(map: M, phi_a: f64, phi_b: f64) -> Result<f64>
where
    M: Fn(f64, f64) -> Result<(f64, f64)>,
{
    let h = JACOBIAN_STEP;
    let diff = |p: (f64, f64), m: (f64, f64)| {
        (
            wrap_signed(p.0 - m.0) / (2.0 * h),
            wrap_signed(p.1 - m.1) / (2.0 * h),
        )
    };
    let da = diff(map(phi_a + h, phi_b)?, map(phi_a - h, phi_b)?);
    let db = diff(map(phi_a, phi_b + h)?, map(phi_a, phi_b - h)?);
    Ok(da.0 * db.1 - db.0 * da.1)
}

/// Jacobian determinant of the Hadamard phase map on one qubit.
pub fn hadamard_jacobian_det(point: &TorusPoint, qubit: usize) -> Result<f64> {
    point.check_qubit(qubit)?;
    let distance = hadamard_singularity_distance(point.delta(qubit));
    if distance < JACOBIAN_GUARD {
        return Err(Error::NearSingular {
            distance,
            guard: JACOBIAN_GUARD,
        });
    }
    jacobian_det(hadamard_pair, point.phi_a(qubit), point.phi_b(qubit))
}

/// Jacobian determinant of the time-`t` flow map of a generator.
pub fn flow_jacobian_det(generator: Pauli, phi_a: f64, phi_b: f64, t: f64, dt: f64) -> f64 {
    jacobian_det(|a, b| Ok(flow_pair(generator, (a, b), t, dt)), phi_a, phi_b)
        .expect("flow map is defined everywhere")
}

/// Exchange of the angle pairs of qubits `j` and `k`.
pub fn swap_torus(point: &TorusPoint, j: usize, k: usize) -> Result<TorusPoint> {
    point.check_qubit(j)?;
    point.check_qubit(k)?;
    if j == k {
        return Err(Error::RepeatedQubit(j));
    }
    let mut phases = point.phases.clone();
    phases.swap(2 * (j - 1), 2 * (k - 1));
    phases.swap(2 * (j - 1) + 1, 2 * (k - 1) + 1);
    Ok(TorusPoint { phases })
}
