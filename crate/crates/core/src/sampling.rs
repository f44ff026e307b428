//! Seeded random states, unitaries and circuits for property tests and benchmarks.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::gates::{Circuit, GateKind, GateSpec};
use crate::holostate::{encode_state, HoloState};
use crate::{Unitary2, C64};

pub type SimRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unit vector with i.i.d. complex Gaussian components.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..len).map(|_| gaussian_complex(rng)).collect();
        let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|c| c / n).collect();
        }
    }
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, nqubits: usize) -> HoloState {
    encode_state(&random_unit_vector(rng, 1 << nqubits)).expect("power-of-two length")
}

/// Gram-Schmidt orthonormalization of a complex Gaussian 2x2 matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Unitary2 {
    loop {
        let v1 = [gaussian_complex(rng), gaussian_complex(rng)];
        let v2 = [gaussian_complex(rng), gaussian_complex(rng)];
        let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
        if n1 < 1e-6 {
            continue;
        }
        let e1 = [v1[0] / n1, v1[1] / n1];
        let proj = e1[0].conj() * v2[0] + e1[1].conj() * v2[1];
        let w = [v2[0] - proj * e1[0], v2[1] - proj * e1[1]];
        let n2 = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if n2 < 1e-6 {
            continue;
        }
        let e2 = [w[0] / n2, w[1] / n2];
        return Unitary2::new(e1[0], e2[0], e1[1], e2[1]);
    }
}

fn distinct_pair<R: Rng + ?Sized>(rng: &mut R, nqubits: usize) -> (usize, usize) {
    let a = rng.random_range(1..=nqubits);
    let mut b = rng.random_range(1..nqubits);
    if b >= a {
        b += 1;
    }
    (a, b)
}

pub fn random_gate<R: Rng + ?Sized>(rng: &mut R, nqubits: usize) -> GateSpec {
    let kinds: &[GateKind] = if nqubits == 1 {
        &GateKind::ALL[..4]
    } else {
        &GateKind::ALL
    };
    let kind = *kinds.choose(rng).expect("non-empty");
    match kind.arity() {
        1 => GateSpec::single(kind, rng.random_range(1..=nqubits)),
        _ => {
            let (a, b) = distinct_pair(rng, nqubits);
            if kind == GateKind::Cu {
                GateSpec::cu(a, b, random_unitary(rng))
            } else {
                GateSpec::two(kind, a, b)
            }
        }
    }
}

pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, nqubits: usize, depth: usize) -> Circuit {
    let gates = (0..depth).map(|_| random_gate(rng, nqubits)).collect();
    Circuit::new(nqubits, gates).expect("sampled gates are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::unitarity_defect;

    #[test]
    fn unitaries_are_unitary() {
        let mut r = rng(7);
        for _ in 0..100 {
            assert!(unitarity_defect(&random_unitary(&mut r)) < 1e-12);
        }
    }

    #[test]
    fn seeded_circuits_repeat() {
        let a = random_circuit(&mut rng(1), 4, 30);
        let b = random_circuit(&mut rng(1), 4, 30);
        assert_eq!(a, b);
        assert_eq!(a.len(), 30);
    }

    #[test]
    fn states_are_normalized() {
        let mut r = rng(3);
        for n in 1..=5 {
            assert!(random_state(&mut r, n).is_normalized());
        }
    }
}
