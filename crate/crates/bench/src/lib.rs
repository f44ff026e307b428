//! Seeded inputs shared by the benchmarks.

use holoqc::sampling::{random_circuit, random_state, rng};
use holoqc::{Circuit, HoloState};

pub const SEED: u64 = 0xC0FFEE;

/// A random circuit of `depth` gates on `n` qubits with a random input state.
pub fn workload(n: usize, depth: usize) -> (Circuit, HoloState) {
    let mut r = rng(SEED ^ (n as u64) << 8 ^ depth as u64);
    let c = random_circuit(&mut r, n, depth);
    let s = random_state(&mut r, n);
    (c, s)
}

pub fn random_input(n: usize) -> HoloState {
    random_state(&mut rng(SEED + n as u64), n)
}
