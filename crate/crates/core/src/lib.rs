//! Holomorphic simulation of qubit circuits.
//!
//! States of `N` qubits live in the Segal-Bargmann space of `2N` complex
//! variables as polynomials that are homogeneous of degree one in every pair
//! `(z_{a_j}, z_{b_j})`. Gates act as differential operators or as linear
//! substitutions of the variables. Alongside the engine the crate provides:
//!
//! - [`oracle`]: a dense state-vector simulator used as reference,
//! - [`torus`]: phase-only dynamics on the torus `|z| = 1`,
//! - [`geometry`]: fidelity, Fubini-Study distance, the product-state
//!   entanglement measure and discrete Berry holonomy,
//! - [`semiclassical`]: classical Hamilton flow of quadratic Hamiltonians,
//! - [`formats`]: the JSON state and circuit files.
//!
//! ```
//! use holoqc::{run_circuit_holo, Circuit, GateKind, GateSpec, HoloState};
//!
//! let bell = Circuit::new(2, vec![
//!     GateSpec::single(GateKind::H, 1),
//!     GateSpec::two(GateKind::Cnot, 1, 2),
//! ]).unwrap();
//! let out = run_circuit_holo(&bell, &HoloState::basis("00").unwrap()).unwrap();
//! assert_eq!(out.amplitudes().len(), 2);
//! ```

pub mod diffop;
pub mod error;
pub mod formats;
pub mod gates;
pub mod geometry;
pub mod holostate;
pub mod oracle;
pub mod poly;
pub mod sampling;
pub mod semiclassical;
pub mod torus;

pub use num_complex::Complex64 as C64;

/// 2x2 complex matrix, used for single-qubit unitaries.
pub type Unitary2 = nalgebra::Matrix2<C64>;

/// Coefficients at or below this magnitude are dropped from polynomials and states.
pub const ZERO_TOL: f64 = 1e-14;
/// Tolerance on `sum |c|^2 = 1` for the normalized flag.
pub const NORM_TOL: f64 = 1e-10;
/// Tolerance on `u^† u = 1` for gate payloads.
pub const UNITARY_TOL: f64 = 1e-10;

pub use diffop::{DiffOperator, DiffTerm, Substitution};
pub use error::{Error, Result};
pub use gates::{
    apply_gate, apply_gate_poly, controlled_u, gate_operator, run_circuit_holo, Circuit, GateKind,
    GateOperator, GateSpec, OperatorForm, Pauli,
};
pub use holostate::{
    check_homogeneity, encode_basis, encode_state, from_poly, sb_inner_product, to_poly,
    BasisConvention, BitString, HoloState,
};
pub use oracle::{apply_gate_matrix, compare_states, run_circuit_matrix, StateVector};
pub use poly::{Exponents, SparsePoly};
