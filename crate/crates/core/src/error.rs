use thiserror::Error;

/// Errors produced by the holomorphic engine, the oracle and the geometric tools.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid bit string {0:?}: expected only '0' and '1'")]
    InvalidBitString(String),

    #[error("bit string {bits:?} has length {len}, expected {expected}")]
    BitStringLength {
        bits: String,
        len: usize,
        expected: usize,
    },

    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("qubit index {index} out of range 1..={nqubits}")]
    QubitOutOfRange { index: usize, nqubits: usize },

    #[error("qubit indices must be distinct, got {0} twice")]
    RepeatedQubit(usize),

    #[error("gate {kind} expects {expected} qubit(s), got {actual}")]
    GateArity {
        kind: String,
        expected: usize,
        actual: usize,
    },

    #[error("unknown gate kind {0:?}")]
    UnknownGate(String),

    #[error("gate CU requires a 2x2 unitary payload")]
    MissingUnitary,

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("homogeneity violated by term with exponents {0:?}")]
    NotPhysical(Vec<u16>),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("zero vector has no projective class")]
    ZeroState,

    #[error("hadamard torus map is singular at relative phase {0}")]
    Singular(f64),

    #[error("point is within {distance:.3e} of a singularity (guard {guard:.0e})")]
    NearSingular { distance: f64, guard: f64 },

    #[error("loop needs at least {min} points, got {actual}")]
    LoopTooShort { min: usize, actual: usize },

    #[error("consecutive overlap {overlap:.3e} at step {index} vanishes; loop too coarse")]
    VanishingOverlap { index: usize, overlap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
