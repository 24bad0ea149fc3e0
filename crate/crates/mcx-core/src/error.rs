use thiserror::Error;

/// Errors shared by every layer of the kernel.
///
/// Component indices reported in `NullCone` and `Singular` are zero-based
/// positions in the canonical idempotent basis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum McError {
    #[error("level {level} outside supported range 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },

    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },

    #[error("operation requires level >= 2, got {0}")]
    LevelTooLow(usize),

    #[error("coefficient array has length {got}, expected {expected}")]
    CoeffLength { got: usize, expected: usize },

    #[error("unit index {unit} out of range for level {level}")]
    UnitOutOfRange { unit: usize, level: usize },

    #[error("component index {index} out of range for level {level} (valid: 0..{max})")]
    IndexOutOfRange {
        index: usize,
        level: usize,
        max: usize,
    },

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("null cone: vanishing component(s) {indices:?}")]
    NullCone { indices: Vec<usize> },

    #[error("singular matrix: determinant component(s) {indices:?} vanish")]
    Singular { indices: Vec<usize> },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("component {index} has imaginary part {imag:e}, not multiperplex")]
    NotMultiperplex { index: usize, imag: f64 },

    #[error("ideal flavor mismatch: {left} vs {right}")]
    FlavorMismatch {
        left: &'static str,
        right: &'static str,
    },

    #[error("matrix is not self-adjoint (slice {slice})")]
    NotSelfAdjoint { slice: usize },

    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, McError>;
