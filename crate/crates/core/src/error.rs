use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("dimension {dim} outside the supported range 1..={max}")]
    DimensionOutOfRange { dim: usize, max: usize },
    #[error("matrix is not Hermitian (relative asymmetry {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("Schatten index must be >= 1, got {0}")]
    InvalidSchattenIndex(f64),
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("function has a pole on the spectrum at x = {x}")]
    PoleOnSpectrum { x: f64 },
    #[error("function is only C^{available}, order {required} requested")]
    InsufficientSmoothness { required: usize, available: usize },
    #[error("{count} eigenvalue tuples exceed the budget of {limit}")]
    TooManyTuples { count: u128, limit: u128 },
    #[error("function rejected: {0}")]
    NotAdmissible(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
