use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix has a negative eigenvalue ({0:e})")]
    NegativeEigenvalue(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("invalid classical-quantum specification: {0}")]
    InvalidSpec(String),

    #[error("bad gate target: {0}")]
    BadTarget(String),

    #[error("subsystem has dimension {0}, a qubit is required")]
    NotAQubit(usize),

    #[error("spectrum has {found} eigenvalues, subsystem dimension is {expected}")]
    SpectrumMismatch { expected: usize, found: usize },

    #[error("spectrum is degenerate or unsorted (min gap {0:e})")]
    DegenerateSpectrum(f64),

    #[error("probe insensitive to this phase direction (quantum Fisher information {0:e})")]
    FlatLikelihood(f64),

    #[error("quantum Fisher information is zero; the Cramer-Rao bound is infinite")]
    ZeroFisher,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed state file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
