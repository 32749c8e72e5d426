use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation (e.g. `p < 1`).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A value failed validation when building a domain type.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The input reaches below the explicit kernel window while the kernel
    /// carries a non-zero tail. `partial` is the sum over the window only and
    /// `residual_bound` bounds the norm of the missing contribution.
    #[error("input reaches below the kernel window (residual bound {residual_bound:e})")]
    WindowUnderflow {
        partial: Vec<f64>,
        residual_bound: f64,
    },

    #[error("kernel does not decay to zero; no weighting sequence exists")]
    NoWeighting,

    #[error("operation unsupported: {0}")]
    Unsupported(String),

    /// A black-box functional failed the randomized linearity check.
    #[error("functional is not linear (relative residual {residual:e})")]
    NotLinear { residual: f64 },

    #[error("state matrix is not stable (spectral radius in [{lower}, {upper}])")]
    Unstable { lower: f64, upper: f64 },

    #[error("stability undecided at margin {margin:e} (spectral radius in [{lower}, {upper}])")]
    StabilityUndecided { lower: f64, upper: f64, margin: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Truncation/finite-memory equivalence needs orthogonal time slices,
    /// which is only certified for the exponentially discounted kernel.
    #[error("orthogonality of time slices is not certified for this kernel")]
    OrthogonalityNotCertified,

    #[error("linear system is numerically singular")]
    Singular,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
