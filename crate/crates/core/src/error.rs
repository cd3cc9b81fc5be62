use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e}, allowed {allowed:.3e})")]
    NotHermitian { asymmetry: f64, allowed: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polynomial has degree {0}; at least 1 is required")]
    DegreeTooLow(usize),

    #[error("party count {0} is out of range (need {1})")]
    PartyCount(usize, &'static str),

    #[error("overlap cosine {0} is outside [0, 1]")]
    OverlapOutOfRange(f64),

    #[error("{0} is not an eigenvalue of the operator (nearest differs by {1:.3e})")]
    NotAnEigenvalue(f64, f64),

    #[error("sequence {0:?} is not covered by any right-hand-side term")]
    UncoveredSequence(Vec<i8>),

    #[error("eigen iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
