use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported wavelet number {0}: Daubechies filters are available for 1..=10")]
    UnsupportedWavelet(u32),

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("series length {0} is not a power of two")]
    NonDyadic(usize),

    #[error("series too short: need at least {needed} observations, got {got}")]
    InsufficientLength { needed: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error(
        "transform needs {required} buffered coefficients, exceeding the budget of {budget}"
    )]
    BudgetExceeded { required: usize, budget: usize },

    #[error("wrong transform mode: expected {expected}")]
    WrongMode { expected: &'static str },

    #[error("no candidate wavelet numbers supplied")]
    EmptyCandidates,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

pub(crate) fn ensure_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: values[index],
        }),
        None => Ok(()),
    }
}
