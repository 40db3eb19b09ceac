use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("characteristic {0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("generator {index} is a unit in the local ring (nonzero constant term)")]
    UnitGenerator { index: usize },
    #[error("generator {index} is not homogeneous but the model is graded")]
    NotHomogeneous { index: usize },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degree cap {cap} exceeded (reached degree {reached})")]
    DegreeCap { cap: u32, reached: u32 },
    #[error("time budget exhausted")]
    TimeBudget,
    #[error("invalid system of parameters: {0}")]
    InvalidSop(String),
    #[error("could not sample a system of parameters after {attempts} attempts")]
    SamplingFailed { attempts: usize },
    #[error("genericity disagreement between seeds: {0}")]
    Genericity(String),
    #[error("presentation is not minimal: {0}")]
    NonMinimalPresentation(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("assertion violated: {0}")]
    Assertion(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
