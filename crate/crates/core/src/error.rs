use thiserror::Error;

pub type Result<T> = std::result::Result<T, FgnError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FgnError {
    #[error("Hurst parameter {0} outside the admissible range")]
    InvalidHurst(f64),
    #[error("invalid spectrum mode: {0}")]
    InvalidMode(String),
    #[error("frequency {0} outside (0, pi]")]
    FrequencyOutOfDomain(f64),
    #[error("n = {0}: length must be even and at least {1}")]
    InvalidLength(usize, usize),
    #[error("trace is constant (zero sample variance)")]
    DegenerateTrace,
    #[error("trace contains a non-finite value at index {0}")]
    NonFinite(usize),
    #[error("aggregation level {m} exceeds the limit {limit} for a trace of length {n}")]
    AggregationTooLarge { m: usize, n: usize, limit: usize },
    #[error("2^x out of range: value {value} at index {index} (|x| must not exceed 1000)")]
    Exp2OutOfRange { index: usize, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("covariance factorization failed at row {0}")]
    Factorization(usize),
}
