use thiserror::Error;

/// Errors produced by the statistical kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid interval: lower ({lower}) must be strictly below upper ({upper})")]
    InvalidInterval { lower: f64, upper: f64 },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("sample too small: {0}")]
    SampleTooSmall(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("configuration error: {0}")]
    Configuration(String),
}

pub type Result<T> = std::result::Result<T, Error>;
