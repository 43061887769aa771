use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not positive definite (last jitter tried: {jitter:e})")]
    NotPositiveDefinite { jitter: f64 },

    #[error("sobol dimension {requested} exceeds the direction-number table ({supported})")]
    DimensionUnsupported { requested: usize, supported: usize },

    #[error("objective returned a non-finite value at a queried point")]
    NonFiniteObjective,

    #[error("invalid trust region side length {0}")]
    InvalidTrustRegion(f64),

    #[error("hyperparameter fit failed: every restart hit a non positive definite Gram matrix")]
    FitFailed,

    #[error("point coordinate {index} = {value} lies outside [0, 1]")]
    OutOfDomain { index: usize, value: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("traces do not line up: {0}")]
    MismatchedTraces(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }
}
