use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("triangulation failed: {0}")]
    Triangulation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("derivative order {order} is beyond the factor derivative table (max {max})")]
    DerivativeOrder { order: usize, max: usize },

    #[error("resolution guard `{guard}` violated: {detail}")]
    Guard { guard: &'static str, detail: String },

    #[error("operator is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("smooth test function `{0}` accepts real arguments only")]
    ComplexArgument(String),

    #[error("test function `{0}` has no derivative callable")]
    MissingDerivative(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn guard(guard: &'static str, detail: impl Into<String>) -> Self {
        Error::Guard {
            guard,
            detail: detail.into(),
        }
    }

    /// True for resolution/budget guard violations.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
