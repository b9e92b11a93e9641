use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("integration diverged at step {step}")]
    Diverged { step: usize },

    #[error("degenerate regressor: sum of weighted squared regressor {denominator:e} is below tolerance")]
    DegenerateRegressor { denominator: f64 },

    #[error("malformed regression problem: {0}")]
    MalformedProblem(String),

    #[error("reference stiffness is zero; percentage error undefined")]
    UndefinedReference,

    #[error("rank-sum test requires two non-empty samples")]
    EmptySample,

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}
