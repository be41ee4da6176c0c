use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid case: {0}")]
    InvalidCase(String),

    #[error("assembly failed: {0}")]
    Assembly(String),

    /// The linear system could not be solved to the required residual.
    #[error("linear solve failed (condition estimate {condition:.3e}): {reason}")]
    Solver { condition: f64, reason: String },

    #[error("singular matrix: smallest singular value is zero")]
    SingularMatrix,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("least-squares fit failed: {0}")]
    Fit(String),

    #[error("resource model: {0}")]
    Model(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
