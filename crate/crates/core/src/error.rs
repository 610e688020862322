use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("box of length {len} too small: first particle sits at {needed}")]
    BoxTooSmall { len: usize, needed: usize },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("time step {dt:e} exceeds stability limit {limit:e}")]
    Cfl { dt: f64, limit: f64 },
    #[error("scheme failure: {0}")]
    SchemeFailure(String),
    #[error("transform error: {0}")]
    Transform(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
