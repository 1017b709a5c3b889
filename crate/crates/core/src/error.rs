use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric integrity violated: {0}")]
    NumericIntegrity(String),

    /// Optical tables could not be matched by any member of the mixing family.
    #[error("model mismatch: best residual {residual:e} at p = {p} exceeds {limit:e}")]
    ModelMismatch { p: f64, residual: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
