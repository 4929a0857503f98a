use thiserror::Error;

/// Errors raised by estimators, diagnostics, simulators and the CLI layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of a function (lag past the end of
    /// the sample, non-finite window argument, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A tuning parameter violates a precondition (bandwidth, lugsail ratio, c).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A process model is invalid (non-stationary, non-PD innovation covariance).
    #[error("model error: {0}")]
    Model(String),

    /// A matrix that must be positive-definite failed its Cholesky factorization.
    #[error("matrix is not positive-definite: {0}")]
    NotPositiveDefinite(String),

    /// Malformed input data. `row` and `col` are 1-based; `col` is 0 when the
    /// whole row is at fault.
    #[error("input error at row {row}, column {col}: {msg}")]
    Input { row: usize, col: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn model(msg: impl Into<String>) -> Self {
        Error::Model(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Input { .. } | Error::Io(_) => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
