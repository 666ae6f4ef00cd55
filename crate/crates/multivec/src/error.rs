//! Crate error type.

use std::path::PathBuf;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("missing required column '{column}' in {path}")]
    MissingColumn { path: PathBuf, column: String },

    #[error("unknown column '{column}' in {path}")]
    UnknownColumn { path: PathBuf, column: String },

    #[error("incompatible units: cannot convert {from} to {to}")]
    IncompatibleUnits { from: String, to: String },

    #[error("unknown unit '{0}'")]
    UnknownUnit(String),

    #[error("annualize: lifetime must be at least one year (got {0})")]
    BadLifetime(f64),

    #[error("annualize: discount rate must lie in [0, 1) (got {0})")]
    BadDiscountRate(f64),

    #[error("invalid system: {0} violation(s), first: {1}")]
    InvalidSystem(usize, String),

    #[error("demand model: {0}")]
    Demand(String),

    #[error("time reduction: {0}")]
    Reduction(String),

    #[error("lp: {0}")]
    Lp(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("solution is not optimal (status {0:?})")]
    NotOptimal(crate::lp::Status),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
