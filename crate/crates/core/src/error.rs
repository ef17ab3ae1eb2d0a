//! Crate-wide error type.

use std::fmt;

/// Errors produced by the estimation, simulation and covariance kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid static configuration (unsupported wavelet order, bad plan, ...).
    Config(String),
    /// Malformed or insufficient input data.
    Input(String),
    /// Parameter outside the mathematical domain of an operation.
    Domain(String),
    /// A numerical method failed to converge or produced an invalid value.
    Numeric(String),
    /// A requested scale is missing from the pyramid or has too few coefficients.
    ScaleRange { scale: usize, detail: String },
    /// The estimator could not be evaluated (degenerate spectrum, ...).
    Estimation { scale: Option<usize>, detail: String },
    /// A Monte-Carlo experiment exceeded its replication-failure budget.
    Experiment(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numeric(msg) => write!(f, "numeric error: {msg}"),
            Error::ScaleRange { scale, detail } => {
                write!(f, "scale range error at scale {scale}: {detail}")
            }
            Error::Estimation { scale, detail } => match scale {
                Some(j) => write!(f, "estimation error at scale {j}: {detail}"),
                None => write!(f, "estimation error: {detail}"),
            },
            Error::Experiment(msg) => write!(f, "experiment error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
