use thiserror::Error;

/// Errors raised by the simulator and bound calculators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    Dimension {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("matrix is not symmetric within {tol:e} ({context})")]
    NotSymmetric { context: &'static str, tol: f64 },

    #[error("matrix is not positive (semi)definite ({context})")]
    NotPositiveDefinite { context: &'static str },

    #[error("singular or ill-conditioned matrix in {context} (condition estimate {condition:e})")]
    Singular { context: &'static str, condition: f64 },

    #[error("Riccati iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid quantizer: {0}")]
    Quantizer(String),

    #[error("invalid code parameters: {0}")]
    Code(String),

    #[error("bit-vector length {got} does not match expected {expected}")]
    BitLength { expected: usize, got: usize },

    #[error("exhaustive enumeration budget exceeded: {what} needs 2^{bits} candidates (limit 2^{limit}); use a desk-scale configuration")]
    Budget {
        what: &'static str,
        bits: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("config field `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(context: &'static str, expected: impl ToString, got: impl ToString) -> Self {
        Error::Dimension {
            context,
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    pub(crate) fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            msg: msg.into(),
        }
    }
}
