use thiserror::Error;

/// Errors produced by state construction, evaluation and integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("truncation N = {requested} exceeds the supported maximum {max}")]
    TooLarge { requested: usize, max: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid quadrature spec: {0}")]
    InvalidQuadrature(String),

    #[error(
        "quadrature did not converge: last estimates {previous:.12e} and {last:.12e} \
         (error estimate {error:.3e})"
    )]
    NotConverged {
        previous: f64,
        last: f64,
        error: f64,
    },

    #[error("normalization gate failed: integral of W = {integral:.12e}")]
    Normalization { integral: f64 },

    #[error("at {parameter} = {value}: {source}")]
    Sweep {
        parameter: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True when the error comes from numerical non-convergence rather than
    /// bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NotConverged { .. } | Error::Normalization { .. } => true,
            Error::Sweep { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
