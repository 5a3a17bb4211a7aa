//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("incompatible scenario: {0}")]
    IncompatibleScenario(String),

    #[error("invalid probability {value} ({context})")]
    InvalidProbability { value: f64, context: String },

    #[error("normalization violated at setting {context}: sum = {sum}")]
    Normalization { context: String, sum: f64 },

    #[error("no-signalling violated: {0}")]
    NoSignalling(String),

    #[error("missing moment: {0}")]
    MissingMoment(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("level too low: missing monomial {monomial}")]
    LevelTooLow { monomial: String },

    #[error("unsupported query: {0}")]
    UnsupportedQuery(String),

    #[error("excluded point: {0}")]
    ExcludedPoint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("no model: constraints are infeasible for the requested class")]
    NoModel,
}

pub type Result<T> = std::result::Result<T, Error>;
