use thiserror::Error;

/// Errors raised by the solvers and their building blocks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum JayaError {
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("member {0} has not been evaluated")]
    EvaluationOrder(usize),

    #[error("constraint {index} returned non-finite value {value} at x = {x:?}")]
    NonFiniteConstraint { index: usize, value: f64, x: Vec<f64> },

    #[error("objective {index} returned non-finite value {value} at x = {x:?}")]
    NonFiniteObjective { index: usize, value: f64, x: Vec<f64> },

    #[error("multi-objective solver needs at least 2 objectives, got {0}; use the single-objective solver instead")]
    UseJayaInstead(usize),

    #[error("problem `{name}`: {source}")]
    Problem {
        name: String,
        #[source]
        source: Box<JayaError>,
    },
}

pub type Result<T> = std::result::Result<T, JayaError>;
