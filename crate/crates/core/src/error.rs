use thiserror::Error;

/// Error type shared by all geometric operations in this crate.
#[derive(Error, Debug)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("combination does not reproduce the claimed point")]
    BadCombination,

    #[error("degenerate simplex: affinely dependent vertex list")]
    DegenerateSimplex,

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("iteration budget exceeded after {iterations} iterations: {detail}")]
    IterationBudget { iterations: usize, detail: String },

    #[error("capability error: {0}")]
    Capability(String),

    #[error("degeneracy: no improving facet found in parity descent")]
    ParityDegeneracy,

    #[error("kappa violation: supplied kappa {kappa} is below the family Caratheodory number")]
    KappaViolation { kappa: usize },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
