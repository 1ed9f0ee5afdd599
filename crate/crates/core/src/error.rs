use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("eigenvalues lie outside the extension field (characteristic polynomial t^2 + {b} t + {c})")]
    NotInL { b: String, c: String },

    #[error("undecided norm-set query: {0}")]
    Undecided(String),

    #[error("unhandled configuration: {0}")]
    Unhandled(String),

    #[error("enumeration of {needed} vectors exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("no witness found within search bound {bound}")]
    NotFoundWithinBound { bound: u64 },

    #[error("missing witness: {0}")]
    MissingWitness(String),

    #[error("operation requires {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
