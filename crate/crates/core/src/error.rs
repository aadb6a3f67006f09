use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("gamma function pole at {argument}")]
    Pole { argument: String },

    #[error("polynomial not divisible, remainder {remainder}")]
    NotDivisible { remainder: String },

    #[error("inconsistent {what}: {detail}")]
    Inconsistency { what: &'static str, detail: String },

    #[error("{what} mismatch: computed {computed}, expected {expected}")]
    Mismatch {
        what: String,
        computed: String,
        expected: String,
    },

    #[error("root finding did not converge for root {index} after {iterations} iterations")]
    RootFinding { index: usize, iterations: usize },

    #[error("Perron eigenvalue is not simple: null space has dimension {nullity}")]
    NonSimplePerron { nullity: usize },

    #[error("eigenvalue computation failed: {0}")]
    Eigen(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
