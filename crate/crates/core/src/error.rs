use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{name}` at line {line}, column {column}")]
    UnknownVariable {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("division is not supported (line {line}, column {column}); only integer fractions such as 3/4 are allowed as coefficients")]
    Division { line: usize, column: usize },
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("degree cap {cap} exceeded")]
    DegreeCap { cap: u32 },
    #[error("generator cap {cap} exceeded ({needed} generators needed)")]
    GeneratorCap { cap: usize, needed: usize },
    #[error("resource budget exhausted: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("polynomial does not divide exactly")]
    InexactDivision,
}

impl AlgebraError {
    /// Errors meaning "not decided within the configured limits" rather
    /// than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            AlgebraError::Budget(_)
                | AlgebraError::DegreeCap { .. }
                | AlgebraError::GeneratorCap { .. }
                | AlgebraError::ExponentOverflow
        )
    }
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
