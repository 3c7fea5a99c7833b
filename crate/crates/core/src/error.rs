use thiserror::Error;

/// The three input requirements on an E-function description.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// (i) an explicit annihilating operator over a number field.
    Operator,
    /// (ii) enough Taylor coefficients to start the recurrence.
    Coefficients,
    /// (iii) the oracle guarantee that the series is an E-function.
    Oracle,
}

impl std::fmt::Display for Clause {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Clause::Operator => "(i)",
            Clause::Coefficients => "(ii)",
            Clause::Oracle => "(iii)",
        })
    }
}

#[derive(Debug, Error)]
pub enum EfaError {
    #[error("input clause {clause}: {message}")]
    Validation { clause: Clause, message: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("iteration cap exceeded: {0}")]
    CapExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl EfaError {
    pub fn validation(clause: Clause, message: impl Into<String>) -> Self {
        EfaError::Validation { clause, message: message.into() }
    }
    pub fn inconsistency(message: impl Into<String>) -> Self {
        EfaError::Inconsistency(message.into())
    }
}

pub type Result<T> = std::result::Result<T, EfaError>;
