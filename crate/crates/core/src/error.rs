use std::fmt;

use thiserror::Error;

/// Failure reported by a splitting oracle: the cochain it could not split,
/// rendered for display, together with the ℏ-order being processed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleFailure {
    pub oracle: String,
    pub reason: String,
    pub hbar_order: Option<usize>,
    pub cochain_level: usize,
    pub witness: Vec<(Vec<usize>, String)>,
}

impl fmt::Display for OracleFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} oracle failed: {}", self.oracle, self.reason)?;
        if let Some(n) = self.hbar_order {
            write!(f, " (at h^{n})")?;
        }
        write!(f, " on a level-{} cocycle", self.cochain_level)?;
        for (tuple, value) in &self.witness {
            write!(f, "; {tuple:?} -> {value}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("expected an element of degree {expected}, found degree {found}")]
    Degree { expected: i32, found: i32 },

    #[error("element is not zero modulo h: {0}")]
    NotInIdeal(String),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("cells are not composable: {0}")]
    NotComposable(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("restriction maps are not functorial: {0}")]
    NonFunctorial(String),

    #[error("cochain level {0} exceeds the stored levels")]
    LevelOverflow(usize),

    #[error("{0}")]
    Oracle(OracleFailure),

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
