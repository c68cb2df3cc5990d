use thiserror::Error;

/// Errors raised by the arithmetic layer and the verifier.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("minimal polynomial must be monic")]
    NotMonic,
    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("minimal polynomial must have degree at least 1")]
    DegreeZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("all generators are zero")]
    ZeroIdeal,
    #[error("ideal does not divide the dividend")]
    NotDivisible,
    #[error("ideal is not a divisor of the working modulus")]
    NotADivisor,
    #[error("residue ring of size {size} exceeds the enumeration bound {bound}")]
    EnumerationBoundExceeded { size: String, bound: u64 },
    #[error("exact evaluation produced a non-integer: {0}")]
    NonIntegerResult(String),
    #[error("closed form scalar is not an integer: {0}")]
    NonIntegerScalar(String),
    #[error("element is not a unit modulo the conductor")]
    NotUnitModConductor,
    #[error("character is not primitive modulo its modulus")]
    NotPrimitive,
    #[error("ideals are not coprime")]
    NotCoprime,
    #[error("{evaluator} needs {needed} iterations, budget is {budget}")]
    BudgetExceeded { evaluator: &'static str, needed: String, budget: u64 },
    #[error("evaluators disagree: {0}")]
    InternalInconsistency(String),
    #[error("arithmetical function is not the norm")]
    WrongF,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
