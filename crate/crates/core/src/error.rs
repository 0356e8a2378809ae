use thiserror::Error;

/// Errors raised by the library. The `kind` strings are stable identifiers
/// used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: N must be at least 2")]
    InvalidModulus(u32),
    #[error("theory mismatch: {0}")]
    TheoryMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("ambiguous register: {0}")]
    AmbiguousRegister(String),
    #[error("not condensable: {0}")]
    NotCondensable(String),
    #[error("not factorizable: {0}")]
    NotFactorizable(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("bound exceeded: {0}")]
    ExceedsBound(String),
    #[error("circuit validation failed at instruction {index}: {reason}")]
    CircuitValidation { index: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidModulus(_) => "invalid-modulus",
            Error::TheoryMismatch(_) => "theory-mismatch",
            Error::InvalidInput(_) => "invalid-input",
            Error::AmbiguousRegister(_) => "ambiguous-register",
            Error::NotCondensable(_) => "not-condensable",
            Error::NotFactorizable(_) => "not-factorizable",
            Error::InvalidCurve(_) => "invalid-curve",
            Error::ExceedsBound(_) => "exceeds-bound",
            Error::CircuitValidation { .. } => "circuit-validation",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
