use std::fmt;

use thiserror::Error;

/// Syntax error produced by the expression parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source where parsing stopped.
    pub offset: usize,
    /// Human readable description of what the parser expected there.
    pub expected: String,
    /// What was actually found (`end of input` when exhausted).
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: expected {}, found {}",
            self.offset, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("unbound variable `{0}`")]
    UnboundVariable(char),

    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("cannot differentiate `{0}` symbolically")]
    NonDifferentiable(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("loss of significance: {0}")]
    Inaccurate(String),

    #[error("no mean value witness found: {0}")]
    NoWitness(String),

    #[error("non-finite value at step {step}")]
    NonFinite { step: usize },

    #[error("mesh mismatch: {0}")]
    MeshMismatch(String),
}

/// Coarse classification used for process exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input: argument or expression syntax.
    Input,
    /// The numerics failed (no witness, non-convergence, non-finite values).
    Numeric,
    /// A mathematical precondition of the requested operation does not hold.
    Precondition,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_) | Error::UnboundVariable(_) | Error::InvalidArgument(_) => {
                ErrorClass::Input
            }
            Error::Precondition(_) | Error::MeshMismatch(_) | Error::NonDifferentiable(_) => {
                ErrorClass::Precondition
            }
            Error::Domain { .. }
            | Error::NonConvergence { .. }
            | Error::Inaccurate(_)
            | Error::NoWitness(_)
            | Error::NonFinite { .. } => ErrorClass::Numeric,
        }
    }

    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
