use thiserror::Error;

/// Errors produced by the plan, design and linear algebra routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("claimed multiplicities sum to {got}, matrix dimension is {expected}")]
    MultiplicityMismatch { expected: usize, got: usize },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("element {index} is not in a field of order {order}")]
    InvalidElement { index: u32, order: u32 },
    #[error("unknown factor `{0}`")]
    UnknownFactor(String),
    #[error("factor `{0}` is both a target and eliminated")]
    OverlappingSets(String),
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error("invalid block design: {0}")]
    InvalidDesign(String),
    #[error("invalid orthogonal array: {0}")]
    InvalidArray(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
