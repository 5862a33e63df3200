use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd fundamental discriminant")]
    InvalidDiscriminant(i64),

    #[error("({d1}, {d2}) is not a factorization into coprime odd fundamental discriminants")]
    InvalidFactorization { d1: i64, d2: i64 },

    #[error("invalid generator (D={d}, k={k}, e={e}): {reason}")]
    InvalidSpec {
        d: i64,
        k: i64,
        e: i64,
        reason: &'static str,
    },

    #[error("weight mismatch: {left}/2 vs {right}/2")]
    WeightMismatch { left: i64, right: i64 },

    #[error("insufficient precision: need more than {required} known coefficients, have {available}")]
    InsufficientPrecision { required: usize, available: usize },

    #[error("plus-space condition fails at indices {0:?}")]
    PlusSpaceViolation(Vec<usize>),

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

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
