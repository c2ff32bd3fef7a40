use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of size {size} has fewer than {needed} distinct elements")]
    FieldTooSmall { needed: usize, size: u64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not invertible: {0}")]
    NotInvertible(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("rank condition violated: {0}")]
    RankConditionViolated(String),
    #[error("sequence length {len} is not a positive multiple of {s}")]
    LengthNotMultiple { len: usize, s: usize },
    #[error("invalid band datum: {0}")]
    InvalidBandDatum(String),
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("gcd({r}, {d}) != 1")]
    NotCoprime { r: i64, d: i64 },
    #[error("range violation: {0}")]
    RangeViolation(String),
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("lambda values must be pairwise distinct")]
    DuplicateLambda,
    #[error("generator counts differ ({0} vs {1})")]
    GeneratorCountMismatch(usize, usize),
    #[error("self-intersection vector {0:?} is not invariant under the reflection")]
    NotSigmaInvariant(Vec<i64>),
    #[error("missing parameter `{0}`")]
    MissingParameter(String),
}

impl Error {
    /// True for failures of a mathematical precondition (singular matrices,
    /// non-coprime pairs, ...) as opposed to malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotInvertible(_)
                | Error::RankConditionViolated(_)
                | Error::NotCoprime { .. }
                | Error::RangeViolation(_)
                | Error::ZeroLambda
                | Error::DuplicateLambda
                | Error::FieldTooSmall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
