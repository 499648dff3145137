use thiserror::Error;

use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("beta must satisfy 0 < beta < 1, got {0}")]
    BetaOutOfRange(Rational),

    #[error("digit set must be nonempty")]
    EmptyDigitSet,

    #[error("period must be nonempty")]
    EmptyPeriod,

    #[error("line {line}: unexpected `{token}`: {message}")]
    Parse {
        line: usize,
        token: String,
        message: String,
    },

    #[error("resource guard: {count} cylinders exceed the limit of {limit}")]
    ResourceLimit { count: usize, limit: usize },

    #[error("system is not normalized: digit set {position} has minimum {min}, expected 0")]
    NotNormalized { position: usize, min: i64 },

    #[error("decomposition does not reconstruct the digit sequence")]
    InvalidDecomposition,

    #[error("beta mismatch: {0} vs {1}")]
    BetaMismatch(Box<Rational>, Box<Rational>),

    #[error("{0}")]
    Gate(String),

    #[error(
        "contraction ratio {0} is not in (0, 1); for a negative ratio compose the system \
         with itself (all pairs f_i o f_j) to obtain an equivalent positive-ratio system"
    )]
    RatioOutOfRange(Rational),

    #[error("offset list must be nonempty")]
    NoOffsets,

    #[error("{0} must be at least {1}")]
    TooSmall(&'static str, usize),

    #[error("digit {digit} at position {position} lies outside {{0,...,{bound}}}")]
    DigitOutOfRange {
        position: usize,
        digit: i64,
        bound: i64,
    },

    #[error("code is not valid for the digit system (first violation at position {0})")]
    InvalidCode(usize),

    #[error("certificate failed verification at depth {0}")]
    CertificateRejected(usize),
}
