use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("negative input: {0}")]
    NegativeInput(BigInt),

    #[error("denominator must be non-zero")]
    ZeroDenominator,

    #[error("radicand must be non-negative, got {0}")]
    NegativeRadicand(BigInt),

    #[error("radicand ratio {0} is the square of a rational; use the rational path")]
    SquareRatio(String),

    #[error("radicand ratio must be positive, got {0}")]
    NonPositiveRatio(String),

    #[error("lines live over different radicand ratios ({0} vs {1})")]
    MismatchedRatio(String, String),

    #[error("the zero line has no inverse")]
    ZeroLine,

    #[error("{0} is a perfect square")]
    PerfectSquare(BigInt),

    #[error("step limit of {limit} exhausted before the period closed")]
    StepLimit { limit: u64 },

    #[error("expansion does not belong to radicand {0}")]
    MismatchedExpansion(BigInt),

    #[error("expansion has an empty period")]
    EmptyPeriod,

    #[error("expansion carries no recorded states")]
    MissingStates,

    #[error("invariant violated: {0}")]
    Falsified(String),
}

pub type Result<T> = std::result::Result<T, Error>;
