use thiserror::Error;

use crate::expr::ParseError;

/// Errors raised by arithmetic on rationals, ω-field values and measurable numbers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("input is infinitely large")]
    InfinitelyLargeInput,
    #[error("result would be infinitely large")]
    InfinitelyLargeResult,
    #[error("no apartness witness from zero found up to depth {0}")]
    NotApartFromZero(u32),
    #[error("input is certified negative")]
    NegativeInput,
    #[error("no certified witness found within depth {0}")]
    NoWitnessWithinDepth(u32),
    #[error("square root is not rational")]
    SqrtNotRational,
    #[error("operation requires an exact value")]
    ExactValueRequired,
    #[error("index variable used outside a series or product")]
    UnboundIndex,
    #[error("exponent is not an integer")]
    NonIntegerExponent,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
