//! Exact rational and dyadic arithmetic, and certified distance intervals.

mod dyadic;
mod interval;
mod rational;

pub use dyadic::{to_dyadic_within, Dyadic};
pub use interval::DistInterval;
pub use rational::{parse_number, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberError {
    #[error("malformed number literal {0:?}")]
    Malformed(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("interval endpoints out of order: [{lo}, {hi}]")]
    InvertedInterval { lo: Rational, hi: Rational },
}
