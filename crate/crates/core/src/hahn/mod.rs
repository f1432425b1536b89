//! Generalized power series `sum a_s t^s` with rational exponents,
//! well-ordered (finitely presented) support, precision tracking and
//! lazy term streams.

mod admissible;
mod series;
mod stream;

pub use admissible::AdmissiblePair;
pub use series::{Bound, HahnSeries};
pub use stream::{Pull, StreamRule, TermStream};

use crate::rat::{rat_int, Rat};

/// Default global precision cap on exponents pulled from streams.
pub fn default_cap() -> Rat {
    rat_int(64)
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum HahnError {
    #[error("reciprocal of an exact zero series")]
    ZeroDivision,
    #[error("series only known below {known_below}, needed {needed}")]
    InsufficientPrecision { needed: Rat, known_below: Bound },
    #[error("precision cap {cap} exceeded")]
    PrecisionCapExceeded { cap: Rat },
    #[error("invalid admissible pair: {0}")]
    InvalidPair(String),
}

/// Outcome of asking for the valuation of a series.
#[derive(Debug, Clone, PartialEq)]
pub enum ValuationError {
    /// The series is exactly zero (finite, fully known).
    ExactZero,
    /// No nonzero term is known below this bound.
    Undetermined(Bound),
}
