//! Descriptors and decision oracles for the classified maximal
//! subalgebras of `k[t, 1/t, y]`.
//!
//! A subalgebra is pinned down by a series `alpha` with nonnegative
//! valuation (finitely presented, algebraic-branch, or stream-backed)
//! together with a normalizing automorphism, or — for the algebras
//! containing both `t` and `1/t` — by a unit series in `u = 1/y`.
//! Membership reduces to the sign of an exact valuation; conductors
//! to minimal polynomials; equivalence of descriptors to a character
//! of `Q/Z` acting on exponents.

mod descriptor;
mod generators;
mod oracle;
mod orbit;
mod p2;

pub use descriptor::{
    AlphaDescriptor, AlphaDoc, Character, DescriptorDoc, MembershipVerdict, StreamParams,
    SubalgebraDescriptor,
};
pub use generators::{conductor, generators, minimal_polynomial, DegreeOneElement};
pub use oracle::{
    crucial_membership, membership, n_condition_check, normalize, omega, theta_phi_membership,
    translate_lambda, NormalizedCase, Omega,
};
pub use orbit::{orbit_equivalent, OrbitOutcome};
pub use p2::{p2_sample_check, P2Report};

use crate::hahn::HahnError;
use crate::laurent::LaurentError;
use crate::parse::ParseError;
use crate::puiseux::PuiseuxError;
use crate::rat::Rat;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum MaxsubError {
    #[error("undetermined at precision cap {cap}")]
    Undetermined { cap: Rat },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("inconsistent normalization flags: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
    #[error(transparent)]
    Hahn(#[from] HahnError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
