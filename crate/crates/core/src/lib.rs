//! Exact computer algebra for maximal subalgebras of `k[t, 1/t, y]`.
//!
//! The crate is organised around a small tower of exact arithmetic:
//!
//! - [`rat`] — arbitrary-precision rationals (exponents, valuations);
//! - [`field`] — cyclotomic coefficient fields `Q(zeta_N)` with exact
//!   root finding;
//! - [`hahn`] — generalized power series with rational exponents,
//!   precision tracking and lazy term streams;
//! - [`laurent`] — elements of `k[t, 1/t, y]`, their evaluation into
//!   series and the automorphisms used by the classification;
//! - [`puiseux`] — Newton polygons and Newton–Puiseux expansion;
//! - [`maxsub`] — descriptors for the classified maximal subalgebras
//!   with membership, conductor, generator and orbit-equivalence
//!   oracles;
//! - [`nonextending`] — point glueing and tangent-direction deletion;
//! - [`curve`] — plane curves, points at infinity and the
//!   "defined at p" oracle;
//! - [`parse`] — the textual expression formats shared by the CLI.

pub mod curve;
pub mod field;
pub mod hahn;
pub mod laurent;
pub mod maxsub;
pub mod nonextending;
pub mod parse;
pub mod puiseux;
pub mod rat;

pub use field::{CycloField, FieldElem};
pub use laurent::LaurentPoly;
pub use hahn::HahnSeries;

pub use rat::Rat;
