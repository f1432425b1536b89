//! Lazy term streams: named rules that yield strictly increasing
//! `(exponent, coefficient)` pairs together with a certified knowledge
//! bound after every pull.

use super::series::Bound;
use crate::field::FieldElem;
use crate::rat::{rat, rat_int, Rat};
use num_bigint::BigInt;
use num_traits::One;

/// A serializable rule generating the terms of a series.
#[derive(Debug, Clone, PartialEq)]
pub enum StreamRule {
    /// Terms `coeff * t^i` for `i = 1, 2, 3, ...`
    Integers { coeff: FieldElem },
    /// Terms `coeff * t^(i + 2^-i)` for `i = 1, 2, 3, ...`; the
    /// exponent denominators are unbounded, so the sum lies outside
    /// the Puiseux field.
    GeometricGap { coeff: FieldElem },
    /// A finite list of terms (strictly increasing exponents); after
    /// the list is exhausted the series is exactly known.
    Finite { terms: Vec<(Rat, FieldElem)> },
    /// A constant added below an inner rule whose exponents are all
    /// positive.
    PlusConstant {
        constant: FieldElem,
        rest: Box<StreamRule>,
    },
}

impl StreamRule {
    /// A bound below which the rule yields no terms.
    pub fn start_bound(&self) -> Rat {
        match self {
            StreamRule::Integers { .. } => rat_int(1),
            StreamRule::GeometricGap { .. } => rat(3, 2),
            StreamRule::Finite { terms } => terms
                .first()
                .map(|(e, _)| e.clone())
                .unwrap_or_else(|| rat_int(0)),
            StreamRule::PlusConstant { .. } => rat_int(0),
        }
    }
}

/// One pull from a stream: at most one new term, plus the new bound
/// below which all terms are now known.
#[derive(Debug, Clone)]
pub struct Pull {
    pub term: Option<(Rat, FieldElem)>,
    pub below: Bound,
}

/// A positioned consumer of a [`StreamRule`]. Streams are
/// single-consumer; a fresh consumer for the same rule is obtained
/// with [`TermStream::new`].
#[derive(Debug, Clone)]
pub struct TermStream {
    rule: StreamRule,
    pos: u64,
}

impl TermStream {
    pub fn new(rule: StreamRule) -> Self {
        TermStream { rule, pos: 0 }
    }

    pub fn rule(&self) -> &StreamRule {
        &self.rule
    }

    /// Yield the next term (exponent strictly greater than everything
    /// yielded before) and the new knowledge bound.
    pub fn pull(&mut self) -> Pull {
        let pos = self.pos;
        self.pos += 1;
        pull_rule(&self.rule, pos)
    }
}

fn pull_rule(rule: &StreamRule, pos: u64) -> Pull {
    match rule {
        StreamRule::Integers { coeff } => {
            let i = pos + 1;
            Pull {
                term: Some((rat_int(i as i64), coeff.clone())),
                below: Bound::Finite(rat_int(i as i64 + 1)),
            }
        }
        StreamRule::GeometricGap { coeff } => {
            let i = pos + 1;
            let exp = |i: u64| {
                rat_int(i as i64) + Rat::new(BigInt::one(), BigInt::from(2u64).pow(i as u32))
            };
            Pull {
                term: Some((exp(i), coeff.clone())),
                below: Bound::Finite(exp(i + 1)),
            }
        }
        StreamRule::Finite { terms } => {
            let i = pos as usize;
            if i < terms.len() {
                let below = if i + 1 < terms.len() {
                    Bound::Finite(terms[i + 1].0.clone())
                } else {
                    Bound::Infinite
                };
                Pull {
                    term: Some(terms[i].clone()),
                    below,
                }
            } else {
                Pull {
                    term: None,
                    below: Bound::Infinite,
                }
            }
        }
        StreamRule::PlusConstant { constant, rest } => {
            if pos == 0 {
                let term = if constant.is_zero() {
                    None
                } else {
                    Some((rat_int(0), constant.clone()))
                };
                Pull {
                    term,
                    below: Bound::Finite(rest.start_bound()),
                }
            } else {
                pull_rule(rest, pos - 1)
            }
        }
    }
}
