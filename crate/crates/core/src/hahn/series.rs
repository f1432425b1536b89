//! The series type: a finite, strictly increasing list of terms, a
//! bound below which the series is fully known, and an optional lazy
//! tail.

use super::stream::{StreamRule, TermStream};
use super::{HahnError, ValuationError};
use crate::field::{CycloField, FieldElem};
use crate::rat::{rat_to_string, Rat};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// An exponent bound: either a finite rational or `+infinity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Finite(Rat),
    Infinite,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(r) => write!(f, "{}", rat_to_string(r)),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Infinite, Bound::Infinite) => Ordering::Equal,
            (Bound::Infinite, _) => Ordering::Greater,
            (_, Bound::Infinite) => Ordering::Less,
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
        }
    }
}

impl Bound {
    pub fn add_rat(&self, r: &Rat) -> Bound {
        match self {
            Bound::Finite(a) => Bound::Finite(a + r),
            Bound::Infinite => Bound::Infinite,
        }
    }

    pub fn exceeds(&self, r: &Rat) -> bool {
        match self {
            Bound::Finite(a) => a > r,
            Bound::Infinite => true,
        }
    }

    pub fn at_least(&self, r: &Rat) -> bool {
        match self {
            Bound::Finite(a) => a >= r,
            Bound::Infinite => true,
        }
    }
}

/// A generalized power series with exact terms and tracked precision.
///
/// Invariants: exponents strictly increasing, no zero coefficients,
/// every stored exponent `< known_below` when that bound is finite.
/// When `known_below` is infinite and there is no tail, the series is
/// exactly the stored finite sum.
#[derive(Clone)]
pub struct HahnSeries {
    field: Arc<CycloField>,
    terms: Vec<(Rat, FieldElem)>,
    known_below: Bound,
    tail: Option<TermStream>,
}

impl fmt::Debug for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HahnSeries({})", self)
    }
}

impl PartialEq for HahnSeries {
    /// Structural equality of the known data (terms and bound).
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.known_below == other.known_below
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

impl HahnSeries {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        HahnSeries {
            field: field.clone(),
            terms: vec![],
            known_below: Bound::Infinite,
            tail: None,
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::monomial(Rat::zero(), FieldElem::one(field))
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(Rat::zero(), c)
    }

    /// `coeff * t^exp`, exact.
    pub fn monomial(exp: Rat, coeff: FieldElem) -> Self {
        let field = coeff.field().clone();
        let terms = if coeff.is_zero() {
            vec![]
        } else {
            vec![(exp, coeff)]
        };
        HahnSeries {
            field,
            terms,
            known_below: Bound::Infinite,
            tail: None,
        }
    }

    /// An exact finite series from (exponent, coefficient) pairs in any
    /// order; duplicates are merged, zeros dropped.
    pub fn from_terms(field: &Arc<CycloField>, mut terms: Vec<(Rat, FieldElem)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rat, FieldElem)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => {
                    *lc = lc.add(&c);
                    if lc.is_zero() {
                        merged.pop();
                    }
                }
                _ => {
                    if !c.is_zero() {
                        merged.push((e, c));
                    }
                }
            }
        }
        HahnSeries {
            field: field.clone(),
            terms: merged,
            known_below: Bound::Infinite,
            tail: None,
        }
    }

    /// A series known only below a bound; terms at or above it are
    /// discarded.
    pub fn with_precision(mut self, bound: Bound) -> Self {
        if let Bound::Finite(b) = &bound {
            self.terms.retain(|(e, _)| e < b);
        }
        self.known_below = bound;
        self.tail = None;
        self
    }

    /// A lazy series generated by a stream rule; nothing is known
    /// until terms are pulled.
    pub fn from_rule(field: &Arc<CycloField>, rule: StreamRule) -> Self {
        let start = rule.start_bound();
        HahnSeries {
            field: field.clone(),
            terms: vec![],
            known_below: Bound::Finite(start),
            tail: Some(TermStream::new(rule)),
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn terms(&self) -> &[(Rat, FieldElem)] {
        &self.terms
    }

    pub fn known_below(&self) -> &Bound {
        &self.known_below
    }

    pub fn has_tail(&self) -> bool {
        self.tail.is_some()
    }

    /// Exactly the zero series (fully known, no terms).
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.known_below == Bound::Infinite && self.tail.is_none()
    }

    /// True when the series is an exact finite sum.
    pub fn is_exact(&self) -> bool {
        self.known_below == Bound::Infinite
    }

    pub fn support(&self) -> Vec<Rat> {
        self.terms.iter().map(|(e, _)| e.clone()).collect()
    }

    pub fn coeff_at(&self, exp: &Rat) -> FieldElem {
        self.terms
            .iter()
            .find(|(e, _)| e == exp)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| FieldElem::zero(&self.field))
    }

    /// Pull terms from the tail until the series is known below `u`.
    pub fn ensure_known_below(&mut self, u: &Rat) -> Result<(), HahnError> {
        loop {
            if self.known_below.at_least(u) {
                return Ok(());
            }
            let Some(tail) = self.tail.as_mut() else {
                return Err(HahnError::InsufficientPrecision {
                    needed: u.clone(),
                    known_below: self.known_below.clone(),
                });
            };
            let pull = tail.pull();
            if let Some((e, c)) = pull.term {
                debug_assert!(self
                    .terms
                    .last()
                    .map_or(true, |(last, _)| *last < e));
                if !c.is_zero() {
                    self.terms.push((e, c));
                }
            }
            debug_assert!(pull.below > self.known_below);
            self.known_below = pull.below;
            if self.known_below == Bound::Infinite {
                self.tail = None;
            }
        }
    }

    /// min supp, when a nonzero term is known.
    pub fn valuation(&self) -> Result<Rat, ValuationError> {
        match self.terms.first() {
            Some((e, _)) => Ok(e.clone()),
            None => {
                if self.is_exact_zero() {
                    Err(ValuationError::ExactZero)
                } else {
                    Err(ValuationError::Undetermined(self.known_below.clone()))
                }
            }
        }
    }

    /// Leading (exponent, coefficient), when known.
    pub fn leading(&self) -> Option<(&Rat, &FieldElem)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    /// Valuation, pulling from the tail up to the exponent cap.
    pub fn valuation_pulling(&mut self, cap: &Rat) -> Result<Rat, ValuationError> {
        while self.terms.is_empty() && !self.known_below.exceeds(cap) && self.tail.is_some() {
            self.ensure_known_below(
                &(match &self.known_below {
                    Bound::Finite(b) => b + Rat::one(),
                    Bound::Infinite => break,
                }),
            )
            .ok();
        }
        self.valuation()
    }

    fn min_known_exp(&self) -> Bound {
        match self.terms.first() {
            Some((e, _)) => Bound::Finite(e.clone()),
            None => Bound::Infinite,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let bound = self.known_below.clone().min(other.known_below.clone());
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = match (self.terms.get(i), other.terms.get(j)) {
                (Some((ea, _)), Some((eb, _))) => {
                    if ea == eb {
                        let c = self.terms[i].1.add(&other.terms[j].1);
                        if !c.is_zero() {
                            terms.push((ea.clone(), c));
                        }
                        i += 1;
                        j += 1;
                        continue;
                    }
                    ea < eb
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if take_left {
                terms.push(self.terms[i].clone());
                i += 1;
            } else {
                terms.push(other.terms[j].clone());
                j += 1;
            }
        }
        HahnSeries {
            field: self.field.clone(),
            terms,
            known_below: Bound::Infinite,
            tail: None,
        }
        .with_precision(bound)
    }

    pub fn neg(&self) -> Self {
        HahnSeries {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
            known_below: self.known_below.clone(),
            tail: None,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Exact convolution on the known prefixes. The result bound is
    /// the tightest bound derivable from the inputs.
    pub fn mul(&self, other: &Self) -> Self {
        // Unknown parts contribute exponents >= min over:
        //   nu(a) + kb(b), nu(b) + kb(a), kb(a) + kb(b).
        let bound_candidates = [
            match (&self.min_known_exp(), &other.known_below) {
                (Bound::Finite(v), Bound::Finite(k)) => Bound::Finite(v + k),
                _ => Bound::Infinite,
            },
            match (&other.min_known_exp(), &self.known_below) {
                (Bound::Finite(v), Bound::Finite(k)) => Bound::Finite(v + k),
                _ => Bound::Infinite,
            },
            match (&self.known_below, &other.known_below) {
                (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a + b),
                _ => Bound::Infinite,
            },
        ];
        let bound = bound_candidates.into_iter().min().unwrap();
        let mut terms = Vec::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let c = ca.mul(cb);
                if !c.is_zero() {
                    terms.push((ea + eb, c));
                }
            }
        }
        Self::from_terms(&self.field, terms).with_precision(bound)
    }

    pub fn mul_monomial(&self, exp: &Rat, coeff: &FieldElem) -> Self {
        self.mul(&Self::monomial(exp.clone(), coeff.clone()))
    }

    pub fn scale(&self, coeff: &FieldElem) -> Self {
        if coeff.is_zero() {
            return Self::zero(&self.field);
        }
        HahnSeries {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.mul(coeff)))
                .collect(),
            known_below: self.known_below.clone(),
            tail: None,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `1/self` with terms computed below `precision`.
    ///
    /// Requires a known leading term; returns the exact monomial
    /// inverse when the input is an exact monomial.
    pub fn reciprocal(&self, precision: &Rat) -> Result<Self, HahnError> {
        let (v, lead) = match self.leading() {
            Some((e, c)) => (e.clone(), c.clone()),
            None => {
                if self.is_exact_zero() {
                    return Err(HahnError::ZeroDivision);
                }
                return Err(HahnError::InsufficientPrecision {
                    needed: precision.clone(),
                    known_below: self.known_below.clone(),
                });
            }
        };
        let lead_inv = lead.inv().expect("nonzero leading coefficient");
        // self = lead * t^v * (1 + u) with nu(u) > 0.
        let u = self
            .sub(&Self::monomial(v.clone(), lead.clone()))
            .mul_monomial(&-v.clone(), &lead_inv);
        if u.terms.is_empty() && u.known_below == Bound::Infinite {
            // exact monomial
            return Ok(Self::monomial(-v.clone(), lead_inv));
        }
        // Result bound: requested precision, tightened by what the
        // input bound supports (error ~ t^(kb - 2v)).
        let derived = self.known_below.add_rat(&(-(&v + &v)));
        let target = Bound::Finite(precision.clone()).min(derived);
        let limit = match &target {
            Bound::Finite(b) => b + &v, // geometric sum runs below precision + v
            Bound::Infinite => unreachable!("inexact input gives finite bound"),
        };
        let mut sum = Self::one(&self.field);
        let mut power = u.neg();
        loop {
            match power.leading() {
                Some((e, _)) if *e < limit => {
                    sum = sum.add(&power);
                    power = power.mul(&u.neg());
                }
                _ => break,
            }
        }
        Ok(sum.mul_monomial(&-v.clone(), &lead_inv).with_precision(target))
    }

    /// Split at `u`: returns `(sum of terms below u, sum of terms at
    /// or above u)`. The low part is exact and finite; the high part
    /// keeps this series' precision. Requires the series to be known
    /// below `u`.
    pub fn cutoff(&self, u: &Rat) -> Result<(Self, Self), HahnError> {
        if !self.known_below.at_least(u) {
            return Err(HahnError::InsufficientPrecision {
                needed: u.clone(),
                known_below: self.known_below.clone(),
            });
        }
        let low: Vec<_> = self
            .terms
            .iter()
            .filter(|(e, _)| e < u)
            .cloned()
            .collect();
        let high: Vec<_> = self
            .terms
            .iter()
            .filter(|(e, _)| e >= u)
            .cloned()
            .collect();
        let low = Self::from_terms(&self.field, low);
        let high = HahnSeries {
            field: self.field.clone(),
            terms: high,
            known_below: self.known_below.clone(),
            tail: None,
        };
        Ok((low, high))
    }

    /// Render with a chosen variable name, e.g. `3/2*t^(1/2) + t^2`.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = coeff_sign_mag(c);
            if i == 0 {
                if sign {
                    out.push('-');
                }
            } else {
                out.push_str(if sign { " - " } else { " + " });
            }
            out.push_str(&term_string(e, &mag, var));
        }
        if self.terms.is_empty() {
            out.push('0');
        }
        if let Bound::Finite(b) = &self.known_below {
            out.push_str(&format!(" + O({}^({}))", var, rat_to_string(b)));
        }
        out
    }
}

/// Returns (is_negative, magnitude) for printing; only rational
/// elements get a sign pulled out.
fn coeff_sign_mag(c: &FieldElem) -> (bool, FieldElem) {
    match c.as_rat() {
        Some(r) if r.is_negative() => (true, FieldElem::from_rat(c.field(), -r)),
        _ => (false, c.clone()),
    }
}

fn term_string(e: &Rat, c: &FieldElem, var: &str) -> String {
    let coeff_str = match c.as_rat() {
        Some(r) if r.is_one() && !e.is_zero() => String::new(),
        Some(r) => rat_to_string(&r),
        None => format!("({})", c),
    };
    if e.is_zero() {
        return if coeff_str.is_empty() {
            "1".to_string()
        } else {
            coeff_str
        };
    }
    let var_str = if e.is_one() {
        var.to_string()
    } else if e.denom().is_one() && !e.is_negative() {
        format!("{}^{}", var, e.numer())
    } else {
        format!("{}^({})", var, rat_to_string(e))
    };
    if coeff_str.is_empty() {
        var_str
    } else {
        format!("{}*{}", coeff_str, var_str)
    }
}
