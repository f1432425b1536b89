//! Elements of `k[t, 1/t, y]`: sparse Laurent polynomials in `t` and
//! polynomials in `y`, their evaluation into Hahn series, and the
//! automorphisms used by the classification.

use crate::field::{CycloField, FieldElem};
use crate::hahn::{HahnError, HahnSeries, ValuationError};
use crate::rat::{rat_int, Rat};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum LaurentError {
    #[error("operation undefined for the zero polynomial")]
    ZeroInput,
    #[error("coefficient valuation undetermined")]
    Undetermined,
    #[error(transparent)]
    Hahn(#[from] HahnError),
}

/// A sparse element of `k[t, 1/t, y]`: map from `(t exponent, y
/// exponent)` to nonzero coefficients. Keys are ordered by y-degree
/// then t-degree.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly {
    field: Arc<CycloField>,
    terms: BTreeMap<(u32, i64), FieldElem>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.render("t", "y"))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t", "y"))
    }
}

impl LaurentPoly {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        LaurentPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::monomial(field, 0, 0, FieldElem::one(field))
    }

    pub fn constant(c: FieldElem) -> Self {
        let field = c.field().clone();
        Self::monomial(&field, 0, 0, c)
    }

    /// `coeff * t^a * y^b`
    pub fn monomial(field: &Arc<CycloField>, t_exp: i64, y_exp: u32, coeff: FieldElem) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((y_exp, t_exp), coeff);
        }
        LaurentPoly {
            field: field.clone(),
            terms,
        }
    }

    pub fn var_t(field: &Arc<CycloField>) -> Self {
        Self::monomial(field, 1, 0, FieldElem::one(field))
    }

    pub fn var_y(field: &Arc<CycloField>) -> Self {
        Self::monomial(field, 0, 1, FieldElem::one(field))
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate `(t_exp, y_exp, coeff)`.
    pub fn iter_terms(&self) -> impl Iterator<Item = (i64, u32, &FieldElem)> {
        self.terms.iter().map(|((y, t), c)| (*t, *y, c))
    }

    pub fn coeff(&self, t_exp: i64, y_exp: u32) -> FieldElem {
        self.terms
            .get(&(y_exp, t_exp))
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(&self.field))
    }

    fn insert(&mut self, t_exp: i64, y_exp: u32, coeff: FieldElem) {
        if coeff.is_zero() {
            return;
        }
        let key = (y_exp, t_exp);
        match self.terms.get_mut(&key) {
            Some(c) => {
                let s = c.add(&coeff);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, y, c) in other.iter_terms() {
            out.insert(t, y, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field);
        for (t1, y1, c1) in self.iter_terms() {
            for (t2, y2, c2) in other.iter_terms() {
                out.insert(t1 + t2, y1 + y2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut out = Self::zero(&self.field);
        for (t, y, a) in self.iter_terms() {
            out.insert(t, y, a.mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by `t^k` (k may be negative).
    pub fn mul_t_pow(&self, k: i64) -> Self {
        LaurentPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|((y, t), c)| ((*y, t + k), c.clone()))
                .collect(),
        }
    }

    pub fn y_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(y, _)| *y).max()
    }

    /// Smallest and largest t-exponent appearing.
    pub fn t_range(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys().map(|(_, t)| *t);
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for t in it {
            lo = lo.min(t);
            hi = hi.max(t);
        }
        Some((lo, hi))
    }

    /// True when no negative t-exponents occur (an element of `k[t,y]`).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|(_, t)| *t >= 0)
    }

    /// The coefficient of `y^b` as an exact series in `t`.
    pub fn y_coefficient_series(&self, y_exp: u32) -> HahnSeries {
        let terms = self
            .terms
            .iter()
            .filter(|((y, _), _)| *y == y_exp)
            .map(|((_, t), c)| (rat_int(*t), c.clone()))
            .collect();
        HahnSeries::from_terms(&self.field, terms)
    }

    /// View as a polynomial in `y` with exact series coefficients,
    /// lowest y-degree first.
    pub fn to_series_coeffs(&self) -> Vec<HahnSeries> {
        let deg = match self.y_degree() {
            None => return vec![],
            Some(d) => d,
        };
        (0..=deg).map(|b| self.y_coefficient_series(b)).collect()
    }

    /// Substitute `y := alpha`, keeping `t` as the series variable.
    /// Exact on the prefix derivable from `alpha`'s precision.
    pub fn evaluate_y(&self, alpha: &HahnSeries) -> HahnSeries {
        let coeffs = self.to_series_coeffs();
        let mut acc = HahnSeries::zero(&self.field);
        for c in coeffs.iter().rev() {
            acc = acc.mul(alpha).add(c);
        }
        acc
    }

    /// Substitute `t := alpha(u)` and `y := 1/u`, producing a series
    /// in `u`. Negative t-exponents use the reciprocal of `alpha`
    /// computed below `prec`.
    pub fn evaluate_t(&self, alpha: &HahnSeries, prec: &Rat) -> Result<HahnSeries, LaurentError> {
        let needs_inverse = self.terms.keys().any(|(_, t)| *t < 0);
        let alpha_inv = if needs_inverse {
            Some(alpha.reciprocal(prec)?)
        } else {
            None
        };
        let mut pos_pow: Vec<HahnSeries> = vec![HahnSeries::one(&self.field)];
        let mut neg_pow: Vec<HahnSeries> = vec![HahnSeries::one(&self.field)];
        let mut out = HahnSeries::zero(&self.field);
        for (t, y, c) in self.iter_terms() {
            let t_part = if t >= 0 {
                while pos_pow.len() <= t as usize {
                    pos_pow.push(pos_pow.last().unwrap().mul(alpha));
                }
                pos_pow[t as usize].clone()
            } else {
                let k = (-t) as usize;
                let inv = alpha_inv.as_ref().unwrap();
                while neg_pow.len() <= k {
                    neg_pow.push(neg_pow.last().unwrap().mul(inv));
                }
                neg_pow[k].clone()
            };
            let term = t_part
                .mul_monomial(&rat_int(-(y as i64)), &FieldElem::one(&self.field))
                .scale(c);
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Render with given variable names; deterministic term order
    /// (descending y-degree, then descending t-exponent).
    pub fn render(&self, t_var: &str, y_var: &str) -> String {
        use num_traits::{One, Signed};
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, ((y, t), c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c.as_rat() {
                Some(r) if r.is_negative() => (true, FieldElem::from_rat(c.field(), -r)),
                _ => (false, c.clone()),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut parts: Vec<String> = Vec::new();
            let coeff_str = match mag.as_rat() {
                Some(r) if r.is_one() && (*t != 0 || *y != 0) => None,
                Some(r) => Some(crate::rat::rat_to_string(&r)),
                None => Some(format!("({})", mag)),
            };
            if let Some(s) = coeff_str {
                parts.push(s);
            }
            if *t != 0 {
                parts.push(if *t == 1 {
                    t_var.to_string()
                } else if *t > 1 {
                    format!("{}^{}", t_var, t)
                } else {
                    format!("{}^({})", t_var, t)
                });
            }
            if *y != 0 {
                parts.push(if *y == 1 {
                    y_var.to_string()
                } else {
                    format!("{}^{}", y_var, y)
                });
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

/// The automorphisms of `k[t, 1/t, y]` used to normalize descriptors:
/// optionally `t -> 1/t`, then `y -> t^(-twist) y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Automorphism {
    pub swap_t: bool,
    pub twist: i64,
}

impl Automorphism {
    pub fn identity() -> Self {
        Automorphism {
            swap_t: false,
            twist: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.swap_t && self.twist == 0
    }

    /// On monomials: `t^a y^b -> t^(s(a) - twist*b) y^b` where `s`
    /// negates when the swap is active.
    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let field = f.field().clone();
        let mut out = LaurentPoly::zero(&field);
        for (a, b, c) in f.iter_terms() {
            let t_img = if self.swap_t { -a } else { a };
            out.insert(t_img - self.twist * b as i64, b, c.clone());
        }
        out
    }

    pub fn inverse(&self) -> Self {
        if self.swap_t {
            // the swap-and-twist map is an involution
            *self
        } else {
            Automorphism {
                swap_t: false,
                twist: -self.twist,
            }
        }
    }
}

/// The Gauss valuation `min_i nu(f_i)` of a polynomial in `y` with
/// series coefficients.
pub fn gauss_valuation(coeffs: &[HahnSeries]) -> Result<Rat, LaurentError> {
    let mut best: Option<Rat> = None;
    let mut all_zero = true;
    for c in coeffs {
        match c.valuation() {
            Ok(v) => {
                all_zero = false;
                best = Some(match best {
                    None => v,
                    Some(b) => b.min(v),
                });
            }
            Err(ValuationError::ExactZero) => {}
            Err(ValuationError::Undetermined(_)) => return Err(LaurentError::Undetermined),
        }
    }
    if all_zero {
        return Err(LaurentError::ZeroInput);
    }
    Ok(best.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn q() -> Arc<CycloField> {
        CycloField::rationals()
    }

    fn mono(t: i64, y: u32, c: i64) -> LaurentPoly {
        let f = q();
        LaurentPoly::monomial(&f, t, y, FieldElem::from_int(&f, c))
    }

    fn half_t() -> HahnSeries {
        HahnSeries::monomial(rat(1, 2), FieldElem::one(&q()))
    }

    #[test]
    fn evaluate_y_examples() {
        // y^2 at t^(1/2) -> t
        let f = mono(0, 2, 1);
        assert_eq!(
            f.evaluate_y(&half_t()),
            HahnSeries::monomial(rat_int(1), FieldElem::one(&q()))
        );
        // (y^2 - t)/t at t^(1/2) -> exact 0
        let g = mono(-1, 2, 1).add(&mono(0, 0, -1));
        assert!(g.evaluate_y(&half_t()).is_exact_zero());
        // y/t at t^(1/2) -> t^(-1/2)
        let h = mono(-1, 1, 1);
        assert_eq!(
            h.evaluate_y(&half_t()),
            HahnSeries::monomial(rat(-1, 2), FieldElem::one(&q()))
        );
    }

    #[test]
    fn evaluate_t_examples() {
        let f = q();
        let one_plus_u = HahnSeries::from_terms(
            &f,
            vec![
                (rat_int(0), FieldElem::one(&f)),
                (rat_int(1), FieldElem::one(&f)),
            ],
        );
        let prec = rat_int(8);
        // f = t -> 1 + u
        let t = LaurentPoly::var_t(&f);
        assert_eq!(t.evaluate_t(&one_plus_u, &prec).unwrap(), one_plus_u);
        // f = (t-1)*y -> u * u^-1 = 1
        let g = LaurentPoly::var_t(&f)
            .sub(&LaurentPoly::one(&f))
            .mul(&LaurentPoly::var_y(&f));
        assert_eq!(
            g.evaluate_t(&one_plus_u, &prec).unwrap(),
            HahnSeries::one(&f)
        );
        // f = y -> u^-1
        let y = LaurentPoly::var_y(&f);
        let v = y.evaluate_t(&one_plus_u, &prec).unwrap();
        assert_eq!(v.valuation(), Ok(rat_int(-1)));
        // f = 1/t -> reciprocal of 1 + u: valuation 0, next term -u
        let tinv = mono(-1, 0, 1);
        let r = tinv.evaluate_t(&one_plus_u, &prec).unwrap();
        assert_eq!(r.valuation(), Ok(rat_int(0)));
        assert_eq!(r.coeff_at(&rat_int(1)), FieldElem::from_int(&f, -1));
    }

    #[test]
    fn gauss_valuation_examples() {
        let f = q();
        // y/t + 1 -> min(0, -1) = -1
        let p = mono(-1, 1, 1).add(&LaurentPoly::one(&f));
        assert_eq!(gauss_valuation(&p.to_series_coeffs()), Ok(rat_int(-1)));
        // t*y^2 + t^2 -> min(2, 1) = 1
        let p = mono(1, 2, 1).add(&mono(2, 0, 1));
        assert_eq!(gauss_valuation(&p.to_series_coeffs()), Ok(rat_int(1)));
        // (1-t)y + (t - t^2) -> 0
        let p = mono(0, 1, 1)
            .add(&mono(1, 1, -1))
            .add(&mono(1, 0, 1))
            .add(&mono(2, 0, -1));
        assert_eq!(gauss_valuation(&p.to_series_coeffs()), Ok(rat_int(0)));
        assert_eq!(
            gauss_valuation(&LaurentPoly::zero(&f).to_series_coeffs()),
            Err(LaurentError::ZeroInput)
        );
    }

    #[test]
    fn gauss_valuation_is_additive_on_products() {
        let ps = [
            mono(-1, 1, 1).add(&LaurentPoly::one(&q())),
            mono(1, 2, 1).add(&mono(2, 0, 1)),
            mono(0, 1, 1).add(&mono(3, 0, 2)),
            mono(-2, 0, 5).add(&mono(0, 3, -1)),
        ];
        for a in &ps {
            for b in &ps {
                let va = gauss_valuation(&a.to_series_coeffs()).unwrap();
                let vb = gauss_valuation(&b.to_series_coeffs()).unwrap();
                let vab = gauss_valuation(&a.mul(b).to_series_coeffs()).unwrap();
                assert_eq!(vab, va + vb);
            }
        }
    }

    #[test]
    fn automorphism_examples() {
        let f = q();
        // twist 1: y -> y/t
        let tw = Automorphism {
            swap_t: false,
            twist: 1,
        };
        assert_eq!(tw.apply(&LaurentPoly::var_y(&f)), mono(-1, 1, 1));
        // swap: t -> 1/t
        let sw = Automorphism {
            swap_t: true,
            twist: 0,
        };
        assert_eq!(sw.apply(&LaurentPoly::var_t(&f)), mono(-1, 0, 1));
        // twist 2: t^2 y + 1 -> y + 1
        let tw2 = Automorphism {
            swap_t: false,
            twist: 2,
        };
        let p = mono(2, 1, 1).add(&LaurentPoly::one(&f));
        assert_eq!(
            tw2.apply(&p),
            LaurentPoly::var_y(&f).add(&LaurentPoly::one(&f))
        );
    }

    #[test]
    fn automorphisms_invert_exactly() {
        let samples = [
            mono(2, 1, 1)
                .add(&mono(-3, 2, 5))
                .add(&LaurentPoly::one(&q())),
            mono(0, 4, -2).add(&mono(-1, 0, 7)),
        ];
        let autos = [
            Automorphism {
                swap_t: false,
                twist: 3,
            },
            Automorphism {
                swap_t: true,
                twist: 2,
            },
            Automorphism {
                swap_t: true,
                twist: 0,
            },
        ];
        for f in &samples {
            for a in &autos {
                let round = a.inverse().apply(&a.apply(f));
                assert_eq!(&round, f);
                // degree in y is preserved
                assert_eq!(a.apply(f).y_degree(), f.y_degree());
            }
        }
    }

    #[test]
    fn evaluate_y_is_ring_homomorphism_on_samples() {
        let alpha = HahnSeries::from_terms(
            &q(),
            vec![
                (rat(1, 2), FieldElem::one(&q())),
                (rat_int(2), FieldElem::from_int(&q(), -3)),
            ],
        );
        let fs = [
            mono(-1, 1, 1).add(&LaurentPoly::one(&q())),
            mono(1, 2, 1).add(&mono(2, 0, 1)),
            mono(0, 3, 2).add(&mono(-2, 1, -1)),
        ];
        for a in &fs {
            for b in &fs {
                let lhs_add = a.add(b).evaluate_y(&alpha);
                let rhs_add = a.evaluate_y(&alpha).add(&b.evaluate_y(&alpha));
                assert_eq!(lhs_add, rhs_add);
                let lhs_mul = a.mul(b).evaluate_y(&alpha);
                let rhs_mul = a.evaluate_y(&alpha).mul(&b.evaluate_y(&alpha));
                assert_eq!(lhs_mul, rhs_mul);
            }
        }
    }

    #[test]
    fn render_terms() {
        let p = mono(-1, 2, 1).add(&mono(0, 0, -1)).add(&mono(-2, 1, 3));
        assert_eq!(p.render("t", "y"), "t^(-1)*y^2 + 3*t^(-2)*y - 1");
    }
}
