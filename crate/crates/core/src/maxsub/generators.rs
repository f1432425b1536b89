//! Generator production and conductor computation.

use super::descriptor::{AlphaDescriptor, SubalgebraDescriptor};
use super::MaxsubError;
use crate::field::{root_of_unity, CycloField, FieldElem};
use crate::hahn::HahnSeries;
use crate::laurent::LaurentPoly;
use crate::rat::{denominator_lcm, rat_int, Rat};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::sync::Arc;

/// A degree-one element `(y - alpha_i) / t^(s_i)` of a classified
/// subalgebra; `alpha_i` is an exact finite series.
#[derive(Debug, Clone)]
pub struct DegreeOneElement {
    pub shift: Rat,
    pub alpha_prefix: HahnSeries,
}

impl DegreeOneElement {
    /// Render as `(y - alpha)/t^s`.
    pub fn render(&self) -> String {
        format!(
            "(y - ({}))/t^({})",
            self.alpha_prefix.render("t"),
            crate::rat::rat_to_string(&self.shift)
        )
    }

    /// The membership valuation of this element against a series:
    /// `nu((alpha - alpha_i)/t^(s_i))`.
    pub fn omega_at(&self, alpha: &HahnSeries) -> Option<Rat> {
        let diff = alpha.sub(&self.alpha_prefix);
        diff.valuation().ok().map(|v| v - &self.shift)
    }
}

/// The first `n` degree-one generators of the subalgebra pinned by
/// `alpha`.
///
/// For a series with infinite support, `s_i` is the i-th support
/// exponent and `alpha_i` the sum of the first `i-1` terms; for finite
/// support the generators are `(y - alpha)/t^j`, `j = 1..n`.
pub fn generators(alpha: &AlphaDescriptor, n: usize) -> Result<Vec<DegreeOneElement>, MaxsubError> {
    assert!(n >= 1, "generator count must be positive");
    // Find a prefix exposing at least n support exponents, or learn
    // that the support is finite.
    let mut depth = rat_int(8);
    let prefix = loop {
        let p = alpha.prefix_below(&depth)?;
        if p.is_exact() || p.support().len() >= n {
            break p;
        }
        depth = &depth * rat_int(2);
        if depth > rat_int(1 << 20) {
            return Err(MaxsubError::Undetermined { cap: depth });
        }
    };
    let field = prefix.field().clone();
    if prefix.is_exact() {
        // finite support: integer shifts of the full series
        return Ok((1..=n)
            .map(|j| DegreeOneElement {
                shift: rat_int(j as i64),
                alpha_prefix: prefix.clone(),
            })
            .collect());
    }
    let support = prefix.support();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let s_i = support[i].clone();
        let partial: Vec<(Rat, FieldElem)> = prefix
            .terms()
            .iter()
            .take(i)
            .cloned()
            .collect();
        out.push(DegreeOneElement {
            shift: s_i,
            alpha_prefix: HahnSeries::from_terms(&field, partial),
        });
    }
    Ok(out)
}

/// The minimal polynomial over `k(t)` of an exact finite series with
/// rational exponents, cleared to `k[t][y]`.
///
/// Computed as the product over the exponent-twisting orbit `t^(1/m)
/// -> zeta_m t^(1/m)` (m = lcm of exponent denominators); the
/// coefficients provably descend to the original field.
pub fn minimal_polynomial(alpha: &HahnSeries) -> Result<LaurentPoly, MaxsubError> {
    if !alpha.is_exact() {
        return Err(MaxsubError::InvalidDescriptor(
            "minimal polynomial needs an exact finite series".into(),
        ));
    }
    let field = alpha.field().clone();
    let m = denominator_lcm(alpha.support().iter())
        .to_u64()
        .ok_or_else(|| MaxsubError::InvalidDescriptor("ramification too large".into()))?;
    let big_field = if field.conductor() % m == 0 {
        field.clone()
    } else {
        CycloField::new(field.conductor().lcm(&m))
    };
    let zeta = root_of_unity(m, &big_field).expect("m divides the enlarged conductor");
    // conjugates: coefficient at exponent e picks up zeta^(j * m * e)
    let mut conjugates = Vec::with_capacity(m as usize);
    for j in 0..m {
        let terms = alpha
            .terms()
            .iter()
            .map(|(e, c)| {
                let c = if field.conductor() == big_field.conductor() {
                    c.clone()
                } else {
                    c.embed(&big_field)
                };
                let me = (e * rat_int(m as i64)).numer().clone();
                let exp = me.mod_floor(&num_bigint::BigInt::from(m)).to_u64().unwrap();
                (e.clone(), c.mul(&zeta.pow(exp * j % m.max(1))))
            })
            .collect();
        conjugates.push(HahnSeries::from_terms(&big_field, terms));
    }
    // product of (y - conjugate): coefficients as series in t
    let mut coeffs: Vec<HahnSeries> = vec![HahnSeries::one(&big_field)];
    for conj in &conjugates {
        let mut next = vec![HahnSeries::zero(&big_field); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].add(&c.mul(conj).neg());
        }
        coeffs = next;
    }
    // assemble; exponents must be integers and coefficients must
    // contract to the original field
    let mut out = LaurentPoly::zero(&field);
    for (y_exp, series) in coeffs.iter().enumerate() {
        for (e, c) in series.terms() {
            if !e.denom().to_u64().map_or(false, |d| d == 1) {
                return Err(MaxsubError::InvalidDescriptor(
                    "conjugate product has a fractional exponent; series is not ramified-regular"
                        .into(),
                ));
            }
            let t_exp = e.numer().to_i64().ok_or_else(|| {
                MaxsubError::InvalidDescriptor("exponent out of range".into())
            })?;
            let c = if field.conductor() == big_field.conductor() {
                c.clone()
            } else {
                c.contract(&field).map_err(|_| {
                    MaxsubError::InvalidDescriptor(
                        "minimal polynomial coefficients escape the coefficient field".into(),
                    )
                })?
            };
            out = out.add(&LaurentPoly::monomial(&field, t_exp, y_exp as u32, c));
        }
    }
    // clear any negative powers of t introduced by negative valuations
    if let Some((lo, _)) = out.t_range() {
        if lo < 0 {
            out = out.mul_t_pow(-lo);
        }
    }
    Ok(out)
}

/// The conductor of the subalgebra in `k[t, 1/t, y]`: the cleared
/// minimal polynomial of the pinning series, pulled back through the
/// normalizing automorphism — or `None` (zero conductor) for a
/// stream-backed, non-algebraic series.
///
/// For unit-case descriptors the minimal polynomial lives in the
/// variables `(u, Y) = (1/y, t)`; it is returned rewritten in `(t, y)`
/// after clearing the power of `y` (a unit of `k[t, y, 1/y]`).
pub fn conductor(
    descriptor: &SubalgebraDescriptor,
) -> Result<Option<LaurentPoly>, MaxsubError> {
    match descriptor {
        SubalgebraDescriptor::Psi { auto, alpha } => {
            let m = match alpha_minpoly(alpha)? {
                None => return Ok(None),
                Some(m) => m,
            };
            // conductor of sigma^-1(B) is sigma^-1(conductor of B)
            let pulled = auto.inverse().apply(&m);
            Ok(Some(clear_t(&pulled)))
        }
        SubalgebraDescriptor::Units { alpha } => {
            let m = match alpha_minpoly(alpha)? {
                None => return Ok(None),
                Some(m) => m,
            };
            // m lives in (u, Y): term c u^a Y^b -> c y^(-a) t^b;
            // clear the y-denominator.
            let field = m.field().clone();
            let max_u = m
                .iter_terms()
                .map(|(a, _, _)| a)
                .max()
                .unwrap_or(0)
                .max(0);
            let mut out = LaurentPoly::zero(&field);
            for (a, b, c) in m.iter_terms() {
                let y_exp = max_u - a;
                debug_assert!(y_exp >= 0);
                out = out.add(&LaurentPoly::monomial(
                    &field,
                    b as i64,
                    y_exp as u32,
                    c.clone(),
                ));
            }
            Ok(Some(out))
        }
        SubalgebraDescriptor::Poly(inner) => {
            // conductor of the intersection is the intersection of the
            // conductor; the generator only needs t-denominators
            // cleared, which `clear_t` already guarantees.
            conductor(inner)
        }
    }
}

fn alpha_minpoly(alpha: &AlphaDescriptor) -> Result<Option<LaurentPoly>, MaxsubError> {
    match alpha {
        AlphaDescriptor::Finite(series) => Ok(Some(minimal_polynomial(series)?)),
        AlphaDescriptor::Algebraic { minpoly, .. } => Ok(Some(minpoly.clone())),
        AlphaDescriptor::Stream { rule, .. } => {
            // A finite rule is secretly an exact series; genuinely
            // open-ended rules have zero conductor.
            match rule_finite_series(rule, &alpha.field()) {
                Some(series) => Ok(Some(minimal_polynomial(&series)?)),
                None => Ok(None),
            }
        }
    }
}

fn rule_finite_series(
    rule: &crate::hahn::StreamRule,
    field: &Arc<CycloField>,
) -> Option<HahnSeries> {
    use crate::hahn::StreamRule;
    match rule {
        StreamRule::Finite { terms } => Some(HahnSeries::from_terms(field, terms.clone())),
        StreamRule::PlusConstant { constant, rest } => rule_finite_series(rest, field)
            .map(|s| s.add(&HahnSeries::constant(constant.clone()))),
        StreamRule::Integers { .. } | StreamRule::GeometricGap { .. } => None,
    }
}

fn clear_t(p: &LaurentPoly) -> LaurentPoly {
    match p.t_range() {
        Some((lo, _)) if lo < 0 => p.mul_t_pow(-lo),
        _ => p.clone(),
    }
}

/// Normalize a conductor representative for comparisons: monic in the
/// top y-coefficient's lowest t-term, with t-powers cleared.
pub fn monic_normal_form(p: &LaurentPoly) -> LaurentPoly {
    let cleared = clear_t(p);
    let Some(deg) = cleared.y_degree() else {
        return cleared;
    };
    let top = cleared.y_coefficient_series(deg);
    match top.leading() {
        Some((_, c)) => {
            let inv = c.inv().expect("nonzero leading coefficient");
            cleared.scale(&inv)
        }
        None => cleared,
    }
}
