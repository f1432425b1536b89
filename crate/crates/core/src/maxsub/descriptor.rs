//! Descriptor types and their JSON document form.

use super::MaxsubError;
use crate::field::{CycloField, FieldElem};
use crate::hahn::{Bound, HahnSeries, StreamRule};
use crate::laurent::{Automorphism, LaurentPoly};
use crate::parse::{parse_field_elem, parse_laurent, parse_series};
use crate::puiseux::{puiseux_expand, separation_precision};
use crate::rat::{rat_from_str, rat_int, rat_to_string, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// A series `alpha` with `nu(alpha) >= 0` pinning a classified
/// subalgebra.
#[derive(Debug, Clone)]
pub enum AlphaDescriptor {
    /// An exact finite series.
    Finite(HahnSeries),
    /// A root of `minpoly` in `k[t][y]`, identified by a prefix that
    /// extends beyond the separation bound of the minpoly's branches.
    Algebraic {
        minpoly: LaurentPoly,
        prefix: HahnSeries,
        separation: Rat,
    },
    /// A stream-backed series; `transcendental` is asserted by the
    /// caller and is what makes `NotIn`/nonzero answers trustworthy.
    Stream {
        rule: StreamRule,
        transcendental: bool,
    },
}

impl AlphaDescriptor {
    pub fn finite(series: HahnSeries) -> Result<Self, MaxsubError> {
        if !series.is_exact() {
            return Err(MaxsubError::InvalidDescriptor(
                "finite descriptor requires an exact series".into(),
            ));
        }
        if let Ok(v) = series.valuation() {
            if v < Rat::zero() {
                return Err(MaxsubError::InvalidDescriptor(
                    "descriptor series must have nonnegative valuation".into(),
                ));
            }
        }
        Ok(AlphaDescriptor::Finite(series))
    }

    /// Identify a root of `minpoly` by a prefix. The prefix must agree
    /// with exactly one expanded branch on all exponents up to the
    /// separation bound.
    pub fn algebraic(minpoly: &LaurentPoly, hint: &HahnSeries) -> Result<Self, MaxsubError> {
        if minpoly.is_zero() || minpoly.y_degree().unwrap_or(0) == 0 {
            return Err(MaxsubError::InvalidDescriptor(
                "minimal polynomial must have positive y-degree".into(),
            ));
        }
        let cleared = match minpoly.t_range() {
            Some((lo, _)) if lo < 0 => minpoly.mul_t_pow(-lo),
            _ => minpoly.clone(),
        };
        let branches = puiseux_expand(&cleared, &rat_int(4))?;
        let separation = if branches.len() >= 2 {
            separation_precision(&branches)?
        } else {
            Rat::zero()
        };
        // deepen so every prefix strictly exceeds the separation bound
        let need = &separation + rat_int(1);
        let branches = puiseux_expand(&cleared, &need)?;
        let matching: Vec<&crate::puiseux::PuiseuxBranch> = branches
            .iter()
            .filter(|b| agrees_up_to(&b.expansion, hint, &separation))
            .collect();
        match matching.len() {
            0 => Err(MaxsubError::InvalidDescriptor(
                "prefix matches no branch of the minimal polynomial".into(),
            )),
            1 => {
                let prefix = matching[0].expansion.clone();
                if let Ok(v) = prefix.valuation() {
                    if v < Rat::zero() {
                        return Err(MaxsubError::InvalidDescriptor(
                            "descriptor series must have nonnegative valuation".into(),
                        ));
                    }
                }
                Ok(AlphaDescriptor::Algebraic {
                    minpoly: cleared,
                    prefix,
                    separation,
                })
            }
            _ => Err(MaxsubError::InvalidDescriptor(
                "prefix does not determine a unique branch; extend it beyond the separation bound"
                    .into(),
            )),
        }
    }

    pub fn stream(rule: StreamRule, transcendental: bool) -> Self {
        AlphaDescriptor::Stream {
            rule,
            transcendental,
        }
    }

    pub fn field(&self) -> Arc<CycloField> {
        match self {
            AlphaDescriptor::Finite(s) => s.field().clone(),
            AlphaDescriptor::Algebraic { prefix, .. } => prefix.field().clone(),
            AlphaDescriptor::Stream { rule, .. } => rule_field(rule),
        }
    }

    /// Materialize the series known below `bound`.
    pub fn prefix_below(&self, bound: &Rat) -> Result<HahnSeries, MaxsubError> {
        match self {
            AlphaDescriptor::Finite(s) => Ok(s.clone()),
            AlphaDescriptor::Algebraic {
                minpoly, prefix, ..
            } => {
                if prefix.known_below().at_least(bound) || prefix.is_exact() {
                    return Ok(prefix.clone());
                }
                let branches = puiseux_expand(minpoly, bound)?;
                let sep = prefix
                    .known_below()
                    .clone();
                let sep = match sep {
                    Bound::Finite(b) => b,
                    Bound::Infinite => unreachable!("exact prefix returned above"),
                };
                for b in branches {
                    if agrees_up_to(&b.expansion, prefix, &sep) {
                        return Ok(b.expansion);
                    }
                }
                Err(MaxsubError::InvalidDescriptor(
                    "stored prefix no longer matches a branch".into(),
                ))
            }
            AlphaDescriptor::Stream { rule, .. } => {
                let mut s = HahnSeries::from_rule(&rule_field(rule), rule.clone());
                s.ensure_known_below(bound)?;
                Ok(s)
            }
        }
    }

    /// True when the descriptor certifies that the series is algebraic
    /// over `k(t)` (finite support or an explicit minimal polynomial).
    pub fn is_algebraic(&self) -> bool {
        !matches!(self, AlphaDescriptor::Stream { .. })
    }
}

/// Two series agree on all exponents `<= bound` (both must know that
/// range).
fn agrees_up_to(a: &HahnSeries, b: &HahnSeries, bound: &Rat) -> bool {
    let just_above = bound + rat_int(0); // inclusive comparison below
    let mut exps: Vec<Rat> = a
        .support()
        .into_iter()
        .chain(b.support())
        .filter(|e| e <= &just_above)
        .collect();
    exps.sort();
    exps.dedup();
    for e in exps {
        if a.coeff_at(&e) != b.coeff_at(&e) {
            return false;
        }
    }
    true
}

fn rule_field(rule: &StreamRule) -> Arc<CycloField> {
    match rule {
        StreamRule::Integers { coeff } | StreamRule::GeometricGap { coeff } => {
            coeff.field().clone()
        }
        StreamRule::Finite { terms } => terms
            .first()
            .map(|(_, c)| c.field().clone())
            .unwrap_or_else(CycloField::rationals),
        StreamRule::PlusConstant { constant, .. } => constant.field().clone(),
    }
}

/// A classified maximal subalgebra of `k[t, 1/t, y]` (or its
/// restriction to `k[t, y]`).
#[derive(Debug, Clone)]
pub enum SubalgebraDescriptor {
    /// Case normalized by an automorphism: `f` belongs iff the
    /// automorphism image has nonnegative valuation at `alpha`.
    Psi {
        auto: Automorphism,
        alpha: AlphaDescriptor,
    },
    /// The algebras containing `k[t, 1/t]`: pinned by a unit series
    /// `alpha(u)` in `u = 1/y` with `nu = 0`, nonzero constant term
    /// and support strictly larger than `{0}`.
    Units { alpha: AlphaDescriptor },
    /// Intersection with the polynomial ring `k[t, y]`.
    Poly(Box<SubalgebraDescriptor>),
}

impl SubalgebraDescriptor {
    pub fn psi(auto: Automorphism, alpha: AlphaDescriptor) -> Self {
        SubalgebraDescriptor::Psi { auto, alpha }
    }

    pub fn units(alpha: AlphaDescriptor) -> Result<Self, MaxsubError> {
        // nu(alpha) = 0 with a unit constant term, and at least one
        // more term.
        let probe = alpha.prefix_below(&rat_int(3))?;
        let constant = probe.coeff_at(&Rat::zero());
        if constant.is_zero() {
            return Err(MaxsubError::InvalidDescriptor(
                "unit-case series needs a nonzero constant term".into(),
            ));
        }
        let beyond = probe
            .support()
            .into_iter()
            .any(|e| e > Rat::zero());
        let open_ended = !probe.is_exact();
        if !beyond && !open_ended {
            return Err(MaxsubError::InvalidDescriptor(
                "unit-case series must have support strictly larger than {0}".into(),
            ));
        }
        Ok(SubalgebraDescriptor::Units { alpha })
    }

    /// Restrict to `k[t, y]`.
    pub fn poly_restriction(inner: SubalgebraDescriptor) -> Result<Self, MaxsubError> {
        if matches!(inner, SubalgebraDescriptor::Poly(_)) {
            return Err(MaxsubError::InvalidDescriptor(
                "polynomial restriction cannot be nested".into(),
            ));
        }
        Ok(SubalgebraDescriptor::Poly(Box::new(inner)))
    }

    pub fn field(&self) -> Arc<CycloField> {
        match self {
            SubalgebraDescriptor::Psi { alpha, .. } => alpha.field(),
            SubalgebraDescriptor::Units { alpha } => alpha.field(),
            SubalgebraDescriptor::Poly(inner) => inner.field(),
        }
    }
}

/// Outcome of a membership query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipVerdict {
    In,
    NotIn,
    /// In the conductor ideal (hence in the subalgebra).
    InConductor,
    /// The precision cap was reached before the answer was certified.
    Undetermined,
}

impl MembershipVerdict {
    pub fn is_in(&self) -> bool {
        matches!(self, MembershipVerdict::In | MembershipVerdict::InConductor)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            MembershipVerdict::In => "In",
            MembershipVerdict::NotIn => "NotIn",
            MembershipVerdict::InConductor => "InConductor",
            MembershipVerdict::Undetermined => "Undetermined",
        }
    }
}

/// A character of `Q/Z` with values in the roots of unity of the
/// coefficient field, restricted to `(1/N)Z/Z`: `chi(1/N) = value`.
#[derive(Debug, Clone)]
pub struct Character {
    pub modulus: u64,
    pub value: FieldElem,
}

impl Character {
    pub fn identity(field: &Arc<CycloField>) -> Self {
        Character {
            modulus: 1,
            value: FieldElem::one(field),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.value.is_one()
    }

    /// `chi(s)` for an exponent with denominator dividing the modulus.
    pub fn eval(&self, s: &Rat) -> FieldElem {
        let n = self.modulus;
        let scaled = s * rat_int(n as i64);
        debug_assert!(scaled.denom() == &num_bigint::BigInt::from(1));
        let e = num_integer::Integer::mod_floor(
            &scaled.numer().clone(),
            &num_bigint::BigInt::from(n),
        );
        let e: u64 = num_traits::ToPrimitive::to_u64(&e).unwrap();
        self.value.pow(e)
    }

    /// Act termwise on a series: `a_s t^s -> chi(s) a_s t^s`.
    pub fn twist_series(&self, s: &HahnSeries) -> HahnSeries {
        let field = self.value.field();
        let terms = s
            .terms()
            .iter()
            .map(|(e, c)| {
                let c = if c.field().conductor() == field.conductor() {
                    c.clone()
                } else {
                    c.embed(field)
                };
                (e.clone(), c.mul(&self.eval(e)))
            })
            .collect();
        let mut out = HahnSeries::from_terms(field, terms);
        if let Bound::Finite(b) = s.known_below() {
            out = out.with_precision(Bound::Finite(b.clone()));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// JSON document form
// ---------------------------------------------------------------------------

/// Wire form of a subalgebra descriptor, e.g.
/// `{"case":"psi","swap":false,"twist":0,"alpha":{"kind":"finite","series":"t^(1/2)"}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum DescriptorDoc {
    Psi {
        #[serde(default)]
        swap: bool,
        #[serde(default)]
        twist: i64,
        alpha: AlphaDoc,
    },
    Units {
        alpha: AlphaDoc,
    },
    Poly {
        inner: Box<DescriptorDoc>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaDoc {
    Finite {
        series: String,
    },
    Algebraic {
        minpoly: String,
        branch: String,
    },
    Stream {
        rule: String,
        #[serde(default)]
        params: StreamParams,
        #[serde(default)]
        transcendental: Option<bool>,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct StreamParams {
    /// Coefficient of every generated term (field element text).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<String>,
    /// Constant added at exponent zero.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    /// Terms of a finite rule: `[exponent, coefficient]` pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<[String; 2]>>,
}

impl AlphaDoc {
    /// Build the descriptor; `var` is the series variable (`t` for the
    /// automorphism case, `u` for the unit case).
    pub fn build(&self, var: &str, field: &Arc<CycloField>) -> Result<AlphaDescriptor, MaxsubError> {
        match self {
            AlphaDoc::Finite { series } => {
                let s = parse_series(series, var, field)?;
                AlphaDescriptor::finite(s)
            }
            AlphaDoc::Algebraic { minpoly, branch } => {
                let m = parse_laurent(minpoly, var, "y", field)?;
                let hint = parse_series(branch, var, field)?;
                AlphaDescriptor::algebraic(&m, &hint)
            }
            AlphaDoc::Stream {
                rule,
                params,
                transcendental,
            } => {
                let coeff = match &params.coeff {
                    Some(text) => parse_field_elem(text, field)?,
                    None => FieldElem::one(field),
                };
                let base = match rule.as_str() {
                    "integers" => StreamRule::Integers { coeff },
                    "geometric_gap" => StreamRule::GeometricGap { coeff },
                    "finite" => {
                        let mut terms = Vec::new();
                        for pair in params.terms.clone().unwrap_or_default() {
                            let e = rat_from_str(&pair[0]).ok_or_else(|| {
                                MaxsubError::InvalidDescriptor(format!(
                                    "bad exponent `{}` in finite stream",
                                    pair[0]
                                ))
                            })?;
                            terms.push((e, parse_field_elem(&pair[1], field)?));
                        }
                        terms.sort_by(|a, b| a.0.cmp(&b.0));
                        StreamRule::Finite { terms }
                    }
                    other => {
                        return Err(MaxsubError::InvalidDescriptor(format!(
                            "unknown stream rule `{}`",
                            other
                        )))
                    }
                };
                let rule = match &params.constant {
                    Some(text) => StreamRule::PlusConstant {
                        constant: parse_field_elem(text, field)?,
                        rest: Box::new(base),
                    },
                    None => base,
                };
                // geometric_gap has unbounded exponent denominators, so
                // transcendence over k(t) is certified by construction.
                fn unbounded_denominators(rule: &StreamRule) -> bool {
                    match rule {
                        StreamRule::GeometricGap { .. } => true,
                        StreamRule::PlusConstant { rest, .. } => unbounded_denominators(rest),
                        _ => false,
                    }
                }
                let default_flag = unbounded_denominators(&rule);
                Ok(AlphaDescriptor::stream(
                    rule,
                    transcendental.unwrap_or(default_flag),
                ))
            }
        }
    }
}

impl DescriptorDoc {
    pub fn from_json(text: &str) -> Result<Self, MaxsubError> {
        serde_json::from_str(text)
            .map_err(|e| MaxsubError::InvalidDescriptor(format!("bad descriptor document: {e}")))
    }

    pub fn build(&self, field: &Arc<CycloField>) -> Result<SubalgebraDescriptor, MaxsubError> {
        match self {
            DescriptorDoc::Psi { swap, twist, alpha } => Ok(SubalgebraDescriptor::psi(
                Automorphism {
                    swap_t: *swap,
                    twist: *twist,
                },
                alpha.build("t", field)?,
            )),
            DescriptorDoc::Units { alpha } => {
                SubalgebraDescriptor::units(alpha.build("u", field)?)
            }
            DescriptorDoc::Poly { inner } => {
                SubalgebraDescriptor::poly_restriction(inner.build(field)?)
            }
        }
    }
}

/// Serialize a descriptor back to its document form (streams keep
/// their defining rule).
pub(crate) fn alpha_to_doc(alpha: &AlphaDescriptor, var: &str) -> AlphaDoc {
    match alpha {
        AlphaDescriptor::Finite(s) => AlphaDoc::Finite {
            series: s.render(var),
        },
        AlphaDescriptor::Algebraic {
            minpoly, prefix, ..
        } => AlphaDoc::Algebraic {
            minpoly: minpoly.render(var, "y"),
            branch: prefix.render(var),
        },
        AlphaDescriptor::Stream {
            rule,
            transcendental,
        } => {
            let (name, params) = rule_to_doc(rule);
            AlphaDoc::Stream {
                rule: name,
                params,
                transcendental: Some(*transcendental),
            }
        }
    }
}

fn rule_to_doc(rule: &StreamRule) -> (String, StreamParams) {
    match rule {
        StreamRule::Integers { coeff } => (
            "integers".into(),
            StreamParams {
                coeff: Some(coeff.to_string()),
                ..Default::default()
            },
        ),
        StreamRule::GeometricGap { coeff } => (
            "geometric_gap".into(),
            StreamParams {
                coeff: Some(coeff.to_string()),
                ..Default::default()
            },
        ),
        StreamRule::Finite { terms } => (
            "finite".into(),
            StreamParams {
                terms: Some(
                    terms
                        .iter()
                        .map(|(e, c)| [rat_to_string(e), c.to_string()])
                        .collect(),
                ),
                ..Default::default()
            },
        ),
        StreamRule::PlusConstant { constant, rest } => {
            let (name, mut params) = rule_to_doc(rest);
            params.constant = Some(constant.to_string());
            (name, params)
        }
    }
}

pub(crate) fn descriptor_to_doc(d: &SubalgebraDescriptor) -> DescriptorDoc {
    match d {
        SubalgebraDescriptor::Psi { auto, alpha } => DescriptorDoc::Psi {
            swap: auto.swap_t,
            twist: auto.twist,
            alpha: alpha_to_doc(alpha, "t"),
        },
        SubalgebraDescriptor::Units { alpha } => DescriptorDoc::Units {
            alpha: alpha_to_doc(alpha, "u"),
        },
        SubalgebraDescriptor::Poly(inner) => DescriptorDoc::Poly {
            inner: Box::new(descriptor_to_doc(inner)),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn q() -> Arc<CycloField> {
        CycloField::rationals()
    }

    #[test]
    fn finite_descriptor_rejects_negative_valuation() {
        let s = HahnSeries::monomial(rat(-1, 2), FieldElem::one(&q()));
        assert!(AlphaDescriptor::finite(s).is_err());
        let ok = HahnSeries::monomial(rat(1, 2), FieldElem::one(&q()));
        assert!(AlphaDescriptor::finite(ok).is_ok());
    }

    #[test]
    fn algebraic_descriptor_picks_unique_branch() {
        let f = q();
        let m = parse_laurent("y^2 - t", "t", "y", &f).unwrap();
        let hint = parse_series("t^(1/2)", "t", &f).unwrap();
        let d = AlphaDescriptor::algebraic(&m, &hint).unwrap();
        match &d {
            AlphaDescriptor::Algebraic { separation, .. } => {
                assert_eq!(separation, &rat(1, 2));
            }
            _ => panic!("expected algebraic"),
        }
        // extending the prefix
        let deep = d.prefix_below(&rat_int(6)).unwrap();
        assert_eq!(deep.coeff_at(&rat(1, 2)), FieldElem::one(&f));
        // ambiguous hint: zero prefix does not separate the branches
        let bad = AlphaDescriptor::algebraic(&m, &HahnSeries::zero(&f));
        assert!(bad.is_err());
    }

    use crate::rat::rat_int;

    #[test]
    fn units_descriptor_validation() {
        let f = q();
        let one_plus_u = parse_series("1 + u", "u", &f).unwrap();
        assert!(SubalgebraDescriptor::units(AlphaDescriptor::finite(one_plus_u).unwrap()).is_ok());
        // constant-only support fails the N-condition
        let constant = parse_series("1", "u", &f).unwrap();
        assert!(
            SubalgebraDescriptor::units(AlphaDescriptor::finite(constant).unwrap()).is_err()
        );
        // zero constant term fails (lambda must be a unit)
        let no_const = parse_series("u", "u", &f).unwrap();
        assert!(
            SubalgebraDescriptor::units(AlphaDescriptor::finite(no_const).unwrap()).is_err()
        );
    }

    #[test]
    fn descriptor_document_round_trip() {
        let f = q();
        let text = r#"{"case":"psi","swap":false,"twist":0,"alpha":{"kind":"finite","series":"t^(1/2)"}}"#;
        let doc = DescriptorDoc::from_json(text).unwrap();
        let d = doc.build(&f).unwrap();
        let back = descriptor_to_doc(&d);
        let json = serde_json::to_string(&back).unwrap();
        let doc2 = DescriptorDoc::from_json(&json).unwrap();
        let d2 = doc2.build(&f).unwrap();
        match (&d, &d2) {
            (
                SubalgebraDescriptor::Psi { alpha: a1, .. },
                SubalgebraDescriptor::Psi { alpha: a2, .. },
            ) => match (a1, a2) {
                (AlphaDescriptor::Finite(s1), AlphaDescriptor::Finite(s2)) => {
                    assert_eq!(s1, s2)
                }
                _ => panic!("expected finite alphas"),
            },
            _ => panic!("expected psi descriptors"),
        }
    }

    #[test]
    fn stream_doc_defaults_transcendence_for_geometric_gap() {
        let f = q();
        let text = r#"{"case":"psi","alpha":{"kind":"stream","rule":"geometric_gap"}}"#;
        let d = DescriptorDoc::from_json(text).unwrap().build(&f).unwrap();
        match d {
            SubalgebraDescriptor::Psi {
                alpha: AlphaDescriptor::Stream { transcendental, .. },
                ..
            } => assert!(transcendental),
            _ => panic!("expected stream"),
        }
        let text = r#"{"case":"psi","alpha":{"kind":"stream","rule":"integers"}}"#;
        let d = DescriptorDoc::from_json(text).unwrap().build(&f).unwrap();
        match d {
            SubalgebraDescriptor::Psi {
                alpha: AlphaDescriptor::Stream { transcendental, .. },
                ..
            } => assert!(!transcendental),
            _ => panic!("expected stream"),
        }
    }

    #[test]
    fn character_twist_preserves_support() {
        let f4 = CycloField::new(4);
        let chi = Character {
            modulus: 4,
            value: FieldElem::generator(&f4),
        };
        let s = parse_series("t^(1/4) + 2*t^(1/2) + t", "t", &f4).unwrap();
        let twisted = chi.twist_series(&s);
        assert_eq!(twisted.support(), s.support());
        // chi(1/4) = i, chi(1/2) = i^2 = -1, chi(1) = 1
        assert_eq!(twisted.coeff_at(&rat(1, 4)), FieldElem::generator(&f4));
        assert_eq!(twisted.coeff_at(&rat(1, 2)), FieldElem::from_int(&f4, -2));
        assert_eq!(twisted.coeff_at(&rat_int(1)), FieldElem::one(&f4));
    }
}
