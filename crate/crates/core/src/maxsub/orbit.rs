//! Orbit equivalence of descriptors under the exponent-twisting
//! character group.
//!
//! Two series pin the same subalgebra exactly when one is obtained
//! from the other by `a_s t^s -> chi(s) a_s t^s` for a character
//! `chi` of `Q/Z` into the roots of unity. On the compared support
//! the constraint system is finite: with `N` the lcm of the exponent
//! denominators, `chi` is determined by `zeta = chi(1/N)` and each
//! support point `s` demands `zeta^(N s mod N) = a'_s / a_s`.

use super::descriptor::{AlphaDescriptor, Character};
use super::generators::monic_normal_form;
use super::MaxsubError;
use crate::field::{CycloField, FieldElem};
use crate::hahn::{Bound, HahnSeries};
use crate::rat::{denominator_lcm, rat_int, Rat};
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::sync::Arc;

/// Result of the orbit test. `exact` is false when a stream-backed
/// descriptor forced a comparison bounded by the precision cap.
#[derive(Debug, Clone)]
pub struct OrbitOutcome {
    pub character: Option<Character>,
    pub exact: bool,
}

/// Decide whether two descriptors lie in the same character orbit.
///
/// Finite and algebraic descriptors give exact answers: finite pairs
/// are compared on their full supports, algebraic pairs must share a
/// minimal polynomial and are compared beyond its separation bound
/// (two roots of the same polynomial agreeing there are equal).
/// Stream comparisons are exact up to the cap and flagged as such.
pub fn orbit_equivalent(
    a: &AlphaDescriptor,
    b: &AlphaDescriptor,
    cap: &Rat,
) -> Result<OrbitOutcome, MaxsubError> {
    use AlphaDescriptor::*;
    let exact = a.is_algebraic() && b.is_algebraic();
    // Algebraic pairs in the same orbit share a minimal polynomial
    // (the twist fixes k[t]); different minimal polynomials decide
    // inequivalence immediately.
    if let (
        Algebraic {
            minpoly: ma,
            separation: sa,
            ..
        },
        Algebraic {
            minpoly: mb,
            separation: sb,
            ..
        },
    ) = (a, b)
    {
        if monic_normal_form(ma) != monic_normal_form(mb) {
            return Ok(OrbitOutcome {
                character: None,
                exact: true,
            });
        }
        let bound = sa.clone().max(sb.clone()) + rat_int(1);
        let pa = a.prefix_below(&bound)?;
        let pb = b.prefix_below(&bound)?;
        return Ok(OrbitOutcome {
            character: solve_character(&pa, &pb),
            exact: true,
        });
    }
    let bound = comparison_bound(a, b, cap)?;
    let pa = a.prefix_below(&bound)?;
    let pb = b.prefix_below(&bound)?;
    // Mixed finite/inexact pairs: a finite series cannot match a
    // series with certified further support.
    let character = solve_character(&pa, &pb);
    Ok(OrbitOutcome { character, exact })
}

fn comparison_bound(
    a: &AlphaDescriptor,
    b: &AlphaDescriptor,
    cap: &Rat,
) -> Result<Rat, MaxsubError> {
    let mut bound = rat_int(2);
    for d in [a, b] {
        match d {
            AlphaDescriptor::Finite(s) => {
                if let Some((e, _)) = s.terms().last() {
                    bound = bound.max(e + rat_int(1));
                }
            }
            AlphaDescriptor::Algebraic { separation, .. } => {
                bound = bound.max(separation + rat_int(1));
            }
            AlphaDescriptor::Stream { .. } => {
                bound = bound.max(cap.clone());
            }
        }
    }
    Ok(bound.min(cap.clone()).max(rat_int(2)))
}

/// Solve for a character carrying `a` to `b` on the known prefixes.
fn solve_character(a: &HahnSeries, b: &HahnSeries) -> Option<Character> {
    // supports must agree on the jointly known range
    let known = a.known_below().clone().min(b.known_below().clone());
    let in_range = |e: &Rat| match &known {
        Bound::Finite(k) => e < k,
        Bound::Infinite => true,
    };
    let sa: Vec<Rat> = a.support().into_iter().filter(|e| in_range(e)).collect();
    let sb: Vec<Rat> = b.support().into_iter().filter(|e| in_range(e)).collect();
    if sa != sb {
        return None;
    }
    let field = a.field();
    if sa.is_empty() {
        return Some(Character::identity(field));
    }
    let n = denominator_lcm(sa.iter()).to_u64()?;
    // Work where the N-th roots of unity exist exactly.
    let big = if field.conductor() % n == 0 {
        field.clone()
    } else {
        CycloField::new(field.conductor().lcm(&n))
    };
    let zeta_n = crate::field::root_of_unity(n, &big).expect("n divides the conductor");
    let embed = |c: &FieldElem| {
        if c.field().conductor() == big.conductor() {
            c.clone()
        } else {
            c.embed(&big)
        }
    };
    // candidate zeta = zeta_n^j satisfying every constraint
    'candidates: for j in 0..n {
        let zeta = zeta_n.pow(j);
        for s in &sa {
            let e = (s * rat_int(n as i64)).numer().clone();
            let e = e.mod_floor(&num_bigint::BigInt::from(n)).to_u64().unwrap();
            let lhs = embed(&a.coeff_at(s)).mul(&zeta.pow(e));
            if lhs != embed(&b.coeff_at(s)) {
                continue 'candidates;
            }
        }
        // report in the smallest field that holds the value
        let value = zeta.contract(field).unwrap_or(zeta);
        return Some(Character { modulus: n, value });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hahn::{default_cap, StreamRule};
    use crate::parse::{parse_laurent, parse_series};

    fn q() -> Arc<CycloField> {
        CycloField::rationals()
    }

    fn fin(text: &str) -> AlphaDescriptor {
        AlphaDescriptor::finite(parse_series(text, "t", &q()).unwrap()).unwrap()
    }

    #[test]
    fn conjugate_square_roots_are_equivalent() {
        let cap = default_cap();
        let out = orbit_equivalent(&fin("t^(1/2)"), &fin("-t^(1/2)"), &cap).unwrap();
        assert!(out.exact);
        let chi = out.character.expect("equivalent");
        assert_eq!(chi.modulus, 2);
        assert_eq!(chi.value, FieldElem::from_int(&q(), -1));
        // exact order 2
        assert_eq!(chi.value.order_dividing(2), Some(2));
    }

    #[test]
    fn different_supports_are_inequivalent() {
        let cap = default_cap();
        let out = orbit_equivalent(&fin("t^(1/2)"), &fin("t^(1/3)"), &cap).unwrap();
        assert!(out.character.is_none());
        assert!(out.exact);
    }

    #[test]
    fn inconsistent_ratios_are_inequivalent() {
        let cap = default_cap();
        // chi(1) = 1 is forced, but the ratio at s = 1 is 2
        let out = orbit_equivalent(&fin("t^(1/2) + t"), &fin("t^(1/2) + 2*t"), &cap).unwrap();
        assert!(out.character.is_none());
        assert!(out.exact);
    }

    #[test]
    fn reflexive_with_identity_character() {
        let cap = default_cap();
        for text in ["t^(1/2)", "t + t^2", "0", "1/2*t^(1/3) + t"] {
            let out = orbit_equivalent(&fin(text), &fin(text), &cap).unwrap();
            let chi = out.character.expect("self-equivalent");
            assert!(chi.is_identity(), "{}", text);
        }
    }

    #[test]
    fn symmetric_on_samples() {
        let cap = default_cap();
        let pairs = [
            ("t^(1/2)", "-t^(1/2)"),
            ("t^(1/2)", "t^(1/3)"),
            ("t^(1/2) + t", "t^(1/2) + 2*t"),
            ("t^(1/4) + t^(1/2)", "t^(1/4) + t^(1/2)"),
        ];
        for (x, y) in pairs {
            let ab = orbit_equivalent(&fin(x), &fin(y), &cap).unwrap();
            let ba = orbit_equivalent(&fin(y), &fin(x), &cap).unwrap();
            assert_eq!(ab.character.is_some(), ba.character.is_some());
        }
    }

    #[test]
    fn quarter_exponent_needs_fourth_root() {
        let cap = default_cap();
        // t^(1/4) vs i * t^(1/4) over Q(zeta_4)
        let f4 = CycloField::new(4);
        let a = AlphaDescriptor::finite(parse_series("t^(1/4)", "t", &f4).unwrap()).unwrap();
        let i = FieldElem::generator(&f4);
        let b = AlphaDescriptor::finite(HahnSeries::monomial(
            crate::rat::rat(1, 4),
            i.clone(),
        ))
        .unwrap();
        let out = orbit_equivalent(&a, &b, &cap).unwrap();
        let chi = out.character.expect("equivalent by chi(1/4) = i");
        assert_eq!(chi.modulus, 4);
        assert_eq!(chi.value, i);
        // twisting a by chi reproduces b
        let twisted = chi.twist_series(&a.prefix_below(&rat_int(2)).unwrap());
        assert_eq!(
            twisted.coeff_at(&crate::rat::rat(1, 4)),
            i
        );
    }

    #[test]
    fn rational_coefficient_pair_solved_in_extension() {
        let cap = default_cap();
        // t^(1/4) and -t^(1/4) over plain Q: the character takes the
        // value -1 = chi(1/4), which exists already in Q.
        let out = orbit_equivalent(&fin("t^(1/4)"), &fin("-t^(1/4)"), &cap).unwrap();
        let chi = out.character.expect("equivalent");
        assert_eq!(chi.modulus, 4);
        assert_eq!(chi.value, FieldElem::from_int(&q(), -1));
    }

    #[test]
    fn algebraic_pair_equivalence() {
        let cap = default_cap();
        let f = q();
        let m = parse_laurent("y^2 - t", "t", "y", &f).unwrap();
        let plus =
            AlphaDescriptor::algebraic(&m, &parse_series("t^(1/2)", "t", &f).unwrap()).unwrap();
        let minus =
            AlphaDescriptor::algebraic(&m, &parse_series("-t^(1/2)", "t", &f).unwrap()).unwrap();
        let out = orbit_equivalent(&plus, &minus, &cap).unwrap();
        assert!(out.exact);
        assert_eq!(out.character.unwrap().modulus, 2);
        // different minimal polynomials: inequivalent
        let m2 = parse_laurent("y^2 - t^3", "t", "y", &f).unwrap();
        let other =
            AlphaDescriptor::algebraic(&m2, &parse_series("t^(3/2)", "t", &f).unwrap()).unwrap();
        let out = orbit_equivalent(&plus, &other, &cap).unwrap();
        assert!(out.character.is_none());
    }

    #[test]
    fn stream_comparison_is_flagged_inexact() {
        let cap = rat_int(16);
        let a = AlphaDescriptor::stream(
            StreamRule::GeometricGap {
                coeff: FieldElem::one(&q()),
            },
            true,
        );
        let b = AlphaDescriptor::stream(
            StreamRule::GeometricGap {
                coeff: FieldElem::from_int(&q(), -1),
            },
            true,
        );
        let out = orbit_equivalent(&a, &b, &cap).unwrap();
        assert!(!out.exact);
        // coefficients differ by -1 at every compared point; all the
        // exponents i + 2^-i generate characters consistent with -1?
        // chi must satisfy zeta^(N s mod N) = -1 for each compared s;
        // a solution exists on the compared range, but it is only
        // up-to-cap.
        assert!(out.character.is_some());
        // identical streams: identity character, still inexact
        let out = orbit_equivalent(&a, &a, &cap).unwrap();
        assert!(out.character.unwrap().is_identity());
        assert!(!out.exact);
    }

    use crate::rat::rat_int;

    #[test]
    fn finite_vs_extending_algebraic_detects_difference() {
        let cap = default_cap();
        let f = q();
        // sqrt(t^2 + t^3) has infinite support; t as finite series
        // shares the prefix below 2 but differs at 2.
        let m = parse_laurent("y^2 - t^2 - t^3", "t", "y", &f).unwrap();
        let branch =
            AlphaDescriptor::algebraic(&m, &parse_series("t + 1/2*t^2", "t", &f).unwrap())
                .unwrap();
        let plain = fin("t");
        let out = orbit_equivalent(&plain, &branch, &cap).unwrap();
        assert!(out.character.is_none());
    }
}
