//! Newton polygons and Newton–Puiseux expansion of the roots of
//! `P(t, y)` as series in rational powers of `t`.
//!
//! The iteration is the classical one: read candidate leading
//! exponents off the lower hull of the support, split leading
//! coefficients with the exact root finder, substitute `y = c t^s +
//! y'` and recurse. Ramification is plain exponent bookkeeping since
//! all series arithmetic is exact over rational exponents.

use crate::field::{find_roots, CycloField, FieldElem, FPoly};
use crate::hahn::{Bound, HahnSeries};
use crate::laurent::LaurentPoly;
use crate::rat::{denominator_lcm, Rat};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum PuiseuxError {
    #[error("expansion of the zero polynomial")]
    ZeroInput,
    #[error("splitting incomplete over the configured field; residual {residual}")]
    IncompleteSplitting { residual: String },
    #[error("separation requires at least two branches")]
    SingleBranch,
}

/// The lower hull of a bivariate support, with edge data.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon {
    /// Hull vertices `(y_degree, t_order)`, by decreasing y-degree.
    pub vertices: Vec<(u32, Rat)>,
    /// Edges in order of strictly increasing slope.
    pub edges: Vec<PolygonEdge>,
}

/// One hull edge; `slope` is the candidate valuation of the roots it
/// contributes: `(ord_low - ord_high) / (y_high - y_low)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonEdge {
    pub y_high: u32,
    pub y_low: u32,
    pub ord_high: Rat,
    pub ord_low: Rat,
    pub slope: Rat,
}

/// A root expansion: a series prefix with precision, the multiplicity
/// of the underlying root, and the ramification bound of the prefix
/// exponents.
#[derive(Debug, Clone)]
pub struct PuiseuxBranch {
    pub expansion: HahnSeries,
    pub multiplicity: usize,
    pub ramification: u64,
}

impl PuiseuxBranch {
    pub fn field(&self) -> &Arc<CycloField> {
        self.expansion.field()
    }
}

/// Newton polygon of `P` viewed as a polynomial in `y` over series in
/// `t`.
pub fn newton_polygon(p: &LaurentPoly) -> Result<NewtonPolygon, PuiseuxError> {
    if p.is_zero() {
        return Err(PuiseuxError::ZeroInput);
    }
    polygon_of_coeffs(&p.to_series_coeffs()).ok_or(PuiseuxError::ZeroInput)
}

fn polygon_of_coeffs(coeffs: &[HahnSeries]) -> Option<NewtonPolygon> {
    let mut points: Vec<(u32, Rat)> = Vec::new();
    for (j, c) in coeffs.iter().enumerate() {
        if let Ok(v) = c.valuation() {
            points.push((j as u32, v));
        }
    }
    if points.is_empty() {
        return None;
    }
    // monotone chain, ascending y-degree, keeping the lower hull
    let mut hull: Vec<(u32, Rat)> = Vec::new();
    for p in points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2].clone();
            let b = hull[hull.len() - 1].clone();
            // pop b unless it lies strictly below the chord a-p
            let lhs = Rat::from_integer(BigInt::from(b.0 - a.0)) * (&p.1 - &a.1);
            let rhs = (&b.1 - &a.1) * Rat::from_integer(BigInt::from(p.0 - a.0));
            if lhs - rhs <= Rat::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.reverse(); // descending y-degree
    let edges = hull
        .windows(2)
        .map(|w| {
            let (jh, vh) = &w[0];
            let (jl, vl) = &w[1];
            PolygonEdge {
                y_high: *jh,
                y_low: *jl,
                ord_high: vh.clone(),
                ord_low: vl.clone(),
                slope: (vl - vh) / Rat::from_integer(BigInt::from(jh - jl)),
            }
        })
        .collect();
    Some(NewtonPolygon {
        vertices: hull,
        edges,
    })
}

/// Expand all roots of `P` in the Puiseux field over the coefficient
/// field, to the requested precision. The sum of multiplicities
/// equals `deg_y P` whenever every leading-coefficient splitting
/// succeeds in the field; otherwise `IncompleteSplitting` reports the
/// offending residual.
pub fn puiseux_expand(
    p: &LaurentPoly,
    precision: &Rat,
) -> Result<Vec<PuiseuxBranch>, PuiseuxError> {
    if p.is_zero() {
        return Err(PuiseuxError::ZeroInput);
    }
    let field = p.field().clone();
    // Clearing a power of t does not change the roots in y.
    let cleared = match p.t_range() {
        Some((lo, _)) if lo < 0 => p.mul_t_pow(-lo),
        _ => p.clone(),
    };
    if cleared.y_degree().unwrap_or(0) == 0 {
        return Ok(vec![]);
    }
    let parts = squarefree_parts(&cleared);
    let mut branches = Vec::new();
    for (part, mult) in parts {
        let coeffs: Vec<HahnSeries> = part.iter().map(poly_to_series).collect();
        let mut prefixes = Vec::new();
        expand_worker(
            &coeffs,
            &HahnSeries::zero(&field),
            None,
            precision,
            &coeffs,
            &mut prefixes,
        )?;
        for expansion in prefixes {
            let mut denoms: Vec<Rat> = expansion.support();
            if let Bound::Finite(b) = expansion.known_below() {
                denoms.push(b.clone());
            }
            let ramification = denominator_lcm(denoms.iter()).to_u64().unwrap_or(u64::MAX);
            branches.push(PuiseuxBranch {
                expansion,
                multiplicity: mult,
                ramification,
            });
        }
    }
    branches.sort_by(|a, b| {
        let ka = a.expansion.render("t");
        let kb = b.expansion.render("t");
        a.expansion
            .valuation()
            .ok()
            .cmp(&b.expansion.valuation().ok())
            .then(ka.cmp(&kb))
    });
    Ok(branches)
}

/// The exactness bound of a branch family: the largest pairwise
/// `nu(a_i - a_j)`. Expansions carried beyond this exponent
/// distinguish all branches.
pub fn separation_precision(branches: &[PuiseuxBranch]) -> Result<Rat, PuiseuxError> {
    if branches.len() < 2 {
        return Err(PuiseuxError::SingleBranch);
    }
    let mut best: Option<Rat> = None;
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            let diff = branches[i].expansion.sub(&branches[j].expansion);
            let v = diff
                .valuation()
                .expect("distinct branches differ within their known prefixes");
            best = Some(match best {
                None => v,
                Some(b) => b.max(v),
            });
        }
    }
    Ok(best.unwrap())
}

fn expand_worker(
    coeffs: &[HahnSeries],
    prefix: &HahnSeries,
    s_min: Option<&Rat>,
    precision: &Rat,
    original: &[HahnSeries],
    out: &mut Vec<HahnSeries>,
) -> Result<(), PuiseuxError> {
    let field = prefix.field().clone();
    let mut working: &[HahnSeries] = coeffs;
    // y = 0 root here: the prefix is an exact root of the original part.
    if !working.is_empty() && working[0].is_exact_zero() {
        out.push(prefix.clone());
        working = &working[1..];
    }
    if working.len() <= 1 {
        return Ok(());
    }
    let polygon = match polygon_of_coeffs(working) {
        Some(p) => p,
        None => return Ok(()),
    };
    for edge in &polygon.edges {
        if let Some(min) = s_min {
            if edge.slope <= *min {
                continue;
            }
        }
        let phi = edge_char_poly(working, edge, &field);
        let roots = find_roots(&phi);
        let found: usize = roots.iter().map(|(_, m)| m).sum();
        if found < phi.degree().unwrap_or(0) {
            return Err(PuiseuxError::IncompleteSplitting {
                residual: render_fpoly(&phi),
            });
        }
        for (c, _mult) in roots {
            let s = edge.slope.clone();
            let new_prefix = prefix.add(&HahnSeries::monomial(s.clone(), c.clone()));
            let substituted = substitute_shift(working, &c, &s, &field);
            // An exact root (residual zero) is emitted by the
            // recursion's own zero-root handling, so multiple roots
            // sharing this prefix are still pursued.
            let residual = eval_series_poly(original, &new_prefix);
            let deep_enough = residual
                .valuation()
                .map(|v| v > *precision)
                .unwrap_or(false);
            if deep_enough {
                // Stop when exactly one root continues along this
                // prefix: the residual polynomial has a unique
                // width-one edge above s. Otherwise keep splitting.
                let next = polygon_of_coeffs(&substituted);
                if let Some(np) = next {
                    let above: Vec<&PolygonEdge> =
                        np.edges.iter().filter(|e| e.slope > s).collect();
                    let width: u32 = above.iter().map(|e| e.y_high - e.y_low).sum();
                    if width == 1 {
                        let ns = above[0].slope.clone();
                        out.push(new_prefix.with_precision(Bound::Finite(ns)));
                        continue;
                    }
                }
            }
            expand_worker(
                &substituted,
                &new_prefix,
                Some(&s),
                precision,
                original,
                out,
            )?;
        }
    }
    Ok(())
}

/// The characteristic polynomial of a polygon edge: coefficients read
/// on the edge line.
fn edge_char_poly(coeffs: &[HahnSeries], edge: &PolygonEdge, field: &Arc<CycloField>) -> FPoly {
    let mut phi = Vec::with_capacity((edge.y_high - edge.y_low + 1) as usize);
    for j in edge.y_low..=edge.y_high {
        let line =
            &edge.ord_high + &edge.slope * Rat::from_integer(BigInt::from(edge.y_high - j));
        phi.push(coeffs[j as usize].coeff_at(&line));
    }
    FPoly::new(field, phi)
}

/// Substitute `y := c t^s + y'` into a y-polynomial with series
/// coefficients (binomial expansion, exact).
fn substitute_shift(
    coeffs: &[HahnSeries],
    c: &FieldElem,
    s: &Rat,
    field: &Arc<CycloField>,
) -> Vec<HahnSeries> {
    let n = coeffs.len();
    let shift = HahnSeries::monomial(s.clone(), c.clone());
    let mut shift_pows: Vec<HahnSeries> = vec![HahnSeries::one(field)];
    for _ in 1..n {
        shift_pows.push(shift_pows.last().unwrap().mul(&shift));
    }
    let mut out = vec![HahnSeries::zero(field); n];
    for (j, cj) in coeffs.iter().enumerate() {
        if cj.is_exact_zero() {
            continue;
        }
        let mut binom = BigInt::from(1u32);
        for i in 0..=j {
            if i > 0 {
                binom = &binom * BigInt::from((j - i + 1) as u64) / BigInt::from(i as u64);
            }
            let term = cj
                .mul(&shift_pows[j - i])
                .scale(&FieldElem::from_rat(field, Rat::from_integer(binom.clone())));
            out[i] = out[i].add(&term);
        }
    }
    out
}

fn eval_series_poly(coeffs: &[HahnSeries], at: &HahnSeries) -> HahnSeries {
    let field = at.field().clone();
    let mut acc = HahnSeries::zero(&field);
    for c in coeffs.iter().rev() {
        acc = acc.mul(at).add(c);
    }
    acc
}

fn poly_to_series(p: &FPoly) -> HahnSeries {
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| (Rat::from_integer(BigInt::from(i)), c.clone()))
        .collect();
    HahnSeries::from_terms(p.field(), terms)
}

fn render_fpoly(p: &FPoly) -> String {
    let parts: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("({})*X^{}", c, i))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// Squarefree decomposition over k(t), via rational-function coefficients.
// ---------------------------------------------------------------------------

/// A reduced ratio of polynomials in `t` with monic denominator.
#[derive(Clone, Debug)]
struct RatFun {
    num: FPoly,
    den: FPoly,
}

impl RatFun {
    fn new(num: FPoly, den: FPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            let field = num.field().clone();
            return RatFun {
                num,
                den: FPoly::constant(FieldElem::one(&field)),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().map_or(false, |d| d > 0) {
            (num.exact_div(&g), den.exact_div(&g))
        } else {
            (num, den)
        };
        let lc_inv = den.leading().unwrap().inv().expect("nonzero");
        RatFun {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        }
    }

    fn from_poly(p: FPoly) -> Self {
        let one = FPoly::constant(FieldElem::one(p.field()));
        RatFun { num: p, den: one }
    }

    fn zero(field: &Arc<CycloField>) -> Self {
        Self::from_poly(FPoly::zero(field))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero());
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    fn scale_int(&self, k: i64) -> Self {
        Self::new(
            self.num.scale(&FieldElem::from_int(self.num.field(), k)),
            self.den.clone(),
        )
    }
}

type BiRat = Vec<RatFun>; // y-polynomial over k(t), lowest degree first

fn birat_trim(mut p: BiRat) -> BiRat {
    while p.last().map_or(false, RatFun::is_zero) {
        p.pop();
    }
    p
}

fn birat_divrem(a: &BiRat, b: &BiRat) -> (BiRat, BiRat) {
    let field = b.last().unwrap().num.field().clone();
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    let mut rem = birat_trim(a.clone());
    let mut quot = vec![RatFun::zero(&field); a.len().saturating_sub(db).max(1)];
    while !rem.is_empty() && rem.len() - 1 >= db {
        let dr = rem.len() - 1;
        let c = rem[dr].div(&lead);
        quot[dr - db] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let sub = c.mul(bc);
            rem[dr - db + i] = rem[dr - db + i].sub(&sub);
        }
        rem = birat_trim(rem);
        if db == 0 {
            rem = vec![];
            break;
        }
    }
    (birat_trim(quot), rem)
}

fn birat_gcd(a: &BiRat, b: &BiRat) -> BiRat {
    let mut x = birat_trim(a.clone());
    let mut y = birat_trim(b.clone());
    while !y.is_empty() {
        let (_, r) = birat_divrem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        x = x.iter().map(|c| c.div(&l)).collect();
    }
    x
}

fn birat_derivative(p: &BiRat) -> BiRat {
    if p.len() <= 1 {
        return vec![];
    }
    p[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c.scale_int(i as i64 + 1))
        .collect()
}

fn birat_exact_div(a: &BiRat, b: &BiRat) -> BiRat {
    let (q, r) = birat_divrem(a, b);
    assert!(r.is_empty(), "bivariate division not exact");
    q
}

fn birat_sub(a: &BiRat, b: &BiRat, field: &Arc<CycloField>) -> BiRat {
    let n = a.len().max(b.len());
    let zero = RatFun::zero(field);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        out.push(x.sub(y));
    }
    birat_trim(out)
}

/// Whether `divisor` divides `f` in `k(t)[y]`. Negative t-exponents
/// are cleared first (powers of `t` are units of `k(t)`).
pub(crate) fn divides_in_kty(divisor: &LaurentPoly, f: &LaurentPoly) -> bool {
    if f.is_zero() {
        return true;
    }
    if divisor.is_zero() {
        return false;
    }
    let clear = |p: &LaurentPoly| match p.t_range() {
        Some((lo, _)) if lo < 0 => p.mul_t_pow(-lo),
        _ => p.clone(),
    };
    let a = laurent_to_birat(&clear(f));
    let b = laurent_to_birat(&clear(divisor));
    if b.is_empty() || a.len() < b.len() {
        return false;
    }
    let (_, r) = birat_divrem(&a, &b);
    r.is_empty()
}

fn laurent_to_birat(p: &LaurentPoly) -> BiRat {
    let field = p.field().clone();
    let deg = p.y_degree().unwrap_or(0) as usize;
    let mut out: BiRat = Vec::with_capacity(deg + 1);
    for j in 0..=deg {
        let series = p.y_coefficient_series(j as u32);
        let max_exp = series
            .support()
            .iter()
            .map(|e| e.numer().to_i64().unwrap())
            .max()
            .unwrap_or(0);
        let mut v = vec![FieldElem::zero(&field); (max_exp.max(0) as usize) + 1];
        for (e, c) in series.terms() {
            let idx = e.numer().to_i64().unwrap();
            assert!(idx >= 0, "negative t-exponent after clearing");
            v[idx as usize] = c.clone();
        }
        out.push(RatFun::from_poly(FPoly::new(&field, v)));
    }
    birat_trim(out)
}

/// Squarefree parts of `p` as polynomials in `k[t][y]` (denominators
/// cleared; clearing does not change the y-roots).
fn squarefree_parts(p: &LaurentPoly) -> Vec<(Vec<FPoly>, usize)> {
    let field = p.field().clone();
    let birat = laurent_to_birat(p);

    // Yun's algorithm over k(t)
    let mut parts: Vec<(BiRat, usize)> = Vec::new();
    let monic = {
        let l = birat.last().unwrap().clone();
        birat.iter().map(|c| c.div(&l)).collect::<BiRat>()
    };
    let deriv = birat_derivative(&monic);
    let a0 = birat_gcd(&monic, &deriv);
    if a0.len() <= 1 {
        parts.push((monic, 1));
    } else {
        let mut b = birat_exact_div(&monic, &a0);
        let mut c = birat_exact_div(&deriv, &a0);
        let mut i = 1;
        loop {
            let d = birat_sub(&c, &birat_derivative(&b), &field);
            if d.is_empty() {
                if b.len() > 1 {
                    parts.push((b.clone(), i));
                }
                break;
            }
            let g = birat_gcd(&b, &d);
            if g.len() > 1 {
                parts.push((g.clone(), i));
            }
            b = birat_exact_div(&b, &g);
            c = birat_exact_div(&d, &g);
            i += 1;
            if b.len() <= 1 {
                break;
            }
        }
    }

    // clear denominators back into k[t][y]
    parts
        .into_iter()
        .map(|(part, m)| {
            let mut lcm = FPoly::constant(FieldElem::one(&field));
            for c in &part {
                let g = lcm.gcd(&c.den);
                lcm = lcm.mul(&c.den.exact_div(&g));
            }
            let cleared: Vec<FPoly> = part
                .iter()
                .map(|c| c.num.mul(&lcm.exact_div(&c.den)))
                .collect();
            (cleared, m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_laurent;
    use crate::rat::{rat, rat_int};

    fn q() -> Arc<CycloField> {
        CycloField::rationals()
    }

    fn lp(text: &str) -> LaurentPoly {
        parse_laurent(text, "t", "y", &q()).unwrap()
    }

    #[test]
    fn polygon_examples() {
        // y^2 - t: single edge of slope 1/2
        let p = newton_polygon(&lp("y^2 - t")).unwrap();
        assert_eq!(p.vertices, vec![(2, rat_int(0)), (0, rat_int(1))]);
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.edges[0].slope, rat(1, 2));
        // y - t^3: slope 3
        let p = newton_polygon(&lp("y - t^3")).unwrap();
        assert_eq!(p.edges[0].slope, rat_int(3));
        // y^2 - t^2 - t^3: slope 1 (hull of (2,0) and (0,2))
        let p = newton_polygon(&lp("y^2 - t^2 - t^3")).unwrap();
        assert_eq!(p.edges.len(), 1);
        assert_eq!(p.edges[0].slope, rat_int(1));
    }

    #[test]
    fn polygon_slopes_increase() {
        // two edges: y^3 + t*y - t^2: points (3,0),(1,1),(0,2)
        let p = newton_polygon(&lp("y^3 + t*y - t^2")).unwrap();
        assert_eq!(p.edges.len(), 2);
        assert_eq!(p.edges[0].slope, rat(1, 2));
        assert_eq!(p.edges[1].slope, rat_int(1));
        for w in p.edges.windows(2) {
            assert!(w[0].slope < w[1].slope);
        }
    }

    #[test]
    fn expand_square_root() {
        let branches = puiseux_expand(&lp("y^2 - t"), &rat_int(3)).unwrap();
        assert_eq!(branches.len(), 2);
        let f = q();
        let pos = HahnSeries::monomial(rat(1, 2), FieldElem::one(&f));
        let neg = pos.neg();
        let expansions: Vec<&HahnSeries> = branches.iter().map(|b| &b.expansion).collect();
        assert!(expansions.contains(&&pos));
        assert!(expansions.contains(&&neg));
        for b in &branches {
            assert_eq!(b.multiplicity, 1);
            assert_eq!(b.ramification, 2);
            assert!(b.expansion.is_exact());
        }
    }

    #[test]
    fn expand_singular_cubic() {
        // y^2 = t^2 + t^3: y = +/- (t + t^2/2 - t^3/8 + ...)
        let branches = puiseux_expand(&lp("y^2 - t^2 - t^3"), &rat_int(4)).unwrap();
        assert_eq!(branches.len(), 2);
        let plus = branches
            .iter()
            .find(|b| b.expansion.coeff_at(&rat_int(1)) == FieldElem::one(&q()))
            .unwrap();
        assert_eq!(
            plus.expansion.coeff_at(&rat_int(2)),
            FieldElem::from_rat(&q(), rat(1, 2))
        );
        assert_eq!(
            plus.expansion.coeff_at(&rat_int(3)),
            FieldElem::from_rat(&q(), rat(-1, 8))
        );
        // residual check
        let p = lp("y^2 - t^2 - t^3");
        for b in &branches {
            let r = p.evaluate_y(&b.expansion);
            if let Ok(v) = r.valuation() {
                assert!(v > rat_int(4));
            }
        }
    }

    #[test]
    fn expand_polynomial_root() {
        let branches = puiseux_expand(&lp("y - t^2 + 3*t"), &rat_int(5)).unwrap();
        assert_eq!(branches.len(), 1);
        let b = &branches[0];
        assert!(b.expansion.is_exact());
        assert_eq!(
            b.expansion.coeff_at(&rat_int(1)),
            FieldElem::from_int(&q(), -3)
        );
        assert_eq!(b.expansion.coeff_at(&rat_int(2)), FieldElem::one(&q()));
    }

    #[test]
    fn multiplicities_from_squarefree_decomposition() {
        // (y - t)^2 (y + t)
        let p = lp("(y - t)^2 * (y + t)");
        let branches = puiseux_expand(&p, &rat_int(4)).unwrap();
        let total: usize = branches.iter().map(|b| b.multiplicity).sum();
        assert_eq!(total, 3);
        let double = branches.iter().find(|b| b.multiplicity == 2).unwrap();
        assert_eq!(double.expansion.coeff_at(&rat_int(1)), FieldElem::one(&q()));
    }

    #[test]
    fn incomplete_splitting_over_q() {
        // y^3 - t needs cube roots of unity for the full class
        let err = puiseux_expand(&lp("y^3 - t"), &rat_int(3)).unwrap_err();
        assert!(matches!(err, PuiseuxError::IncompleteSplitting { .. }));
    }

    #[test]
    fn conjugacy_closure_with_roots_of_unity() {
        // over Q(zeta_3), y^3 - t returns the full conjugacy class
        let f = CycloField::new(3);
        let p = parse_laurent("y^3 - t", "t", "y", &f).unwrap();
        let branches = puiseux_expand(&p, &rat_int(3)).unwrap();
        assert_eq!(branches.len(), 3);
        let z3 = crate::field::root_of_unity(3, &f).unwrap();
        // replacing t^(1/3) by zeta_3 t^(1/3) permutes the branches
        let coeffs: Vec<FieldElem> = branches
            .iter()
            .map(|b| b.expansion.coeff_at(&rat(1, 3)))
            .collect();
        for c in &coeffs {
            assert!(coeffs.contains(&c.mul(&z3)));
        }
        for b in &branches {
            assert_eq!(b.ramification, 3);
        }
    }

    #[test]
    fn negative_valuation_roots() {
        // t*y - 1: root y = 1/t
        let branches = puiseux_expand(&lp("t*y - 1"), &rat_int(3)).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].expansion.valuation(), Ok(rat_int(-1)));
    }

    #[test]
    fn separation_examples() {
        // {t^(1/2), -t^(1/2)} -> 1/2
        let branches = puiseux_expand(&lp("y^2 - t"), &rat_int(3)).unwrap();
        assert_eq!(separation_precision(&branches), Ok(rat(1, 2)));
        // {t, t + t^2} -> 2 : product (y - t)(y - t - t^2)
        let p = lp("(y - t)*(y - t - t^2)");
        let branches = puiseux_expand(&p, &rat_int(5)).unwrap();
        assert_eq!(separation_precision(&branches), Ok(rat_int(2)));
        // {t, -t, t^2} -> 1
        let p = lp("(y - t)*(y + t)*(y - t^2)");
        let branches = puiseux_expand(&p, &rat_int(5)).unwrap();
        assert_eq!(separation_precision(&branches), Ok(rat_int(1)));
        // single branch errors
        let single = puiseux_expand(&lp("y - t"), &rat_int(3)).unwrap();
        assert_eq!(
            separation_precision(&single),
            Err(PuiseuxError::SingleBranch)
        );
    }

    #[test]
    fn branch_count_with_multiplicity_matches_degree() {
        for text in [
            "y^2 - t",
            "(y - t)^2 * (y + t)",
            "y^2 - t^2 - t^3",
            "(y^2 - t)*(y - t^3)",
        ] {
            let p = lp(text);
            let branches = puiseux_expand(&p, &rat_int(5)).unwrap();
            let total: usize = branches.iter().map(|b| b.multiplicity).sum();
            assert_eq!(total, p.y_degree().unwrap() as usize, "{}", text);
        }
    }

    #[test]
    fn truncated_branch_reports_next_exponent() {
        // y^2 - t^2 - t^3 at low precision: branch known below its
        // next support exponent, residual valuation beyond request
        let branches = puiseux_expand(&lp("y^2 - t^2 - t^3"), &rat_int(2)).unwrap();
        for b in &branches {
            assert!(!b.expansion.is_exact());
            match b.expansion.known_below() {
                Bound::Finite(kb) => assert!(*kb > rat_int(1)),
                Bound::Infinite => panic!("expected truncation"),
            }
        }
    }
}
