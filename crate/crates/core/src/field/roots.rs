//! Exact root finding in cyclotomic fields.
//!
//! `find_roots` returns every root of a univariate polynomial that
//! lies in the coefficient field, with multiplicities. The search is
//! modular: pick a prime `q = 1 (mod N)` so that `Phi_N` splits into
//! linear factors mod `q`, read off the candidate roots in every
//! residue embedding, Hensel-lift them, solve for the power-basis
//! coordinates mod `q^k` and reconstruct rationals. Every candidate is
//! verified exactly before it is reported, so a wrong answer is
//! impossible; a root can only be missed if its coordinate height
//! exceeds the reconstruction ladder (astronomically large at desk
//! scale) or if the residual tuple space is truncated for high-degree
//! polynomials over large fields.

use super::poly::FPoly;
use super::{CycloField, FieldElem};
use crate::rat::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Arc;

/// Max number of candidate tuples enumerated across all embeddings.
const TUPLE_LIMIT: usize = 70_000;
/// Reconstruction moduli ladder (bits of `q^k`).
const BIT_LADDER: [u64; 3] = [192, 448, 960];

/// All roots of `p` inside its coefficient field, with multiplicities.
///
/// The returned list is complete within the field at desk scale; an
/// incomplete splitting shows up as `sum of multiplicities < deg p`
/// and is left to callers to interpret.
pub fn find_roots(p: &FPoly) -> Vec<(FieldElem, usize)> {
    assert!(!p.is_zero(), "root finding on the zero polynomial");
    let mut out = Vec::new();
    for (part, mult) in p.squarefree_decomposition() {
        for r in roots_squarefree(&part) {
            out.push((r, mult));
        }
    }
    out
}

fn roots_squarefree(p: &FPoly) -> Vec<FieldElem> {
    let field = p.field().clone();
    let deg = match p.degree() {
        None | Some(0) => return vec![],
        Some(d) => d,
    };
    if deg == 1 {
        let root = p.coeff(0).neg().div(&p.coeff(1)).expect("nonzero leading");
        return vec![root];
    }
    let int_coeffs = integerize(p);
    let mut best: Vec<FieldElem> = Vec::new();
    for bits in BIT_LADDER {
        if let Some(roots) = roots_modular(p, &int_coeffs, &field, bits) {
            if roots.len() >= deg {
                return roots;
            }
            if roots.len() > best.len() {
                best = roots;
            }
        }
    }
    best
}

/// Clear denominators: coefficient index -> integer coordinates.
fn integerize(p: &FPoly) -> Vec<Vec<BigInt>> {
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        for r in c.coords() {
            lcm = lcm.lcm(r.denom());
        }
    }
    p.coeffs()
        .iter()
        .map(|c| {
            c.coords()
                .iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect()
        })
        .collect()
}

struct ModularSetup {
    q: u64,
    /// Order-N element of `F_q`*, one per embedding: `w^a` for units a.
    embed_roots: Vec<u64>,
    /// Coefficients of `p` reduced in each embedding.
    polys: Vec<Vec<u64>>,
}

fn roots_modular(
    p: &FPoly,
    int_coeffs: &[Vec<BigInt>],
    field: &Arc<CycloField>,
    bits: u64,
) -> Option<Vec<FieldElem>> {
    let n = field.conductor();
    let d = field.degree();
    let deg = p.degree().unwrap();

    let setup = choose_prime(int_coeffs, n, d, deg)?;
    let q = setup.q;
    let k = (bits / (63 - q.leading_zeros() as u64).max(1)) + 1;
    let modulus = BigInt::from(q).pow(k as u32);

    // Lift the chosen order-N root of unity, then power it up for the
    // other embeddings.
    let w_lifted = hensel_lift_root_of_unity(n, setup.embed_roots[0], q, &modulus);
    let units = unit_exponents(n);
    let embed_w: Vec<BigInt> = units
        .iter()
        .map(|&a| w_lifted.modpow(&BigInt::from(a), &modulus))
        .collect();

    // Per embedding: roots of p mod q, lifted to mod q^k.
    let mut lifted_roots: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for (j, poly_q) in setup.polys.iter().enumerate() {
        let roots_q = scan_roots_mod_q(poly_q, q);
        let poly_big: Vec<BigInt> = embed_int_coeffs(int_coeffs, &embed_w[j], &modulus);
        let mut lifted = Vec::with_capacity(roots_q.len());
        for r in roots_q {
            lifted.push(hensel_lift_simple_root(&poly_big, BigInt::from(r), q, &modulus));
        }
        lifted_roots.push(lifted);
    }

    // Vandermonde in the embedding roots of unity, inverted mod q^k.
    let vinv = invert_vandermonde(&embed_w, d, &modulus)?;

    let tuple_count: usize = lifted_roots
        .iter()
        .map(|r| r.len().max(1))
        .try_fold(1usize, |acc, len| acc.checked_mul(len))
        .unwrap_or(usize::MAX);

    let bound = isqrt(&(&modulus >> 1));
    let mut found: Vec<FieldElem> = Vec::new();
    let try_candidate = |values: &[BigInt], found: &mut Vec<FieldElem>| {
        let coords = mat_vec(&vinv, values, &modulus);
        let mut rat_coords = Vec::with_capacity(d);
        for c in &coords {
            match rational_reconstruct(c, &modulus, &bound) {
                Some(r) => rat_coords.push(r),
                None => return,
            }
        }
        let candidate = FieldElem::from_poly_coords(field, rat_coords);
        if p.eval(&candidate).is_zero() && !found.contains(&candidate) {
            found.push(candidate);
        }
    };

    if d == 1 || tuple_count <= TUPLE_LIMIT {
        let mut idx = vec![0usize; d];
        if lifted_roots.iter().all(|r| !r.is_empty()) {
            loop {
                let values: Vec<BigInt> = (0..d)
                    .map(|j| lifted_roots[j][idx[j]].clone())
                    .collect();
                try_candidate(&values, &mut found);
                // odometer
                let mut j = 0;
                loop {
                    if j == d {
                        return Some(found);
                    }
                    idx[j] += 1;
                    if idx[j] < lifted_roots[j].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
            }
        }
        Some(found)
    } else {
        // Too many tuples: only rational roots (identical image in all
        // embeddings) are still reachable.
        for x in &lifted_roots[0] {
            if lifted_roots[1..].iter().all(|r| r.contains(x)) {
                let values = vec![x.clone(); d];
                try_candidate(&values, &mut found);
            }
        }
        Some(found)
    }
}

/// The exponents `a` coprime to `n` (the Galois group indices).
fn unit_exponents(n: u64) -> Vec<u64> {
    (1..=n).filter(|a| num_integer::gcd(*a, n) == 1).collect()
}

fn choose_prime(int_coeffs: &[Vec<BigInt>], n: u64, d: usize, deg: usize) -> Option<ModularSetup> {
    let mut q = n.max(2) + 1;
    let mut attempts = 0;
    while attempts < 200 {
        // next prime = 1 (mod n)
        while !(is_prime_u64(q) && q % n == 1 % n && q > 2) {
            q += 1;
        }
        attempts += 1;
        if let Some(setup) = try_prime(int_coeffs, n, d, deg, q) {
            return Some(setup);
        }
        q += 1;
    }
    None
}

fn try_prime(
    int_coeffs: &[Vec<BigInt>],
    n: u64,
    d: usize,
    deg: usize,
    q: u64,
) -> Option<ModularSetup> {
    let w = element_of_order(n, q)?;
    let units = unit_exponents(n);
    debug_assert_eq!(units.len(), d);
    let embed_roots: Vec<u64> = units.iter().map(|&a| pow_mod_u64(w, a, q)).collect();
    let mut polys = Vec::with_capacity(d);
    for &wa in &embed_roots {
        let poly_q = embed_int_coeffs_u64(int_coeffs, wa, q);
        if poly_q.len() != deg + 1 || *poly_q.last().unwrap() == 0 {
            return None; // leading coefficient degenerated
        }
        if !is_squarefree_mod_q(&poly_q, q) {
            return None;
        }
        polys.push(poly_q);
    }
    Some(ModularSetup {
        q,
        embed_roots,
        polys,
    })
}

fn embed_int_coeffs_u64(int_coeffs: &[Vec<BigInt>], w: u64, q: u64) -> Vec<u64> {
    let qb = BigInt::from(q);
    int_coeffs
        .iter()
        .map(|coords| {
            let mut acc: u64 = 0;
            let mut wp: u64 = 1;
            for c in coords {
                let c = c.mod_floor(&qb).to_u64().unwrap();
                acc = (acc + mul_mod_u64(c, wp, q)) % q;
                wp = mul_mod_u64(wp, w, q);
            }
            acc
        })
        .collect()
}

fn embed_int_coeffs(int_coeffs: &[Vec<BigInt>], w: &BigInt, modulus: &BigInt) -> Vec<BigInt> {
    int_coeffs
        .iter()
        .map(|coords| {
            let mut acc = BigInt::zero();
            let mut wp = BigInt::one();
            for c in coords {
                acc = (acc + c * &wp).mod_floor(modulus);
                wp = (&wp * w).mod_floor(modulus);
            }
            acc
        })
        .collect()
}

/// An element of exact multiplicative order `n` in `F_q`*; requires
/// `q = 1 (mod n)`.
fn element_of_order(n: u64, q: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    let cofactor = (q - 1) / n;
    let prime_divs: Vec<u64> = prime_divisors(n);
    for g in 2..q.min(2000) {
        let w = pow_mod_u64(g, cofactor, q);
        if w == 1 {
            continue;
        }
        if prime_divs
            .iter()
            .all(|&p| pow_mod_u64(w, n / p, q) != 1)
        {
            return Some(w);
        }
    }
    None
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn scan_roots_mod_q(poly: &[u64], q: u64) -> Vec<u64> {
    let mut roots = Vec::new();
    for x in 0..q {
        let mut acc: u64 = 0;
        for c in poly.iter().rev() {
            acc = (mul_mod_u64(acc, x, q) + c) % q;
        }
        if acc == 0 {
            roots.push(x);
        }
    }
    roots
}

fn is_squarefree_mod_q(poly: &[u64], q: u64) -> bool {
    let deriv: Vec<u64> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| mul_mod_u64(*c, (i as u64) % q, q))
        .collect();
    let g = poly_gcd_mod_q(poly.to_vec(), deriv, q);
    g.len() == 1
}

fn poly_gcd_mod_q(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        if v.is_empty() {
            v.push(0);
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        // a mod b
        let lb = *b.last().unwrap();
        let lb_inv = pow_mod_u64(lb, q - 2, q);
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let shift = a.len() - b.len();
            let f = mul_mod_u64(*a.last().unwrap(), lb_inv, q);
            for (i, c) in b.iter().enumerate() {
                let sub = mul_mod_u64(f, *c, q);
                let idx = shift + i;
                a[idx] = (a[idx] + q - sub) % q;
            }
            trim(&mut a);
            if a.len() == 1 && a[0] == 0 {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
        trim(&mut b);
    }
    a
}

/// Newton-lift `r0` (a simple root of `poly` mod `q`) to a root modulo
/// the full `modulus = q^k`.
fn hensel_lift_simple_root(poly: &[BigInt], r0: BigInt, q: u64, modulus: &BigInt) -> BigInt {
    let deriv: Vec<BigInt> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut m = BigInt::from(q);
    let mut r = r0;
    while &m < modulus {
        m = (&m * &m).min(modulus.clone());
        let fr = eval_big(poly, &r, &m);
        let dr = eval_big(&deriv, &r, &m);
        let dinv = mod_inverse(&dr, &m).expect("derivative invertible at simple root");
        r = (&r - fr * dinv).mod_floor(&m);
    }
    r
}

fn hensel_lift_root_of_unity(n: u64, w0: u64, q: u64, modulus: &BigInt) -> BigInt {
    // Lift as a root of x^n - 1.
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    hensel_lift_simple_root(&poly, BigInt::from(w0), q, modulus)
}

fn eval_big(poly: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in poly.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Inverse of the matrix `V[j][i] = w_j^i` modulo `modulus`.
fn invert_vandermonde(ws: &[BigInt], d: usize, modulus: &BigInt) -> Option<Vec<Vec<BigInt>>> {
    let mut aug: Vec<Vec<BigInt>> = (0..d)
        .map(|j| {
            let mut row = Vec::with_capacity(2 * d);
            let mut wp = BigInt::one();
            for _ in 0..d {
                row.push(wp.clone());
                wp = (&wp * &ws[j]).mod_floor(modulus);
            }
            for jj in 0..d {
                row.push(if jj == j { BigInt::one() } else { BigInt::zero() });
            }
            row
        })
        .collect();
    for col in 0..d {
        let pivot = (col..d).find(|&r| mod_inverse(&aug[r][col], modulus).is_some())?;
        aug.swap(col, pivot);
        let inv = mod_inverse(&aug[col][col], modulus)?;
        for c in 0..2 * d {
            aug[col][c] = (&aug[col][c] * &inv).mod_floor(modulus);
        }
        for r in 0..d {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in 0..2 * d {
                    let sub = (&f * &aug[col][c]).mod_floor(modulus);
                    aug[r][c] = (&aug[r][c] - sub).mod_floor(modulus);
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[d..].to_vec()).collect())
}

fn mat_vec(m: &[Vec<BigInt>], v: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    m.iter()
        .map(|row| {
            let mut acc = BigInt::zero();
            for (a, b) in row.iter().zip(v) {
                acc += a * b;
            }
            acc.mod_floor(modulus)
        })
        .collect()
}

/// Wang rational reconstruction: find `p/s` with `|p|, s <= bound`,
/// `s*x = p (mod m)`.
fn rational_reconstruct(x: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rat> {
    let mut r0 = m.clone();
    let mut r1 = x.mod_floor(m);
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while &r1 > bound {
        let quot = &r0 / &r1;
        let r2 = &r0 - &quot * &r1;
        let t2 = &t0 - &quot * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n % p == 0 {
            return n == p;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::root_of_unity;
    use crate::rat::rat;

    fn sorted_rats(roots: &[(FieldElem, usize)]) -> Vec<(Rat, usize)> {
        let mut v: Vec<(Rat, usize)> = roots
            .iter()
            .map(|(r, m)| (r.as_rat().expect("rational root"), *m))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn quadratic_over_q() {
        let q = CycloField::rationals();
        let p = FPoly::from_int_coeffs(&q, &[-1, 0, 1]); // x^2 - 1
        let roots = find_roots(&p);
        assert_eq!(
            sorted_rats(&roots),
            vec![(rat(-1, 1), 1), (rat(1, 1), 1)]
        );
    }

    #[test]
    fn rational_roots_any_degree() {
        let q = CycloField::rationals();
        // (x - 1/2)(x + 3)^2 (x - 5), cleared: roots 1/2, -3 (double), 5
        let a = FPoly::from_int_coeffs(&q, &[-1, 2]); // 2x - 1
        let b = FPoly::from_int_coeffs(&q, &[3, 1]);
        let c = FPoly::from_int_coeffs(&q, &[-5, 1]);
        let p = a.mul(&b).mul(&b).mul(&c);
        let roots = find_roots(&p);
        assert_eq!(
            sorted_rats(&roots),
            vec![(rat(-3, 1), 2), (rat(1, 2), 1), (rat(5, 1), 1)]
        );
    }

    #[test]
    fn x2_plus_1_over_zeta4() {
        let f = CycloField::new(4);
        let p = FPoly::from_int_coeffs(&f, &[1, 0, 1]);
        let roots = find_roots(&p);
        assert_eq!(roots.len(), 2);
        let i = FieldElem::generator(&f);
        let vals: Vec<&FieldElem> = roots.iter().map(|(r, _)| r).collect();
        assert!(vals.contains(&&i));
        assert!(vals.contains(&&i.neg()));
        for (r, _) in &roots {
            assert!(r.mul(r).add(&FieldElem::one(&f)).is_zero());
        }
    }

    #[test]
    fn x2_minus_2_over_zeta8() {
        let f = CycloField::new(8);
        let p = FPoly::from_int_coeffs(&f, &[-2, 0, 1]);
        let roots = find_roots(&p);
        assert_eq!(roots.len(), 2);
        for (r, _) in &roots {
            assert_eq!(r.mul(r), FieldElem::from_int(&f, 2));
        }
        // the roots are +/- (zeta + zeta^-1)
        let z = FieldElem::generator(&f);
        let sqrt2 = z.add(&z.pow(7));
        assert!(roots.iter().any(|(r, _)| *r == sqrt2));
        assert!(roots.iter().any(|(r, _)| *r == sqrt2.neg()));
    }

    #[test]
    fn incomplete_splitting_reported_by_count() {
        // x^2 - zeta_8 has no root in Q(zeta_8).
        let f = CycloField::new(8);
        let z = FieldElem::generator(&f);
        let p = FPoly::new(
            &f,
            vec![z.neg(), FieldElem::zero(&f), FieldElem::one(&f)],
        );
        let roots = find_roots(&p);
        assert!(roots.is_empty());
        // x^2 - 3 has no root in Q(zeta_8) either.
        let p = FPoly::from_int_coeffs(&f, &[-3, 0, 1]);
        assert!(find_roots(&p).is_empty());
    }

    #[test]
    fn cubic_roots_of_unity() {
        let f = CycloField::new(3);
        let p = FPoly::from_int_coeffs(&f, &[-1, 0, 0, 1]); // x^3 - 1
        let roots = find_roots(&p);
        assert_eq!(roots.len(), 3);
        let z3 = root_of_unity(3, &f).unwrap();
        let vals: Vec<&FieldElem> = roots.iter().map(|(r, _)| r).collect();
        assert!(vals.contains(&&FieldElem::one(&f)));
        assert!(vals.contains(&&z3));
        assert!(vals.contains(&&z3.mul(&z3)));
    }

    #[test]
    fn deflation_leaves_no_roots() {
        let f = CycloField::new(4);
        // (x^2+1)(x^2-3): only the first factor splits over Q(zeta_4).
        let a = FPoly::from_int_coeffs(&f, &[1, 0, 1]);
        let b = FPoly::from_int_coeffs(&f, &[-3, 0, 1]);
        let p = a.mul(&b);
        let roots = find_roots(&p);
        assert_eq!(roots.len(), 2);
        let mut rest = p;
        for (r, m) in &roots {
            for _ in 0..*m {
                let lin = FPoly::new(&f, vec![r.neg(), FieldElem::one(&f)]);
                rest = rest.exact_div(&lin);
            }
        }
        assert!(find_roots(&rest).is_empty());
        assert_eq!(rest.monic(), b.monic());
    }
}
