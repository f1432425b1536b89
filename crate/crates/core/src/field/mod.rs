//! Exact coefficient arithmetic: `Q` and its cyclotomic extensions
//! `Q(zeta_N)`.
//!
//! Elements are residues modulo the N-th cyclotomic polynomial, stored
//! in the power basis `1, z, ..., z^(phi(N)-1)` with rational
//! coordinates. Conductor 1 is plain `Q`. Equality is syntactic
//! equality of the (always reduced) coordinates.

mod cyclotomic;
pub mod poly;
mod roots;

pub use cyclotomic::{cyclotomic_poly, divisors, euler_phi};
pub use poly::FPoly;
pub use roots::find_roots;

use crate::rat::{rat_to_string, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("order {order} root of unity does not live in Q(zeta_{conductor})")]
    ConductorMismatch { order: u64, conductor: u64 },
    #[error("division by zero field element")]
    DivisionByZero,
    #[error("element of Q(zeta_{from}) does not lie in Q(zeta_{to})")]
    NotInSubfield { from: u64, to: u64 },
}

/// The field `Q(zeta_N)`, presented as `Q[z]/(Phi_N)`.
#[derive(Debug)]
pub struct CycloField {
    conductor: u64,
    /// Coefficients of `Phi_N`, lowest degree first (integers).
    modulus: Vec<BigInt>,
    degree: usize,
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.conductor == other.conductor
    }
}
impl Eq for CycloField {}

impl CycloField {
    pub fn new(conductor: u64) -> Arc<Self> {
        assert!(conductor > 0, "conductor must be positive");
        let modulus = cyclotomic_poly(conductor);
        let degree = modulus.len() - 1;
        Arc::new(CycloField {
            conductor,
            modulus,
            degree,
        })
    }

    /// Plain `Q` as the degenerate cyclotomic field of conductor 1.
    pub fn rationals() -> Arc<Self> {
        Self::new(1)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Degree `phi(N)` of the extension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }
}

/// An element of a cyclotomic field: a reduced residue mod `Phi_N`.
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<CycloField>,
    /// Power-basis coordinates, length `phi(N)`.
    coords: Vec<Rat>,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({})", self)
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coords == other.coords
    }
}
impl Eq for FieldElem {}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{}", rat_to_string(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", rat_to_string(&mag))?;
                }
                if i == 1 {
                    write!(f, "z")?;
                } else {
                    write!(f, "z^{}", i)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElem {
    fn from_coords(field: Arc<CycloField>, mut coords: Vec<Rat>) -> Self {
        coords.resize(field.degree, Rat::zero());
        FieldElem { field, coords }
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        Self::from_coords(field.clone(), vec![])
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_coords(field.clone(), vec![Rat::one()])
    }

    pub fn from_rat(field: &Arc<CycloField>, r: Rat) -> Self {
        Self::from_coords(field.clone(), vec![r])
    }

    pub fn from_int(field: &Arc<CycloField>, n: i64) -> Self {
        Self::from_rat(field, Rat::from_integer(BigInt::from(n)))
    }

    /// The residue class of `z` (a primitive N-th root of unity).
    pub fn generator(field: &Arc<CycloField>) -> Self {
        if field.degree == 1 {
            // Phi_1 = z - 1, so z reduces to 1; Phi_2 = z + 1, so z = -1.
            let v = if field.conductor == 1 {
                Rat::one()
            } else {
                -Rat::one()
            };
            return Self::from_rat(field, v);
        }
        let mut coords = vec![Rat::zero(); field.degree];
        coords[1] = Rat::one();
        FieldElem {
            field: field.clone(),
            coords,
        }
    }

    /// Build an element from polynomial coordinates of any length,
    /// reducing modulo `Phi_N`.
    pub fn from_poly_coords(field: &Arc<CycloField>, coords: Vec<Rat>) -> Self {
        let reduced = reduce_mod_modulus(field, coords);
        Self::from_coords(field.clone(), reduced)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn assert_same_field(&self, other: &Self) {
        assert_eq!(
            self.field.conductor, other.field.conductor,
            "field elements from different cyclotomic fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Self::from_coords(self.field.clone(), coords)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Self::from_coords(self.field.clone(), coords)
    }

    pub fn neg(&self) -> Self {
        let coords = self.coords.iter().map(|a| -a).collect();
        Self::from_coords(self.field.clone(), coords)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let d = self.field.degree;
        let mut prod = vec![Rat::zero(); 2 * d];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] += a * b;
            }
        }
        let reduced = reduce_mod_modulus(&self.field, prod);
        Self::from_coords(self.field.clone(), reduced)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let coords = self.coords.iter().map(|a| a * r).collect();
        Self::from_coords(self.field.clone(), coords)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // Extended Euclid in Q[z] against Phi_N.
        let modulus: Vec<Rat> = self
            .field
            .modulus
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let a = trim(self.coords.clone());
        let (g, _, v) = ext_gcd_qpoly(&modulus, &a);
        // g is a nonzero constant since Phi_N is irreducible.
        debug_assert_eq!(g.len(), 1);
        let ginv = Rat::one() / g[0].clone();
        let coords = v.into_iter().map(|c| c * &ginv).collect();
        Ok(Self::from_poly_coords(&self.field, coords))
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact multiplicative order, if it divides `bound`.
    pub fn order_dividing(&self, bound: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        divisors(bound)
            .into_iter()
            .find(|&d| self.pow(d).is_one())
    }

    /// Image under the inclusion `Q(zeta_N) -> Q(zeta_M)` with `N | M`,
    /// sending `z_N` to `z_M^(M/N)`.
    pub fn embed(&self, target: &Arc<CycloField>) -> Self {
        let n = self.field.conductor;
        let m = target.conductor;
        assert!(m % n == 0, "no embedding Q(zeta_{n}) -> Q(zeta_{m})");
        let step = (m / n) as usize;
        let mut coords = vec![Rat::zero(); self.coords.len() * step + 1];
        for (i, c) in self.coords.iter().enumerate() {
            coords[i * step] = c.clone();
        }
        Self::from_poly_coords(target, coords)
    }

    /// Express the element in a smaller cyclotomic field if possible.
    pub fn contract(&self, target: &Arc<CycloField>) -> Result<Self, FieldError> {
        let err = FieldError::NotInSubfield {
            from: self.field.conductor,
            to: target.conductor,
        };
        if self.field.conductor == target.conductor {
            return Ok(self.clone());
        }
        if self.field.conductor % target.conductor != 0 {
            return Err(err);
        }
        // Solve embed(x) = self by matching coordinates of the basis
        // images z_target^i |-> z^(step*i) reduced mod Phi.
        let dt = target.degree;
        let ds = self.field.degree;
        let mut cols = Vec::with_capacity(dt);
        for i in 0..dt {
            let mut coords = vec![Rat::zero(); dt];
            coords[i] = Rat::one();
            let basis_elem = FieldElem::from_coords(target.clone(), coords);
            cols.push(basis_elem.embed(&self.field).coords);
        }
        match solve_linear(&cols, ds, &self.coords) {
            Some(sol) => Ok(FieldElem::from_coords(target.clone(), sol)),
            None => Err(err),
        }
    }
}

/// A primitive n-th root of unity in the given field.
///
/// Exists exactly when `n | N`, or when `N` is odd and `n | 2N` (then
/// `-zeta_d^((d+1)/2)` with `d = n/2` has order `n`). `n = 1, 2` work
/// in every field.
pub fn root_of_unity(n: u64, field: &Arc<CycloField>) -> Result<FieldElem, FieldError> {
    assert!(n > 0);
    let cond = field.conductor();
    if n == 1 {
        return Ok(FieldElem::one(field));
    }
    if n == 2 {
        return Ok(FieldElem::from_int(field, -1));
    }
    if cond % n == 0 {
        return Ok(FieldElem::generator(field).pow(cond / n));
    }
    if cond % 2 == 1 && n % 2 == 0 && cond % (n / 2) == 0 {
        let d = n / 2;
        let zeta_d = FieldElem::generator(field).pow(cond / d);
        return Ok(zeta_d.pow((d + 1) / 2).neg());
    }
    Err(FieldError::ConductorMismatch {
        order: n,
        conductor: cond,
    })
}

fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.len() > 1 && v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
    v
}

fn reduce_mod_modulus(field: &Arc<CycloField>, mut coords: Vec<Rat>) -> Vec<Rat> {
    let d = field.degree;
    let modulus = &field.modulus;
    // Modulus is monic with integer coefficients.
    for i in (d..coords.len()).rev() {
        let c = std::mem::replace(&mut coords[i], Rat::zero());
        if c.is_zero() {
            continue;
        }
        for (j, m) in modulus.iter().enumerate().take(d) {
            let m = Rat::from_integer(m.clone());
            coords[i - d + j] -= &c * m;
        }
    }
    coords.truncate(d.max(1));
    coords
}

/// Extended gcd of rational polynomials (dense, lowest degree first):
/// returns (g, u, v) with u*a + v*b = g.
fn ext_gcd_qpoly(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>, Vec<Rat>) {
    let zero = || vec![Rat::zero()];
    let one = || vec![Rat::one()];
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let (mut s0, mut s1) = (one(), zero());
    let (mut t0, mut t1) = (zero(), one());
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = qpoly_divrem(&r0, &r1);
        let s = qpoly_sub(&s0, &qpoly_mul(&q, &s1));
        let t = qpoly_sub(&t0, &qpoly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

fn qpoly_divrem(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let den = trim(den.to_vec());
    let dd = den.len() - 1;
    let lc = den[dd].clone();
    let mut rem = trim(num.to_vec());
    if rem.len() <= dd && !(dd == 0) {
        return (vec![Rat::zero()], rem);
    }
    let qlen = rem.len().saturating_sub(dd);
    let mut quot = vec![Rat::zero(); qlen.max(1)];
    while rem.len() > dd || (dd == 0 && !(rem.len() == 1 && rem[0].is_zero())) {
        let deg_r = rem.len() - 1;
        if deg_r < dd {
            break;
        }
        let c = rem[deg_r].clone() / lc.clone();
        quot[deg_r - dd] = c.clone();
        for (j, d) in den.iter().enumerate() {
            let idx = deg_r - dd + j;
            let sub = &c * d;
            rem[idx] -= sub;
        }
        rem = trim(rem);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
        if dd == 0 {
            break;
        }
    }
    (trim(quot), rem)
}

fn qpoly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn qpoly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Solve `sum_i x_i * cols[i] = rhs` over Q by Gaussian elimination.
/// `cols` are column vectors of length `rows`.
fn solve_linear(cols: &[Vec<Rat>], rows: usize, rhs: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = cols.len();
    let mut m: Vec<Vec<Rat>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = Rat::one() / m[rank][col].clone();
        for c in col..=ncols {
            let v = std::mem::replace(&mut m[rank][c], Rat::zero());
            m[rank][c] = v * &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=ncols {
                    let sub = &f * &m[rank][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
    }
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..rows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut sol = vec![Rat::zero(); ncols];
    for (col, &pr) in pivot_of_col.iter().enumerate() {
        if pr != usize::MAX {
            sol[col] = m[pr][ncols].clone();
        }
    }
    Some(sol)
}
