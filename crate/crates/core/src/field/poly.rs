//! Dense univariate polynomials over a cyclotomic field.

use super::{CycloField, FieldElem};
use crate::rat::Rat;

use std::fmt;
use std::sync::Arc;

/// A univariate polynomial, lowest degree first, trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct FPoly {
    field: Arc<CycloField>,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for FPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

impl FPoly {
    pub fn new(field: &Arc<CycloField>, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().map_or(false, FieldElem::is_zero) {
            coeffs.pop();
        }
        FPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        Self::new(field, vec![])
    }

    pub fn constant(c: FieldElem) -> Self {
        let field = c.field().clone();
        Self::new(&field, vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: FieldElem, k: usize) -> Self {
        let field = c.field().clone();
        let mut coeffs = vec![FieldElem::zero(&field); k + 1];
        coeffs[k] = c;
        Self::new(&field, coeffs)
    }

    pub fn from_int_coeffs(field: &Arc<CycloField>, ints: &[i64]) -> Self {
        let coeffs = ints.iter().map(|&c| FieldElem::from_int(field, c)).collect();
        Self::new(field, coeffs)
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Self::new(&self.field, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(&other.coeff(i)));
        }
        Self::new(&self.field, out)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(FieldElem::neg).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let mut out = vec![FieldElem::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.field, out)
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::new(
            &self.field,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        Self::new(
            &self.field,
            self.coeffs.iter().map(|a| a.scale(r)).collect(),
        )
    }

    /// Division with remainder; the divisor's leading coefficient must
    /// be invertible (any nonzero field element is).
    pub fn divrem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let dd = den.degree().unwrap();
        let lc_inv = den.leading().unwrap().inv().expect("nonzero leading");
        let mut rem = self.clone();
        let mut quot = vec![
            FieldElem::zero(&self.field);
            self.coeffs.len().saturating_sub(dd).max(1)
        ];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let c = rem.leading().unwrap().mul(&lc_inv);
            quot[dr - dd] = c.clone();
            let shifted = den.mul(&Self::monomial(c, dr - dd));
            rem = rem.sub(&shifted);
        }
        (Self::new(&self.field, quot), rem)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading")),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(&self.field);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.scale(&Rat::from_integer((i as i64 + 1).into())))
            .collect();
        Self::new(&self.field, coeffs)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = FieldElem::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, den: &Self) -> Self {
        let (q, r) = self.divrem(den);
        assert!(r.is_zero(), "polynomial division not exact");
        q
    }

    /// Squarefree decomposition (Yun): returns `(g_i, i)` pairs with
    /// `self = lc * prod g_i^i`, each `g_i` squarefree and monic.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        assert!(!self.is_zero());
        let f = self.monic();
        if f.degree() == Some(0) {
            return vec![];
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        if a0.degree() == Some(0) {
            return vec![(f, 1)];
        }
        let mut parts = Vec::new();
        let mut b = f.exact_div(&a0);
        let mut c = df.exact_div(&a0);
        let mut i = 1;
        loop {
            let d = c.sub(&b.derivative());
            if d.is_zero() {
                if b.degree().map_or(false, |d| d > 0) {
                    parts.push((b.monic(), i));
                }
                break;
            }
            let g = b.gcd(&d);
            if g.degree().map_or(false, |d| d > 0) {
                parts.push((g.clone(), i));
            }
            b = b.exact_div(&g);
            c = d.exact_div(&g);
            i += 1;
            if b.degree() == Some(0) {
                break;
            }
        }
        parts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CycloField;

    #[test]
    fn divrem_round_trip() {
        let q = CycloField::rationals();
        let f = FPoly::from_int_coeffs(&q, &[2, 0, -3, 1]); // x^3 - 3x^2 + 2
        let g = FPoly::from_int_coeffs(&q, &[-1, 1]); // x - 1
        let (quot, rem) = f.divrem(&g);
        assert_eq!(quot.mul(&g).add(&rem), f);
        assert!(rem.is_zero()); // 1 is a root
    }

    #[test]
    fn gcd_detects_common_factor() {
        let q = CycloField::rationals();
        let f = FPoly::from_int_coeffs(&q, &[-1, 0, 1]); // x^2 - 1
        let g = FPoly::from_int_coeffs(&q, &[1, 1]); // x + 1
        assert_eq!(f.gcd(&g), g.monic());
    }

    #[test]
    fn squarefree_decomposition_multiplicities() {
        let q = CycloField::rationals();
        // (x-1)^2 (x+2)
        let f = FPoly::from_int_coeffs(&q, &[-1, 1]);
        let g = FPoly::from_int_coeffs(&q, &[2, 1]);
        let p = f.mul(&f).mul(&g);
        let parts = p.squarefree_decomposition();
        assert_eq!(parts.len(), 2);
        assert!(parts.contains(&(g.clone(), 1)));
        assert!(parts.contains(&(f.clone(), 2)));
    }

    #[test]
    fn eval_horner() {
        let q = CycloField::rationals();
        let f = FPoly::from_int_coeffs(&q, &[1, 2, 3]); // 3x^2 + 2x + 1
        let x = FieldElem::from_int(&q, 2);
        assert_eq!(f.eval(&x), FieldElem::from_int(&q, 17));
    }
}
