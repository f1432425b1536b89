//! Exact rational numbers used for exponents and valuations.
//!
//! `Rat` is backed by `num_rational::BigRational`, which already keeps
//! the invariants we need: always reduced, positive denominator, total
//! order consistent with `Q`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

/// Build a rational from a numerator/denominator pair of machine ints.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators of an exponent set.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rat>>(exps: I) -> BigInt {
    let mut lcm = BigInt::one();
    for e in exps {
        lcm = num_integer::lcm(lcm, e.denom().abs());
    }
    lcm
}

/// Render a rational as `p/q` (or just `p` for integers).
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p`, `-p` or `p/q` into a rational.
pub fn rat_from_str(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}
