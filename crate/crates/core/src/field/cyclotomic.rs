//! Cyclotomic polynomials over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// All divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0);
    let mut divs = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            divs.push(i);
            if i != n / i {
                divs.push(n / i);
            }
        }
        i += 1;
    }
    divs.sort_unstable();
    divs
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn x_n_minus_1(n: u64) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    coeffs[0] = -BigInt::one();
    coeffs[n as usize] = BigInt::one();
    coeffs
}

/// Exact division of integer polynomials; panics on nonzero remainder.
fn exact_div(mut num: Vec<BigInt>, den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    assert!(num.len() > dd);
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = num[i + dd].clone();
        quot[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            num[i + j] -= &c * d;
        }
    }
    assert!(num.iter().all(Zero::is_zero), "division not exact");
    quot
}

/// The n-th cyclotomic polynomial `Phi_n` as integer coefficients,
/// lowest degree first. Computed by dividing `x^n - 1` by `Phi_d` for
/// every proper divisor `d` of `n`.
pub fn cyclotomic_poly(n: u64) -> Vec<BigInt> {
    assert!(n > 0, "cyclotomic index must be positive");
    if n == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    let mut result = x_n_minus_1(n);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        result = exact_div(result, &phi_d);
    }
    result
}
