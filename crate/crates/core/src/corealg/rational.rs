//! Exact rational helpers.
//!
//! Everything in the crate is computed over [`Rational`], an arbitrary
//! precision fraction. Signs that the formulas write as powers of `-1` are
//! produced by [`neg_one_pow`] from the integer exponent, never evaluated
//! through floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d`; panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^e` for any integer exponent.
pub fn neg_one_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Binomial coefficient `C(n, k)` with the convention `C(n, k) = 0` for
/// `k < 0` or `k > n` (with `n >= 0`).
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial coefficient `C(e, i) = e (e-1) ... (e-i+1) / i!`
/// for an arbitrary integer `e` and `i >= 0`.
pub fn gen_binom(e: i64, i: u32) -> Rational {
    let mut acc = Rational::one();
    for t in 0..i as i64 {
        acc *= rat(e - t);
        acc /= rat(t + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn pow_i64(base: i64, e: u32) -> Rational {
    rat(base).pow(e as i32)
}

/// Serializes as `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => BigInt::from_str(s).ok().map(Rational::from_integer),
    }
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(4, 2), BigInt::from(6));
        assert_eq!(binom(3, -1), BigInt::zero());
        assert_eq!(binom(2, 3), BigInt::zero());
        assert_eq!(gen_binom(-3, 2), rat(6));
        assert_eq!(gen_binom(-3, 3), rat(-10));
        assert_eq!(gen_binom(5, 2), rat(10));
    }

    #[test]
    fn signs() {
        assert_eq!(neg_one_pow(-3), rat(-1));
        assert_eq!(neg_one_pow(4), rat(1));
    }

    #[test]
    fn format_and_parse() {
        let q = ratio(-6, 4);
        assert_eq!(fmt_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(q));
        assert_eq!(fmt_rational(&rat(7)), "7");
        assert_eq!(parse_rational("1/0"), None);
    }
}
