//! Novikov series at a fixed `q2`-degree, their rational closed forms, and
//! the continuation `q1 -> 1/q1'`, `q2 -> q1' q2'` across the flop.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::linalg::QMatrix;
use super::poly::QPoly;
use super::rational::{rat, Rational};

/// A curve class `d1 * l + d2 * g`, `l` the line in the exceptional locus and `g` the fibre line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveDegree {
    pub d1: i64,
    pub d2: i64,
}

impl CurveDegree {
    pub fn new(d1: i64, d2: i64) -> Self {
        CurveDegree { d1, d2 }
    }

    pub fn is_effective(&self) -> bool {
        self.d1 >= 0 && self.d2 >= 0
    }

    pub fn is_zero(&self) -> bool {
        self.d1 == 0 && self.d2 == 0
    }

    /// The same curve class written in the basis of the flopped side.
    pub fn transformed(&self) -> Self {
        CurveDegree {
            d1: self.d2 - self.d1,
            d2: self.d2,
        }
    }
}

impl fmt::Display for CurveDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.d1, self.d2)
    }
}

/// `sum_{d1 <= cutoff} coeffs[d1] q1^d1`, all at `q2^d2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovSeries {
    pub d2: u32,
    pub coeffs: Vec<Rational>,
}

impl NovikovSeries {
    pub fn new(d2: u32, coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series carries at least the d1 = 0 coefficient"
        );
        NovikovSeries { d2, coeffs }
    }

    pub fn from_i64(d2: u32, coeffs: &[i64]) -> Self {
        Self::new(d2, coeffs.iter().map(|c| rat(*c)).collect())
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d1: usize) -> Rational {
        self.coeffs.get(d1).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        NovikovSeries {
            d2: self.d2,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("cutoff {cutoff} is below deg_p + deg_q + guard = {needed}")]
    CutoffTooSmall { cutoff: usize, needed: usize },
    #[error("guard {0} is below the minimum of 3")]
    GuardTooSmall(usize),
    #[error("no rational function with numerator degree <= {deg_p} and denominator degree <= {deg_q} fits")]
    NoFit { deg_p: usize, deg_q: usize },
    #[error("fit at degrees ({deg_p}, {deg_q}) disagrees with the series at q1^{order}; raise the bounds or the cutoff")]
    ValidationFailed {
        deg_p: usize,
        deg_q: usize,
        order: usize,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContinuationError {
    #[error("continuation has a pole of order {0} at q1' = 0")]
    PoleAtOrigin(usize),
}

/// `num(q1) / den(q1) * q2^q2power`, reduced, with `den(0) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: QPoly,
    den: QPoly,
    pub q2power: u32,
}

impl RatFn {
    /// Reduces `num / den`; panics if `den` is zero.
    pub fn new(num: QPoly, den: QPoly, q2power: u32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn {
                num,
                den: QPoly::one(),
                q2power,
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num.div_rem(&g).0, den.div_rem(&g).0);
        let v = den.valuation().unwrap_or(0);
        assert!(
            v == 0,
            "rational function with q1 in the reduced denominator"
        );
        let c = den.coeff(0).recip();
        num = num.scale(&c);
        den = den.scale(&c);
        RatFn { num, den, q2power }
    }

    pub fn poly(p: QPoly, q2power: u32) -> Self {
        Self::new(p, QPoly::one(), q2power)
    }

    pub fn zero(q2power: u32) -> Self {
        Self::poly(QPoly::zero(), q2power)
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Coefficients of `q1^0 .. q1^cutoff`.
    pub fn expand(&self, cutoff: usize) -> NovikovSeries {
        NovikovSeries::new(self.q2power, self.num.series_div(&self.den, cutoff + 1))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.num.scale(s), self.den.clone(), self.q2power)
    }

    pub fn add(&self, other: &RatFn) -> Self {
        assert_eq!(
            self.q2power, other.q2power,
            "adding series at different q2-degrees"
        );
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(num, &self.den * &other.den, self.q2power)
    }

    pub fn sub(&self, other: &RatFn) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    /// `q1 d/dq1`.
    pub fn theta(&self) -> Self {
        let num = &(&self.num.theta() * &self.den) - &(&self.num * &self.den.theta());
        Self::new(num, &self.den * &self.den, self.q2power)
    }

    /// Substitutes `q1 -> 1/q1'` and `q2 -> q1' q2'`.
    pub fn continued(&self) -> Result<RatFn, ContinuationError> {
        let Some(deg_n) = self.num.degree() else {
            return Ok(self.clone());
        };
        let deg_d = self.den.degree().unwrap_or(0);
        let e = deg_d as i64 - deg_n as i64 + self.q2power as i64;
        if e < 0 {
            return Err(ContinuationError::PoleAtOrigin((-e) as usize));
        }
        Ok(Self::new(
            self.num.reverse().shift(e as usize),
            self.den.reverse(),
            self.q2power,
        ))
    }

    /// The `q1` part alone, e.g. `q1^2/(1+q1)`.
    pub fn fmt_q1(&self) -> String {
        let num = self.num.fmt_var("q1");
        if self.den.is_one_poly() {
            return num;
        }
        let num = if self.num.term_count() > 1 {
            format!("({num})")
        } else {
            num
        };
        format!("{num}/({})", self.den.fmt_var("q1"))
    }
}

impl QPoly {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.coeff(0).is_one()
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = self.fmt_q1();
        let q2 = match self.q2power {
            0 => return write!(f, "{base}"),
            1 => "q2".to_string(),
            p => format!("q2^{p}"),
        };
        if self.is_zero() {
            write!(f, "0")
        } else if base == "1" {
            write!(f, "{q2}")
        } else if self.den.is_one_poly() && self.num.term_count() == 1 {
            write!(f, "{base}*{q2}")
        } else {
            write!(f, "({base})*{q2}")
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

/// Fits `num / den` with `deg num <= deg_p`, `deg den <= deg_q`, `den(0) = 1`
/// to the first `deg_p + deg_q + 1` coefficients and checks the rest.
pub fn fit_ratfn(
    s: &NovikovSeries,
    deg_p: usize,
    deg_q: usize,
    guard: usize,
) -> Result<RatFn, FitError> {
    if guard < 3 {
        return Err(FitError::GuardTooSmall(guard));
    }
    let needed = deg_p + deg_q + guard;
    if s.cutoff() < needed {
        return Err(FitError::CutoffTooSmall {
            cutoff: s.cutoff(),
            needed,
        });
    }
    // sum_{j=1}^{deg_q} b_j s_{k-j} = -s_k for k in deg_p+1 ..= deg_p+deg_q.
    let a = QMatrix::from_fn(deg_q, deg_q, |row, col| {
        let k = deg_p + 1 + row;
        let j = col + 1;
        if j <= k {
            s.coeff(k - j)
        } else {
            Rational::zero()
        }
    });
    let rhs: Vec<Rational> = (0..deg_q).map(|row| -s.coeff(deg_p + 1 + row)).collect();
    let b = a.solve(&rhs).ok_or(FitError::NoFit { deg_p, deg_q })?;
    let mut den = vec![Rational::one()];
    den.extend(b);
    let den = QPoly::new(den);
    let num = (&den * &QPoly::new(s.coeffs.clone())).truncate(deg_p + 1);
    let f = RatFn::new(num, den, s.d2);
    let check = f.expand(s.cutoff());
    if let Some(order) = (0..=s.cutoff()).find(|&i| check.coeffs[i] != s.coeffs[i]) {
        return Err(FitError::ValidationFailed {
            deg_p,
            deg_q,
            order,
        });
    }
    Ok(f)
}

/// Degree bounds used when the caller has no better guess.
pub fn default_fit_bounds(cutoff: usize) -> (usize, usize, usize) {
    let d = (cutoff / 2).saturating_sub(2);
    (d, d, 3)
}

pub fn fit_ratfn_default(s: &NovikovSeries) -> Result<RatFn, FitError> {
    let (p, q, g) = default_fit_bounds(s.cutoff());
    fit_ratfn(s, p, q, g)
}

/// Continuation of a fitted function; see [`RatFn::continued`].
pub fn continue_ratfn(f: &RatFn) -> Result<RatFn, ContinuationError> {
    f.continued()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(num: &[i64], den: &[i64], q2: u32) -> RatFn {
        RatFn::new(QPoly::from_i64(num), QPoly::from_i64(den), q2)
    }

    #[test]
    fn fits() {
        let s = NovikovSeries::from_i64(1, &[0, 0, 1, -1, 1, -1, 1, -1, 1]);
        let f = fit_ratfn_default(&s).unwrap();
        assert_eq!(f, rf(&[0, 0, 1], &[1, 1], 1));
        assert_eq!(f.fmt_q1(), "q1^2/(1+q1)");
        let f =
            fit_ratfn_default(&NovikovSeries::from_i64(1, &[1, 1, 0, 0, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(f.fmt_q1(), "1+q1");
        assert!(fit_ratfn_default(&NovikovSeries::from_i64(1, &[0; 9]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn validation_failure() {
        // 1/(1-q)^5 needs a denominator of degree 5.
        let s = NovikovSeries::new(
            0,
            (0..=9)
                .map(|d| rat(((d + 1) * (d + 2) * (d + 3) * (d + 4) / 24) as i64))
                .collect(),
        );
        assert!(matches!(
            fit_ratfn(&s, 2, 2, 3),
            Err(FitError::ValidationFailed { .. })
        ));
        assert!(matches!(
            fit_ratfn(&s, 4, 4, 3),
            Err(FitError::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn continuation() {
        let f = rf(&[0, 0, 1], &[1, 1], 1);
        assert_eq!(f.continued().unwrap(), rf(&[1], &[1, 1], 1));
        assert_eq!(f.continued().unwrap().continued().unwrap(), f);
        assert_eq!(
            rf(&[5], &[1], 2).continued().unwrap(),
            rf(&[0, 0, 5], &[1], 2)
        );
        // q/(1+q) -> -(-1) - q/(1+q) = 1/(1+q)
        let g = rf(&[0, 1], &[1, 1], 0);
        assert_eq!(g.continued().unwrap(), rf(&[1], &[1, 1], 0));
        assert_eq!(
            rf(&[0, 0, 1], &[1], 0).continued(),
            Err(ContinuationError::PoleAtOrigin(2))
        );
    }

    #[test]
    fn theta() {
        let f = rf(&[0, 0, 1], &[1, 1], 1);
        assert_eq!(f.theta(), rf(&[0, 0, 2, 1], &[1, 2, 1], 1));
    }

    #[test]
    fn transformed_degree() {
        assert_eq!(
            CurveDegree::new(2, 1).transformed(),
            CurveDegree::new(-1, 1)
        );
        assert_eq!(
            CurveDegree::new(2, 1).transformed().transformed(),
            CurveDegree::new(2, 1)
        );
    }
}
