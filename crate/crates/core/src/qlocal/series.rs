//! Generating series at fixed `d2`, the operator `delta_H`, and the flop
//! functional-equation check.

use rayon::prelude::*;

use super::engine::{big_stack_pool, GwEngine, Insertion};
use super::pbeta::virtual_dimension;
use super::QlocalError;
use crate::classical::flop_transform;
use crate::corealg::novikov::{default_fit_bounds, fit_ratfn, CurveDegree, NovikovSeries, RatFn};
use crate::corealg::rational::{rat, Rational};
use crate::corealg::ring::{CohClass, Monomial};

/// The `d2` fixed by the dimension constraint.
pub fn admissible_d2(r: u32, insertions: &[Insertion]) -> Result<u32, QlocalError> {
    let mut total = 0i64;
    for (t, ins) in insertions.iter().enumerate() {
        let deg = ins
            .cls
            .homogeneous_degree()
            .ok_or(QlocalError::NotHomogeneous(t))?;
        total += (deg + ins.k) as i64;
    }
    let excess = total - virtual_dimension(r, insertions.len(), 0);
    let step = r as i64 + 2;
    if excess < 0 || excess % step != 0 {
        return Err(QlocalError::NoAdmissibleD2);
    }
    Ok((excess / step) as u32)
}

/// Coefficients for `d1 = 0 ..= d1_max` at the admissible `d2`.
pub fn n_point_series(
    r: u32,
    insertions: &[Insertion],
    d1_max: u32,
) -> Result<NovikovSeries, QlocalError> {
    n_point_series_with(&GwEngine::global(r), insertions, d1_max)
}

pub fn n_point_series_with(
    engine: &GwEngine,
    insertions: &[Insertion],
    d1_max: u32,
) -> Result<NovikovSeries, QlocalError> {
    let d2 = admissible_d2(engine.r(), insertions)?;
    let coeffs: Result<Vec<Rational>, QlocalError> = big_stack_pool().install(|| {
        (0..=d1_max)
            .into_par_iter()
            .map(|d1| engine.invariant_here(insertions, CurveDegree::new(d1 as i64, d2 as i64)))
            .collect()
    });
    Ok(NovikovSeries::new(d2, coeffs?))
}

/// A divisor `a h + b xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub h: Rational,
    pub xi: Rational,
}

impl Divisor {
    pub fn new(h: Rational, xi: Rational) -> Self {
        Divisor { h, xi }
    }

    /// Reads the coefficients of a degree-one class.
    pub fn from_class(c: &CohClass) -> Option<Self> {
        if c.homogeneous_degree().is_some_and(|d| d != 1) {
            return None;
        }
        Some(Divisor {
            h: c.coeff(Monomial::new(1, 0)),
            xi: c.coeff(Monomial::new(0, 1)),
        })
    }

    /// `(H . beta)` with `(h . l) = 1`, `(h . g) = 0`, `(xi . l) = 0`, `(xi . g) = 1`.
    pub fn degree_on(&self, deg: CurveDegree) -> Rational {
        &self.h * rat(deg.d1) + &self.xi * rat(deg.d2)
    }

    /// Image under the correspondence: `h -> xi' - h'`, `xi -> xi'`.
    pub fn transformed(&self) -> Self {
        Divisor {
            h: -&self.h,
            xi: &self.h + &self.xi,
        }
    }
}

/// Multiplies the `q1^{d1} q2^{d2}` coefficient by `(H . (d1, d2))`.
pub fn delta_h(s: &NovikovSeries, div: &Divisor) -> NovikovSeries {
    let coeffs = s
        .coeffs
        .iter()
        .enumerate()
        .map(|(d1, c)| c * div.degree_on(CurveDegree::new(d1 as i64, s.d2 as i64)))
        .collect();
    NovikovSeries::new(s.d2, coeffs)
}

/// `delta_H` on a closed form: `(H . l) q1 d/dq1 + (H . g) d2`.
pub fn delta_h_ratfn(f: &RatFn, div: &Divisor) -> RatFn {
    f.theta()
        .scale(&div.h)
        .add(&f.scale(&(&div.xi * rat(f.q2power as i64))))
}

pub fn transform_insertions(insertions: &[Insertion]) -> Vec<Insertion> {
    insertions
        .iter()
        .map(|i| Insertion::new(i.k, flop_transform(&i.cls)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlopInvarianceReport {
    pub r: u32,
    pub d2: u32,
    pub insertions: Vec<Insertion>,
    pub transformed: Vec<Insertion>,
    pub series: NovikovSeries,
    pub transformed_series: NovikovSeries,
    pub fit: RatFn,
    pub transformed_fit: RatFn,
    /// `fit` after `q1 -> 1/q1'`, `q2 -> q1' q2'`.
    pub continued: RatFn,
    pub passed: bool,
}

/// Fits both sides at the default bounds for `d1_max` and compares.
pub fn verify_flop_invariance(
    r: u32,
    insertions: &[Insertion],
    d1_max: u32,
) -> Result<FlopInvarianceReport, QlocalError> {
    let (p, q, g) = default_fit_bounds(d1_max as usize);
    verify_flop_invariance_with(&GwEngine::global(r), insertions, d1_max, (p, q, g))
}

pub fn verify_flop_invariance_with(
    engine: &GwEngine,
    insertions: &[Insertion],
    d1_max: u32,
    (deg_p, deg_q, guard): (usize, usize, usize),
) -> Result<FlopInvarianceReport, QlocalError> {
    let transformed = transform_insertions(insertions);
    let series = n_point_series_with(engine, insertions, d1_max)?;
    let transformed_series = n_point_series_with(engine, &transformed, d1_max)?;
    let fit = fit_ratfn(&series, deg_p, deg_q, guard)?;
    let transformed_fit = fit_ratfn(&transformed_series, deg_p, deg_q, guard)?;
    let continued = fit.continued()?;
    let passed = continued == transformed_fit;
    Ok(FlopInvarianceReport {
        r: engine.r(),
        d2: series.d2,
        insertions: insertions.to_vec(),
        transformed,
        series,
        transformed_series,
        fit,
        transformed_fit,
        continued,
        passed,
    })
}
