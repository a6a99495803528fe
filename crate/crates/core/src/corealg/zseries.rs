//! Finite Laurent expansions in `z` with cohomology-class coefficients.
//!
//! Coefficient classes are nilpotent away from degree zero, so every factor
//! `(D + m z)^e` with `D` of positive degree has a finite expansion, for any
//! integer `e`. Products of such factors stay finite and no truncation is
//! needed; [`ZSeries::truncate`] exists for callers that only want the tail.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use super::model::ModelSpec;
use super::rational::{gen_binom, rat, Rational};
use super::ring::CohClass;

#[derive(Clone, PartialEq, Eq)]
pub struct ZSeries {
    model: ModelSpec,
    coeffs: BTreeMap<i64, CohClass>,
}

impl ZSeries {
    pub fn zero(model: ModelSpec) -> Self {
        ZSeries {
            model,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(model: ModelSpec) -> Self {
        Self::monomial(CohClass::one(model), 0)
    }

    /// `c * z^e`.
    pub fn monomial(c: CohClass, e: i64) -> Self {
        let mut s = Self::zero(c.model());
        if !c.is_zero() {
            s.coeffs.insert(e, c);
        }
        s
    }

    /// Expansion of `(d + m z)^e`. For `m == 0` the exponent must be non-negative.
    pub fn linear_power(d: &CohClass, m: i64, e: i64) -> Self {
        let model = d.model();
        if m == 0 {
            assert!(e >= 0, "negative power of a nilpotent class");
            return Self::monomial(d.pow(e as u32), 0);
        }
        let mut s = Self::zero(model);
        let mz = rat(m);
        let mut dpow = CohClass::one(model);
        let mut i = 0u32;
        while !dpow.is_zero() {
            if e >= 0 && i as i64 > e {
                break;
            }
            let c = gen_binom(e, i) * mz.pow((e - i as i64) as i32);
            s.add_term(e - i as i64, &dpow.scale(&c));
            dpow = &dpow * d;
            i += 1;
        }
        s
    }

    pub fn model(&self) -> ModelSpec {
        self.model
    }

    fn add_term(&mut self, e: i64, c: &CohClass) {
        if c.is_zero() {
            return;
        }
        let entry = self
            .coeffs
            .entry(e)
            .or_insert_with(|| CohClass::zero(c.model()));
        *entry = &*entry + c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64) -> CohClass {
        self.coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| CohClass::zero(self.model))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CohClass)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Drops every term below `z^{lowest}`.
    pub fn truncate(&self, lowest: i64) -> Self {
        ZSeries {
            model: self.model,
            coeffs: self
                .coeffs
                .range(lowest..)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.model);
        }
        ZSeries {
            model: self.model,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.scale(s))).collect(),
        }
    }

    pub fn mul_class(&self, c: &CohClass) -> Self {
        let mut s = Self::zero(self.model);
        for (e, a) in &self.coeffs {
            s.add_term(*e, &(a * c));
        }
        s
    }

    pub fn mul(&self, other: &ZSeries) -> Self {
        assert_eq!(self.model, other.model, "series from different models");
        let mut s = Self::zero(self.model);
        for (ea, a) in &self.coeffs {
            for (eb, b) in &other.coeffs {
                s.add_term(ea + eb, &(a * b));
            }
        }
        s
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.model), |acc, _| acc.mul(self))
    }
}

impl fmt::Debug for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(e, c)| format!("({c})*z^{e}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `1 / (d + m z)` for `m != 0`.
pub fn inverse_linear(d: &CohClass, m: i64) -> ZSeries {
    ZSeries::linear_power(d, m, -1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::rational::ratio;

    #[test]
    fn inverse_cube_r2() {
        let m = ModelSpec::z_only(2);
        let h = CohClass::monomial(m, 1, 0);
        let s = ZSeries::linear_power(&h, 1, -3);
        assert_eq!(s.coeff(-3), CohClass::one(m));
        assert_eq!(s.coeff(-4), h.scale(&rat(-3)));
        assert_eq!(s.coeff(-5), h.pow(2).scale(&rat(6)));
        assert_eq!(s.coeff(-6), CohClass::zero(m));
    }

    #[test]
    fn inverse_times_linear_is_one() {
        let m = ModelSpec::flop(2);
        let d = &CohClass::monomial(m, 0, 1) - &CohClass::monomial(m, 1, 0);
        for k in [1, 2, -3] {
            let p = ZSeries::linear_power(&d, k, 1).mul(&inverse_linear(&d, k));
            assert_eq!(p, ZSeries::one(m));
        }
        let s = ZSeries::linear_power(&d, 2, -2).mul(&ZSeries::linear_power(&d, 2, 2));
        assert_eq!(s, ZSeries::one(m));
        assert_eq!(
            inverse_linear(&CohClass::zero(m), 2).coeff(-1),
            CohClass::one(m).scale(&ratio(1, 2))
        );
    }
}
