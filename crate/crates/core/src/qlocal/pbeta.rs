//! The hypergeometric factor `P_beta` of the local model and one-point invariants.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use super::QlocalError;
use crate::corealg::model::ModelSpec;
use crate::corealg::novikov::CurveDegree;
use crate::corealg::pairing::integrate;
use crate::corealg::rational::Rational;
use crate::corealg::ring::CohClass;
use crate::corealg::zseries::ZSeries;

/// `(r + 2) d2 + 2r + n - 2`.
pub fn virtual_dimension(r: u32, n: usize, d2: u32) -> i64 {
    (r as i64 + 2) * d2 as i64 + 2 * r as i64 + n as i64 - 2
}

type PKey = (u32, u32, u32);

fn cache() -> &'static Mutex<HashMap<PKey, Arc<ZSeries>>> {
    static P: OnceLock<Mutex<HashMap<PKey, Arc<ZSeries>>>> = OnceLock::new();
    P.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Full expansion of `P_beta`; the product is homogeneous, so it is a finite sum.
pub(crate) fn p_beta_full(r: u32, d1: u32, d2: u32) -> Arc<ZSeries> {
    if let Some(p) = cache().lock().expect("P cache poisoned").get(&(r, d1, d2)) {
        return p.clone();
    }
    let model = ModelSpec::flop(r);
    let h = CohClass::monomial(model, 1, 0);
    let xi = CohClass::monomial(model, 0, 1);
    let xmh = &xi - &h;
    let e = r as i64 + 1;
    let mut s = ZSeries::one(model);
    for m in 1..=d1 as i64 {
        s = s.mul(&ZSeries::linear_power(&h, m, -e));
    }
    if d1 <= d2 {
        for m in 1..=(d2 - d1) as i64 {
            s = s.mul(&ZSeries::linear_power(&xmh, m, -e));
        }
    } else {
        for m in 0..(d1 - d2) as i64 {
            s = s.mul(&ZSeries::linear_power(&xmh, -m, e));
        }
    }
    for m in 1..=d2 as i64 {
        s = s.mul(&ZSeries::linear_power(&xi, m, -1));
    }
    let s = Arc::new(s);
    cache()
        .lock()
        .expect("P cache poisoned")
        .insert((r, d1, d2), s.clone());
    s
}

/// `P_beta` for `beta = (d1, d2) != 0`, keeping the coefficients of `z^{-1} .. z^{-z_order}`.
pub fn p_beta(r: u32, d1: u32, d2: u32, z_order: u32) -> Result<ZSeries, QlocalError> {
    if d1 == 0 && d2 == 0 {
        return Err(QlocalError::ZeroDegree);
    }
    let full = p_beta_full(r, d1, d2);
    let t = full.truncate(-(z_order as i64));
    if t.is_zero() {
        return Err(QlocalError::ZOrderTooSmall {
            z_order,
            leading: -full.max_exponent().unwrap_or(0) as u32,
        });
    }
    Ok(t)
}

/// `<tau_k cls>_{(d1, d2)}`, the `z^{-(k+2)}` coefficient of `integral cls * P_beta`.
pub fn one_point_local(
    r: u32,
    k: u32,
    cls: &CohClass,
    deg: CurveDegree,
) -> Result<Rational, QlocalError> {
    if !deg.is_effective() {
        return Ok(Rational::zero());
    }
    if deg.is_zero() {
        return Err(QlocalError::ZeroDegree);
    }
    if cls.model() != ModelSpec::flop(r) {
        return Err(QlocalError::WrongModel(cls.model()));
    }
    let full = p_beta_full(r, deg.d1 as u32, deg.d2 as u32);
    Ok(integrate(&(&full.coeff(-(k as i64 + 2)) * cls)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::rational::{rat, ratio};
    use crate::extremal::one_point_descendent;

    #[test]
    fn leading_terms() {
        let model = ModelSpec::flop(2);
        // d1 <= d2: 1 / ((d1!)^3 ((d2-d1)!)^3 d2!) z^{-4 d2}
        let p = p_beta_full(2, 1, 2);
        assert_eq!(p.max_exponent(), Some(-8));
        assert_eq!(p.coeff(-8), CohClass::one(model).scale(&ratio(1, 2)));
        // d1 > d2: leading coefficient proportional to (xi - h)^3
        let p = p_beta_full(2, 2, 0);
        let top = p.coeff(p.max_exponent().unwrap());
        let z3 = &(&CohClass::monomial(model, 0, 1) - &CohClass::monomial(model, 1, 0)).pow(3);
        assert_eq!(top, z3.scale(&rat(-1)).scale(&ratio(1, 8)));
        for (d1, d2) in [(0, 1), (1, 0), (3, 1), (2, 2)] {
            assert!(p_beta_full(2, d1, d2).max_exponent().unwrap() <= -2);
        }
    }

    #[test]
    fn truncation_error() {
        assert!(matches!(
            p_beta(2, 0, 1, 3),
            Err(QlocalError::ZOrderTooSmall { .. })
        ));
        assert!(p_beta(2, 0, 1, 4).is_ok());
    }

    #[test]
    fn point_class_one_point() {
        let model = ModelSpec::flop(2);
        let pt = CohClass::monomial(model, 2, 3);
        assert!(!one_point_local(2, 2, &pt, CurveDegree::new(0, 1))
            .unwrap()
            .is_zero());
        assert!(one_point_local(2, 1, &pt, CurveDegree::new(0, 1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn extremal_agreement() {
        for r in 1..=3 {
            let model = ModelSpec::flop(r);
            for d in 1..=4 {
                for l in 0..=r {
                    for k in 0..=2 * r {
                        let h = CohClass::monomial(model, l, 0);
                        let got = one_point_local(r, k, &h, CurveDegree::new(d, 0)).unwrap();
                        assert_eq!(
                            got,
                            one_point_descendent(r, k, l, d as u32),
                            "r={r} k={k} l={l} d={d}"
                        );
                        let hx = CohClass::monomial(model, l, 1);
                        assert!(one_point_local(r, k, &hx, CurveDegree::new(d, 0))
                            .unwrap()
                            .is_zero());
                    }
                }
            }
        }
    }
}
