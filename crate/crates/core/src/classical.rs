//! Degree-zero intersection theory across a flop or flip: the correspondence
//! as a linear map, its isometry property, the triple-product defect and the
//! excess-bundle Chern identities.

use num_traits::Zero;
use thiserror::Error;

use crate::corealg::linalg::QMatrix;
use crate::corealg::model::{ModelKind, ModelSpec};
use crate::corealg::pairing::{gram_and_dual, integrate};
use crate::corealg::rational::{binom, neg_one_pow, Rational};
use crate::corealg::ring::{CohClass, Monomial, Ring};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("{0} is not a local flop or flip model")]
    NotLocal(ModelSpec),
    #[error("{0} is not a flop model")]
    NotFlop(ModelSpec),
    #[error("class is not homogeneous")]
    NotHomogeneous,
    #[error("classes live in different models")]
    ModelMismatch,
    #[error("degrees {degrees:?} are not admissible: need each <= {max} and sum = {sum}")]
    DegreeConstraint {
        degrees: Vec<u32>,
        max: u32,
        sum: u32,
    },
    #[error("degree {degree} is out of range 0..={max}")]
    DegreeOutOfRange { degree: u32, max: u32 },
}

/// Matrix of the correspondence `h^i xi^j -> (xi' - h')^i xi'^j` from a
/// local model to its primed model. Column `j` holds the image of basis element `j`.
#[derive(Clone, Debug)]
pub struct FlopMap {
    pub source: ModelSpec,
    pub target: ModelSpec,
    pub matrix: QMatrix,
}

impl FlopMap {
    pub fn new(model: ModelSpec) -> Result<Self, ClassicalError> {
        if !model.is_local() {
            return Err(ClassicalError::NotLocal(model));
        }
        let target = model.primed();
        let src = Ring::get(model);
        let h = CohClass::monomial(target, 1, 0);
        let xi = CohClass::monomial(target, 0, 1);
        let xmh = &xi - &h;
        let n = src.len();
        let images: Vec<CohClass> = src
            .basis()
            .iter()
            .map(|m| &xmh.pow(m.a) * &xi.pow(m.b))
            .collect();
        let matrix = QMatrix::from_fn(Ring::get(target).len(), n, |i, j| {
            images[j].coords()[i].clone()
        });
        Ok(FlopMap {
            source: model,
            target,
            matrix,
        })
    }

    pub fn apply(&self, c: &CohClass) -> CohClass {
        assert_eq!(
            c.model(),
            self.source,
            "class is not in the source model of this map"
        );
        let mut out = vec![Rational::zero(); self.matrix.rows()];
        for (j, v) in c.terms() {
            for (i, o) in out.iter_mut().enumerate() {
                let m = &self.matrix[(i, j)];
                if !m.is_zero() {
                    *o += m * v;
                }
            }
        }
        CohClass::from_coords(self.target, out)
    }
}

/// Image of `c` under the correspondence, in the primed model.
pub fn flop_transform(c: &CohClass) -> CohClass {
    FlopMap::new(c.model())
        .expect("flop_transform needs a local model")
        .apply(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometryReport {
    pub model: ModelSpec,
    pub passed: bool,
    /// First basis pair `(a, b)` with `(Ma . Mb) != (a . b)`.
    pub first_failure: Option<(Monomial, Monomial)>,
}

pub fn verify_isometry(model: ModelSpec) -> Result<IsometryReport, ClassicalError> {
    if model.kind != ModelKind::FlopLocal {
        return Err(ClassicalError::NotFlop(model));
    }
    let map = FlopMap::new(model)?;
    Ok(verify_isometry_with(model, &map.matrix))
}

/// Checks `M^T G M = G` for an arbitrary square matrix `M` over the basis of `model`.
pub fn verify_isometry_with(model: ModelSpec, m: &QMatrix) -> IsometryReport {
    let gram = gram_and_dual(model).expect("local Gram matrix is invertible");
    let g = &gram.matrix;
    let lhs = &(&m.transpose() * g) * m;
    let basis = Ring::get(model).basis().to_vec();
    let n = basis.len();
    let first_failure = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| lhs[(a, b)] != g[(a, b)])
        .map(|(a, b)| (basis[a], basis[b]));
    IsometryReport {
        model,
        passed: first_failure.is_none(),
        first_failure,
    }
}

/// Class of the exceptional locus, `(xi - h)^{r'+1}`.
pub fn z_class(model: ModelSpec) -> CohClass {
    let xmh = &CohClass::monomial(model, 0, 1) - &CohClass::monomial(model, 1, 0);
    xmh.pow(model.rprime + 1)
}

/// `(a . h^{r-l})_Z = integral of a * h^{r-l} * [Z]`.
pub fn z_pairing(a: &CohClass, l: u32) -> Rational {
    let model = a.model();
    if l > model.r {
        return Rational::zero();
    }
    let hz = &CohClass::monomial(model, model.r - l, 0) * &z_class(model);
    integrate(&(a * &hz))
}

fn check_triple(a: [&CohClass; 3]) -> Result<[u32; 3], ClassicalError> {
    let model = a[0].model();
    if !model.is_local() {
        return Err(ClassicalError::NotLocal(model));
    }
    if a.iter().any(|c| c.model() != model) {
        return Err(ClassicalError::ModelMismatch);
    }
    let mut degrees = [0u32; 3];
    for (d, c) in degrees.iter_mut().zip(a) {
        *d = match c.homogeneous_degree() {
            Some(d) => d,
            None if c.is_zero() => 0,
            None => return Err(ClassicalError::NotHomogeneous),
        };
    }
    let max = model.r.min(model.rprime);
    let sum = model.r + model.rprime + 1;
    if degrees.iter().any(|d| *d > max) || degrees.iter().sum::<u32>() != sum {
        return Err(ClassicalError::DegreeConstraint {
            degrees: degrees.to_vec(),
            max,
            sum,
        });
    }
    Ok(degrees)
}

/// `(Fa1 . Fa2 . Fa3) - (a1 . a2 . a3)`.
pub fn triple_defect(
    a1: &CohClass,
    a2: &CohClass,
    a3: &CohClass,
) -> Result<Rational, ClassicalError> {
    check_triple([a1, a2, a3])?;
    let map = FlopMap::new(a1.model())?;
    let lhs = integrate(&(&(&map.apply(a1) * &map.apply(a2)) * &map.apply(a3)));
    let rhs = integrate(&(&(a1 * a2) * a3));
    Ok(lhs - rhs)
}

/// `(-1)^{r'} * prod_i (a_i . h^{r - l_i})_Z`, the closed form of [`triple_defect`].
pub fn predicted_defect(
    a1: &CohClass,
    a2: &CohClass,
    a3: &CohClass,
) -> Result<Rational, ClassicalError> {
    let degrees = check_triple([a1, a2, a3])?;
    let mut acc = neg_one_pow(a1.model().rprime as i64);
    for (c, l) in [a1, a2, a3].into_iter().zip(degrees) {
        acc *= z_pairing(c, l);
    }
    Ok(acc)
}

/// Degree-`r'` part of `(1 - x)^{e} (1 - x - y)^{-1}` in `Q[x, y]/(x^{r+1}, y^{r'+1})`.
pub fn excess_chern_polynomial(r: u32, rprime: u32, exponent: u32) -> CohClass {
    let model = ModelSpec::e_only(r, rprime);
    let x = CohClass::monomial(model, 1, 0);
    let x_plus_y = &x + &CohClass::monomial(model, 0, 1);
    let mut acc = CohClass::zero(model);
    for j in 0..=exponent.min(rprime) {
        let c = Rational::from_integer(binom(exponent as i64, j as i64)) * neg_one_pow(j as i64);
        let term = &x.pow(j) * &x_plus_y.pow(rprime - j);
        acc = &acc + &term.scale(&c);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessChernReport {
    pub r: u32,
    pub rprime: u32,
    pub top_chern: CohClass,
    pub expected: CohClass,
    pub identity_holds: bool,
    /// `(l, sign)` with `sign` the `x^r y^{r'-r+l}` coefficient of `c_top * x^l`.
    pub pushforward_signs: Vec<(u32, Rational)>,
    pub pushforward_holds: bool,
}

impl ExcessChernReport {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.pushforward_holds
    }
}

/// The excess bundle on `E = P^r x P^{r'}` has Chern polynomial
/// `(1 - x)^{r'+1} (1 - x - y)^{-1}`; its top part is `sum_t (-1)^t x^t y^{r'-t}`.
pub fn excess_chern_check(r: u32, rprime: u32) -> ExcessChernReport {
    let model = ModelSpec::e_only(r, rprime);
    let top_chern = excess_chern_polynomial(r, rprime, rprime + 1);
    let expected = (0..=rprime.min(r)).fold(CohClass::zero(model), |acc, t| {
        &acc + &CohClass::monomial(model, t, rprime - t).scale(&neg_one_pow(t as i64))
    });
    let identity_holds = top_chern == expected;
    let mut pushforward_signs = Vec::new();
    let mut pushforward_holds = true;
    for l in r.saturating_sub(rprime)..=r {
        let prod = &top_chern * &CohClass::monomial(model, l, 0);
        let sign = prod.coeff(Monomial::new(r, rprime + l - r));
        pushforward_holds &= sign == neg_one_pow((r - l) as i64);
        pushforward_signs.push((l, sign));
    }
    ExcessChernReport {
        r,
        rprime,
        top_chern,
        expected,
        identity_holds,
        pushforward_signs,
        pushforward_holds,
    }
}

/// `(a . h^{r-l})_Z * (x^l - (-y)^l) / (x + y)` on `E = P^r x P^r`.
pub fn exceptional_correction(a: &CohClass) -> Result<CohClass, ClassicalError> {
    let model = a.model();
    if model.kind != ModelKind::FlopLocal {
        return Err(ClassicalError::NotFlop(model));
    }
    let e = ModelSpec::e_only(model.r, model.r);
    let l = match a.homogeneous_degree() {
        Some(l) => l,
        None if a.is_zero() => return Ok(CohClass::zero(e)),
        None => return Err(ClassicalError::NotHomogeneous),
    };
    if l > model.r {
        return Err(ClassicalError::DegreeOutOfRange {
            degree: l,
            max: model.r,
        });
    }
    let quotient = (0..l).fold(CohClass::zero(e), |acc, t| {
        &acc + &CohClass::monomial(e, l - 1 - t, t).scale(&neg_one_pow(t as i64))
    });
    Ok(quotient.scale(&z_pairing(a, l)))
}

/// All basis triples `(a1 <= a2 <= a3)` of admissible degrees in a local model.
pub fn admissible_basis_triples(model: ModelSpec) -> Vec<[Monomial; 3]> {
    let basis = Ring::get(model).basis().to_vec();
    let max = model.r.min(model.rprime);
    let sum = model.r + model.rprime + 1;
    let mut out = Vec::new();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            for k in j..basis.len() {
                let t = [basis[i], basis[j], basis[k]];
                if t.iter().all(|m| m.degree() <= max)
                    && t.iter().map(Monomial::degree).sum::<u32>() == sum
                {
                    out.push(t);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectSweep {
    pub model: ModelSpec,
    pub checked: usize,
    pub mismatches: Vec<[Monomial; 3]>,
}

/// Compares [`triple_defect`] with [`predicted_defect`] on every admissible basis triple.
pub fn defect_sweep(model: ModelSpec) -> DefectSweep {
    let triples = admissible_basis_triples(model);
    let mut mismatches = Vec::new();
    for t in &triples {
        let c = t.map(|m| CohClass::monomial(model, m.a, m.b));
        let got = triple_defect(&c[0], &c[1], &c[2]).expect("admissible triple");
        let want = predicted_defect(&c[0], &c[1], &c[2]).expect("admissible triple");
        if got != want {
            mismatches.push(*t);
        }
    }
    DefectSweep {
        model,
        checked: triples.len(),
        mismatches,
    }
}

/// A local model for ranks `(r, r')`: a flop when they agree, a flip otherwise.
pub fn local_model(r: u32, rprime: u32) -> ModelSpec {
    if r == rprime {
        ModelSpec::flop(r)
    } else {
        ModelSpec::flip(r, rprime)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::rational::rat;

    fn m(model: ModelSpec, a: u32, b: u32) -> CohClass {
        CohClass::monomial(model, a, b)
    }

    #[test]
    fn transform_generators() {
        let x = ModelSpec::flop(2);
        assert_eq!(flop_transform(&m(x, 1, 0)), &m(x, 0, 1) - &m(x, 1, 0));
        assert_eq!(flop_transform(&m(x, 2, 3)), m(x, 2, 3));
        for i in 0..Ring::get(x).len() {
            let b = CohClass::basis_element(x, i);
            assert_eq!(flop_transform(&flop_transform(&b)), b);
        }
    }

    #[test]
    fn isometry() {
        assert!(verify_isometry(ModelSpec::flop(1)).unwrap().passed);
        let x = ModelSpec::flop(2);
        assert!(verify_isometry_with(x, &QMatrix::identity(12)).passed);
        let lhs = integrate(&(&flop_transform(&m(x, 1, 0)) * &flop_transform(&m(x, 2, 2))));
        assert!(lhs.is_zero());
    }

    #[test]
    fn defects() {
        let x = ModelSpec::flop(1);
        assert_eq!(
            triple_defect(&m(x, 1, 0), &m(x, 1, 0), &m(x, 1, 0)).unwrap(),
            rat(-1)
        );
        let x = ModelSpec::flop(2);
        assert_eq!(
            triple_defect(&m(x, 1, 0), &m(x, 2, 0), &m(x, 2, 0)).unwrap(),
            rat(1)
        );
        assert_eq!(
            triple_defect(&m(x, 0, 1), &m(x, 1, 1), &m(x, 1, 1)).unwrap(),
            rat(0)
        );
        assert_eq!(
            integrate(&(&(&m(x, 0, 1) * &m(x, 1, 1)) * &m(x, 1, 1))),
            rat(1)
        );
        assert!(matches!(
            triple_defect(&m(x, 1, 0), &m(x, 1, 0), &m(x, 1, 0)),
            Err(ClassicalError::DegreeConstraint { .. })
        ));
    }

    #[test]
    fn flip_defect_sweep() {
        let s = defect_sweep(ModelSpec::flip(2, 3));
        assert!(s.checked > 0);
        assert!(s.mismatches.is_empty());
    }

    #[test]
    fn excess_chern() {
        let rep = excess_chern_check(2, 2);
        assert!(rep.passed());
        let e = ModelSpec::e_only(2, 2);
        assert_eq!(rep.top_chern, &(&m(e, 0, 2) - &m(e, 1, 1)) + &m(e, 2, 0));
        assert_eq!(rep.pushforward_signs[1], (1, rat(-1)));
        let e = ModelSpec::e_only(1, 1);
        assert_eq!(
            excess_chern_check(1, 1).top_chern,
            &m(e, 0, 1) - &m(e, 1, 0)
        );
    }

    #[test]
    fn excess_exponent_is_the_corank() {
        // With the exponent r + 1 in place of r' + 1 the identity breaks as soon as r != r'.
        let e = ModelSpec::e_only(1, 2);
        assert_ne!(
            excess_chern_polynomial(1, 2, 2),
            excess_chern_check(1, 2).expected
        );
        assert_eq!(excess_chern_polynomial(1, 2, 3), &m(e, 0, 2) - &m(e, 1, 1));
    }

    #[test]
    fn corrections() {
        let x = ModelSpec::flop(2);
        let e = ModelSpec::e_only(2, 2);
        assert_eq!(
            exceptional_correction(&m(x, 1, 0)).unwrap(),
            CohClass::one(e)
        );
        assert_eq!(
            exceptional_correction(&m(x, 2, 0)).unwrap(),
            &m(e, 1, 0) - &m(e, 0, 1)
        );
        assert!(exceptional_correction(&m(x, 1, 1)).unwrap().is_zero());
    }
}
