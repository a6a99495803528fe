//! Poincare pairing, Gram matrices and dual bases.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use super::linalg::QMatrix;
use super::model::ModelSpec;
use super::rational::Rational;
use super::ring::{CohClass, Ring, RingError};

/// Coefficient of the top basis monomial.
pub fn integrate(c: &CohClass) -> Rational {
    c.coords()[c.ring().top_index()].clone()
}

/// `(a . b) = integral of a * b`.
pub fn pairing(a: &CohClass, b: &CohClass) -> Rational {
    integrate(&(a * b))
}

#[derive(Debug)]
pub struct Gram {
    pub model: ModelSpec,
    /// `G[a][b] = (B_a . B_b)` over the monomial basis.
    pub matrix: QMatrix,
    pub inverse: QMatrix,
    /// `dual[a]` pairs to one with `B_a` and to zero with every other basis element.
    pub dual: Vec<CohClass>,
    /// Nonzero entries of each row of the inverse, for splitting sums.
    pub dual_sparse: Vec<Vec<(usize, Rational)>>,
}

static GRAMS: OnceLock<Mutex<HashMap<ModelSpec, Arc<Gram>>>> = OnceLock::new();

pub fn gram_and_dual(model: ModelSpec) -> Result<Arc<Gram>, RingError> {
    let cache = GRAMS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(g) = cache.lock().expect("gram cache poisoned").get(&model) {
        return Ok(g.clone());
    }
    let g = Arc::new(build_gram(model)?);
    cache
        .lock()
        .expect("gram cache poisoned")
        .insert(model, g.clone());
    Ok(g)
}

fn build_gram(model: ModelSpec) -> Result<Gram, RingError> {
    let ring = Ring::get(model);
    let n = ring.len();
    let top = ring.top_index();
    let matrix = QMatrix::from_fn(n, n, |a, b| {
        ring.product(a, b)
            .iter()
            .find(|(k, _)| *k == top)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    });
    let inverse = matrix.inverse().ok_or(RingError::SingularGram(model))?;
    let dual = (0..n)
        .map(|a| CohClass::from_coords(model, inverse.row(a).to_vec()))
        .collect();
    let dual_sparse = (0..n)
        .map(|a| {
            inverse
                .row(a)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(b, c)| (b, c.clone()))
                .collect()
        })
        .collect();
    Ok(Gram {
        model,
        matrix,
        inverse,
        dual,
        dual_sparse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::rational::{binom, rat};
    use num_traits::One;

    #[test]
    fn top_and_segre() {
        assert_eq!(
            integrate(&CohClass::monomial(ModelSpec::flop(2), 2, 3)),
            rat(1)
        );
        assert_eq!(
            integrate(&CohClass::monomial(ModelSpec::flop(1), 0, 3)),
            rat(2)
        );
        assert_eq!(
            integrate(&CohClass::monomial(ModelSpec::flop(2), 0, 5)),
            rat(6)
        );
        for r in 1..=4 {
            for rp in 1..=4 {
                let m = if r == rp {
                    ModelSpec::flop(r)
                } else {
                    ModelSpec::flip(r, rp)
                };
                let v = integrate(&CohClass::monomial(m, 0, r + rp + 1));
                assert_eq!(v, Rational::from_integer(binom((r + rp) as i64, r as i64)));
            }
        }
    }

    #[test]
    fn lower_degree_integrates_to_zero() {
        assert!(integrate(&CohClass::monomial(ModelSpec::flop(2), 1, 3)).is_zero());
    }

    #[test]
    fn dual_basis() {
        for model in [
            ModelSpec::flop(1),
            ModelSpec::flop(2),
            ModelSpec::flip(1, 2),
            ModelSpec::e_only(2, 1),
            ModelSpec::z_only(3),
        ] {
            let g = gram_and_dual(model).unwrap();
            let n = g.dual.len();
            for a in 0..n {
                for b in 0..n {
                    let v = pairing(&g.dual[a], &CohClass::basis_element(model, b));
                    assert_eq!(v.is_one(), a == b);
                    assert!(a == b || v.is_zero());
                }
            }
        }
        assert_eq!(gram_and_dual(ModelSpec::flop(2)).unwrap().matrix.rank(), 12);
        let m = ModelSpec::flop(1);
        assert!(pairing(&CohClass::monomial(m, 1, 0), &CohClass::monomial(m, 1, 2)).is_zero());
    }
}
