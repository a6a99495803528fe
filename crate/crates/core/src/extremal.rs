//! Invariants of the extremal ray: curve classes `d * l` with `l` the line in
//! the exceptional `P^r`. Closed forms for one-, two- and three-point
//! descendents, the universal constants `N_{l1..ln}` produced by the
//! divisor-relation recursion, and the rational generating series.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::classical::{triple_defect, z_pairing};
use crate::corealg::model::ModelSpec;
use crate::corealg::novikov::{ContinuationError, RatFn};
use crate::corealg::pairing::integrate;
use crate::corealg::poly::QPoly;
use crate::corealg::rational::{binom, neg_one_pow, rat, Rational};
use crate::corealg::ring::CohClass;
use crate::corealg::zseries::ZSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtremalError {
    #[error("degree vector {degrees:?} is not admissible for r = {r}")]
    Inadmissible { r: u32, degrees: Vec<u32> },
    #[error("N{degrees:?} differs between d = 1 ({at_one}) and d = 2 ({at_two})")]
    NotDIndependent {
        degrees: Vec<u32>,
        at_one: String,
        at_two: String,
    },
    #[error("need at least {needed} insertions, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error(transparent)]
    Continuation(#[from] ContinuationError),
}

fn d_pow(d: u32, e: i64) -> Rational {
    rat(d as i64).pow(e as i32)
}

fn c(n: i64, k: i64) -> Rational {
    Rational::from_integer(binom(n, k))
}

/// `<tau_k h^l>_d`. Zero unless `l + k = 2r - 1` and `l <= r`.
pub fn one_point_descendent(r: u32, k: u32, l: u32, d: u32) -> Rational {
    assert!(d >= 1, "extremal degree must be positive");
    let (r, k, l) = (r as i64, k as i64, l as i64);
    if l + k != 2 * r - 1 || l > r {
        return Rational::zero();
    }
    neg_one_pow(d as i64 * (r + 1) + k) * c(k + 1, r) / d_pow(d, k + 2)
}

/// `(-1)^{(d-1)(r+1)} / (h + d z)^{r+1}` on `P^r`, keeping `z^{-1} .. z^{-z_order}`.
pub fn j_small(r: u32, d: u32, z_order: u32) -> ZSeries {
    assert!(d >= 1, "extremal degree must be positive");
    let model = ModelSpec::z_only(r);
    let h = CohClass::monomial(model, 1, 0);
    ZSeries::linear_power(&h, d as i64, -(r as i64 + 1))
        .scale(&neg_one_pow((d as i64 - 1) * (r as i64 + 1)))
        .truncate(-(z_order as i64))
}

/// `<tau_k h^l>_d` read off as the `z^{-(k+2)}` coefficient of `integral_{P^r} h^l j_small`.
pub fn one_point_from_j(r: u32, k: u32, l: u32, d: u32) -> Rational {
    if l > r {
        return Rational::zero();
    }
    let j = j_small(r, d, k + 2);
    let model = ModelSpec::z_only(r);
    integrate(&(&j.coeff(-(k as i64 + 2)) * &CohClass::monomial(model, l, 0)))
}

/// `<tau_{k1} h^{l1}, tau_{k2} h^{l2}>_d`. Zero unless `k1 + k2 + l1 + l2 = 2r`.
pub fn two_point_descendent(r: u32, k1: u32, l1: u32, k2: u32, l2: u32, d: u32) -> Rational {
    assert!(d >= 1, "extremal degree must be positive");
    let (r, k1, l1, k2, l2) = (r as i64, k1 as i64, l1 as i64, k2 as i64, l2 as i64);
    if k1 + k2 + l1 + l2 != 2 * r || l1 > r || l2 > r {
        return Rational::zero();
    }
    neg_one_pow(d as i64 * (r + 1) + l1 + k2 + 1) * c(2 * r - l1 - l2, r - l1)
        / d_pow(d, k1 + k2 + 1)
}

/// `<h^{l1}, h^{l2}, tau_{k3} h^{l3}>_d` with `l1 + l2 + l3 + k3 = 2r + 1`.
///
/// For `k3 >= 1` this is `<tau_{k3-1} h^{l3}, h^{l1+l2}>_d`, i.e.
/// `(-1)^{d(r+1)+l3+1} d^{-k3} C(k3 - 1, r - l1 - l2)`; for `k3 = 0` it is the primary invariant.
pub fn three_point_descendent(r: u32, l1: u32, l2: u32, k3: u32, l3: u32, d: u32) -> Rational {
    assert!(d >= 1, "extremal degree must be positive");
    if l1 + l2 + l3 + k3 != 2 * r + 1 || [l1, l2, l3].iter().any(|l| *l > r) {
        return Rational::zero();
    }
    if k3 == 0 {
        return n_point_extremal(r, &[l1, l2, l3], d);
    }
    let (ri, l3i, k3i) = (r as i64, l3 as i64, k3 as i64);
    let lower = ri - (l1 + l2) as i64;
    if lower < 0 {
        return Rational::zero();
    }
    neg_one_pow(d as i64 * (ri + 1) + l3i + 1) * c(k3i - 1, lower) / d_pow(d, k3i)
}

/// Which slots the divisor-relation recursion works on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NStrategy {
    /// Sorted vectors; lower the smallest entry, use the divisor axiom at 1.
    Sorted,
    /// Keeps slot order; lowers the first slot against the next two.
    Ordered,
    /// Like `Sorted` but never shortcuts through the divisor axiom.
    RelationOnly,
}

struct Recursion {
    r: u32,
    d: u32,
    strategy: NStrategy,
    memo: HashMap<Vec<u32>, Rational>,
}

impl Recursion {
    fn value(&mut self, degs: Vec<u32>) -> Rational {
        let r = self.r;
        let n = degs.len() as u32;
        if degs.iter().any(|l| *l > r) || degs.iter().sum::<u32>() + 2 != 2 * r + n {
            return Rational::zero();
        }
        if n == 1 {
            return one_point_descendent(r, 0, degs[0], self.d);
        }
        if n == 2 {
            return two_point_descendent(r, 0, degs[0], 0, degs[1], self.d);
        }
        if degs.contains(&0) {
            return Rational::zero();
        }
        let key = match self.strategy {
            NStrategy::Ordered => degs,
            _ => {
                let mut s = degs;
                s.sort_unstable();
                s
            }
        };
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = self.reduce(&key);
        self.memo.insert(key, v.clone());
        v
    }

    fn reduce(&mut self, degs: &[u32]) -> Rational {
        let d = rat(self.d as i64);
        if self.strategy != NStrategy::RelationOnly {
            if let Some(p) = degs.iter().position(|l| *l == 1) {
                let mut rest = degs.to_vec();
                rest.remove(p);
                return d * self.value(rest);
            }
        }
        let (i, j, k) = self.pick(degs);
        let a = degs[i] - 1;
        let rest: Vec<u32> = (0..degs.len())
            .filter(|t| ![i, j, k].contains(t))
            .map(|t| degs[t])
            .collect();

        let mut main = degs.to_vec();
        main[i] = a;
        main[j] += 1;
        let mut b1 = vec![a + degs[k], degs[j]];
        b1.extend(&rest);
        let mut b2 = vec![a, degs[j] + degs[k]];
        b2.extend(&rest);
        self.value(main) + &d * self.value(b1) - &d * self.value(b2)
    }

    /// `(i, j, k)`: lower slot `i`, raise slot `j`, merge slot `k` in the boundary terms.
    fn pick(&self, degs: &[u32]) -> (usize, usize, usize) {
        if self.strategy == NStrategy::Ordered {
            return (0, 1, 2);
        }
        // Sorted inputs: slot 0 is the smallest. Prefer a merge partner whose
        // boundary term vanishes, then raise the largest remaining slot.
        let r = self.r;
        let a = degs[0] - 1;
        let others: Vec<usize> = (1..degs.len()).collect();
        let k = others
            .iter()
            .copied()
            .find(|&t| a + degs[t] > r)
            .unwrap_or(others[0]);
        let j = *others
            .iter()
            .rev()
            .find(|&&t| t != k)
            .expect("at least three slots");
        (0, j, k)
    }
}

/// `<h^{l1}, .., h^{ln}>_d` evaluated through the divisor relations.
pub fn extremal_recursion(r: u32, degrees: &[u32], d: u32, strategy: NStrategy) -> Rational {
    assert!(d >= 1, "extremal degree must be positive");
    let mut rec = Recursion {
        r,
        d,
        strategy,
        memo: HashMap::new(),
    };
    rec.value(degrees.to_vec())
}

/// `N` recovered from [`extremal_recursion`] at a single `d`.
pub fn n_from_recursion(r: u32, degrees: &[u32], d: u32, strategy: NStrategy) -> Rational {
    let n = degrees.len() as i64;
    let v = extremal_recursion(r, degrees, d, strategy);
    v / (neg_one_pow((d as i64 - 1) * (r as i64 + 1)) * d_pow(d, n - 3))
}

/// Degrees with `1 <= l_i <= r` and `sum l_i = 2r + n - 2`.
pub fn is_admissible(r: u32, degrees: &[u32]) -> bool {
    let n = degrees.len() as u32;
    n >= 2
        && degrees.iter().all(|l| (1..=r).contains(l))
        && degrees.iter().sum::<u32>() + 2 == 2 * r + n
}

/// Every sorted admissible degree vector of length `n`.
pub fn admissible_degree_vectors(r: u32, n: usize) -> Vec<Vec<u32>> {
    fn go(r: u32, n: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if is_admissible(r, cur) {
                out.push(cur.clone());
            }
            return;
        }
        for l in start..=r {
            cur.push(l);
            go(r, n, l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(r, n, 1, &mut Vec::new(), &mut out);
    out
}

type NKey = (u32, Vec<u32>);

/// Memo of computed constants, keyed by `(r, sorted degrees)`.
pub struct NTable {
    map: RwLock<HashMap<NKey, Rational>>,
}

impl NTable {
    pub fn global() -> &'static NTable {
        static TABLE: OnceLock<NTable> = OnceLock::new();
        TABLE.get_or_init(|| NTable {
            map: RwLock::new(HashMap::new()),
        })
    }

    pub fn get(&self, r: u32, sorted: &[u32]) -> Option<Rational> {
        self.map
            .read()
            .expect("N table poisoned")
            .get(&(r, sorted.to_vec()))
            .cloned()
    }

    fn insert(&self, r: u32, sorted: Vec<u32>, v: Rational) {
        self.map
            .write()
            .expect("N table poisoned")
            .insert((r, sorted), v);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("N table poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `N_{l1..ln}`, computed at `d = 1` and `d = 2` and required to agree.
pub fn compute_n(r: u32, degrees: &[u32]) -> Result<Rational, ExtremalError> {
    if !is_admissible(r, degrees) {
        return Err(ExtremalError::Inadmissible {
            r,
            degrees: degrees.to_vec(),
        });
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    if let Some(v) = NTable::global().get(r, &sorted) {
        return Ok(v);
    }
    let at_one = n_from_recursion(r, &sorted, 1, NStrategy::Sorted);
    let at_two = n_from_recursion(r, &sorted, 2, NStrategy::Sorted);
    if at_one != at_two {
        return Err(ExtremalError::NotDIndependent {
            degrees: sorted,
            at_one: at_one.to_string(),
            at_two: at_two.to_string(),
        });
    }
    NTable::global().insert(r, sorted, at_one.clone());
    Ok(at_one)
}

/// `<h^{l1}, .., h^{ln}>_d = (-1)^{(d-1)(r+1)} N d^{n-3}`, zero off the admissible set.
pub fn n_point_extremal(r: u32, degrees: &[u32], d: u32) -> Rational {
    assert!(d >= 1, "extremal degree must be positive");
    match degrees.len() {
        0 => Rational::zero(),
        1 => one_point_descendent(r, 0, degrees[0], d),
        n => {
            if !is_admissible(r, degrees) {
                return Rational::zero();
            }
            let nv = compute_n(r, degrees).expect("admissible degree vector");
            neg_one_pow((d as i64 - 1) * (r as i64 + 1)) * nv * d_pow(d, n as i64 - 3)
        }
    }
}

/// `q / (1 - (-1)^{r+1} q) = sum_{d >= 1} (-1)^{(d-1)(r+1)} q^d`.
pub fn geometric_base(r: u32) -> RatFn {
    let s = neg_one_pow(r as i64 + 1);
    RatFn::new(
        QPoly::new(vec![rat(0), rat(1)]),
        QPoly::new(vec![rat(1), -s]),
        0,
    )
}

/// `N * (q d/dq)^{n-3} (q / (1 - (-1)^{r+1} q))`.
pub fn extremal_series(r: u32, degrees: &[u32]) -> Result<RatFn, ExtremalError> {
    if degrees.len() < 3 {
        return Err(ExtremalError::TooFewPoints {
            needed: 3,
            got: degrees.len(),
        });
    }
    let nv = compute_n(r, degrees)?;
    let mut f = geometric_base(r);
    for _ in 3..degrees.len() {
        f = f.theta();
    }
    Ok(f.scale(&nv))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalInvarianceReport {
    pub r: u32,
    pub degrees: Vec<u32>,
    /// Extremal part of the function on `X`, in `q`.
    pub x_side: RatFn,
    /// Extremal part of the function on `X'` for the transformed insertions, in `q'`.
    pub f_side: RatFn,
    pub f_side_continued: RatFn,
    /// Classical defect; zero for `n >= 4`.
    pub defect: Rational,
    pub passed: bool,
}

/// Checks that continuing the transformed side reproduces the original side, up to the classical defect when `n = 3`.
pub fn verify_extremal_invariance(
    r: u32,
    degrees: &[u32],
) -> Result<ExtremalInvarianceReport, ExtremalError> {
    let x_side = extremal_series(r, degrees)?;
    let model = ModelSpec::flop(r);
    // (F h^l . h'^{r-l})_{Z'} = (-1)^l (h^l . h^{r-l})_Z, and (h^l . h^{r-l})_Z = 1.
    let mut sign = Rational::one();
    let mut zfactor = Rational::one();
    for l in degrees {
        sign *= neg_one_pow(*l as i64);
        zfactor *= z_pairing(&CohClass::monomial(model, *l, 0), *l);
    }
    let x_side = x_side.scale(&zfactor);
    let f_side = x_side.scale(&sign);
    let f_side_continued = f_side.continued()?;
    let defect = if degrees.len() == 3 {
        let c: Vec<CohClass> = degrees
            .iter()
            .map(|l| CohClass::monomial(model, *l, 0))
            .collect();
        triple_defect(&c[0], &c[1], &c[2]).map_err(|_| ExtremalError::Inadmissible {
            r,
            degrees: degrees.to_vec(),
        })?
    } else {
        Rational::zero()
    };
    let lhs = f_side_continued.add(&RatFn::poly(QPoly::constant(defect.clone()), 0));
    let passed = lhs == x_side;
    Ok(ExtremalInvarianceReport {
        r,
        degrees: degrees.to_vec(),
        x_side,
        f_side,
        f_side_continued,
        defect,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corealg::rational::ratio;

    #[test]
    fn one_point_values() {
        assert_eq!(one_point_descendent(2, 1, 2, 1), rat(1));
        assert_eq!(one_point_descendent(2, 2, 1, 2), ratio(3, 16));
        assert_eq!(one_point_descendent(2, 0, 2, 1), rat(0));
        assert_eq!(one_point_from_j(2, 2, 1, 2), ratio(3, 16));
    }

    #[test]
    fn j_small_sign() {
        let j = j_small(2, 2, 6);
        assert_eq!(
            j.coeff(-3),
            CohClass::one(ModelSpec::z_only(2)).scale(&ratio(-1, 8))
        );
        assert!(j.max_exponent().unwrap() <= -2);
    }

    #[test]
    fn two_point_values() {
        assert_eq!(two_point_descendent(2, 0, 2, 0, 2, 1), rat(1));
        assert_eq!(two_point_descendent(2, 0, 2, 0, 2, 2), ratio(-1, 2));
        assert_eq!(two_point_descendent(2, 0, 1, 1, 2, 1), rat(1));
    }

    #[test]
    fn three_point_values() {
        assert_eq!(three_point_descendent(2, 1, 1, 1, 2, 1), rat(1));
        assert_eq!(three_point_descendent(2, 1, 2, 0, 2, 1), rat(1));
        assert_eq!(three_point_descendent(3, 2, 2, 1, 2, 1), rat(0));
    }

    #[test]
    fn n_values() {
        assert_eq!(n_point_extremal(2, &[1, 2, 2], 2), rat(-1));
        assert_eq!(n_point_extremal(2, &[2, 2, 2], 3), rat(0));
        assert_eq!(n_point_extremal(2, &[1, 1, 2, 2], 1), rat(1));
        assert_eq!(compute_n(2, &[1, 1, 2, 2]).unwrap(), rat(1));
        assert!(compute_n(2, &[2, 2, 2]).is_err());
    }

    #[test]
    fn series() {
        let q = |v: &[i64]| QPoly::from_i64(v);
        assert_eq!(
            extremal_series(2, &[1, 2, 2]).unwrap(),
            RatFn::new(q(&[0, 1]), q(&[1, 1]), 0)
        );
        assert_eq!(
            extremal_series(1, &[1, 1, 1]).unwrap(),
            RatFn::new(q(&[0, 1]), q(&[1, -1]), 0)
        );
        assert_eq!(
            extremal_series(2, &[1, 1, 2, 2]).unwrap(),
            RatFn::new(q(&[0, 1]), q(&[1, 2, 1]), 0)
        );
    }

    #[test]
    fn invariance() {
        assert!(verify_extremal_invariance(2, &[1, 2, 2]).unwrap().passed);
        assert!(verify_extremal_invariance(1, &[1, 1, 1]).unwrap().passed);
        assert!(verify_extremal_invariance(2, &[1, 1, 2, 2]).unwrap().passed);
    }
}
