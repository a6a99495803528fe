//! Graded quotient rings and their normal forms.
//!
//! Every model ring has two generators (one for `ZOnly`) of complex degree
//! one and a monomial basis. The ideal of each model has a Groebner basis
//! with coprime leading monomials, so multiplication by a generator followed
//! by a single rewrite step always lands back in the basis:
//!
//! - local models: `h^{r+1} -> 0` and
//!   `xi^{r'+2} -> -sum_{k=1}^{r'+1} C(r'+1, k) (-h)^k xi^{r'+2-k}`;
//! - `ZOnly`: `h^{r+1} -> 0`;
//! - `EOnly`: `x^{r+1} -> 0`, `y^{r'+1} -> 0`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::model::{ModelKind, ModelSpec};
use super::rational::{binom, fmt_rational, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    H,
    Xi,
    X,
    Y,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::H => "h",
            Generator::Xi => "xi",
            Generator::X => "x",
            Generator::Y => "y",
        }
    }
}

/// Exponent pair over the two generators of a model: `(h, xi)`, `(h, -)` or `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { a: 0, b: 0 };

    pub fn new(a: u32, b: u32) -> Self {
        Monomial { a, b }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("generator `{}` does not exist in {model}", .generator.name())]
    UnknownGenerator {
        generator: Generator,
        model: ModelSpec,
    },
    #[error("classes from different models cannot be combined ({0} vs {1})")]
    ModelMismatch(ModelSpec, ModelSpec),
    #[error("Gram matrix of {0} is singular")]
    SingularGram(ModelSpec),
}

type SparseRow = Vec<(usize, Rational)>;

/// Multiplication tables of one model ring.
#[derive(Debug)]
pub struct Ring {
    model: ModelSpec,
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    generators: Vec<Generator>,
    /// `gen_ops[g][i]` = normal form of `generator_g * basis[i]`.
    gen_ops: Vec<Vec<SparseRow>>,
    /// `table[i][j]` = normal form of `basis[i] * basis[j]`.
    table: Vec<Vec<SparseRow>>,
    top: usize,
}

static RINGS: OnceLock<Mutex<HashMap<ModelSpec, Arc<Ring>>>> = OnceLock::new();

impl Ring {
    /// Shared ring for `model`; tables are built once per process.
    pub fn get(model: ModelSpec) -> Arc<Ring> {
        let cache = RINGS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("ring cache poisoned");
        guard
            .entry(model)
            .or_insert_with(|| Arc::new(Ring::build(model)))
            .clone()
    }

    fn build(model: ModelSpec) -> Ring {
        let (r, rp) = (model.r, model.rprime);
        let (max_a, max_b, generators) = match model.kind {
            ModelKind::FlopLocal | ModelKind::FlipLocal => {
                (r, rp + 1, vec![Generator::H, Generator::Xi])
            }
            ModelKind::ZOnly => (r, 0, vec![Generator::H]),
            ModelKind::EOnly => (r, rp, vec![Generator::X, Generator::Y]),
        };
        let mut basis = Vec::new();
        for a in 0..=max_a {
            for b in 0..=max_b {
                basis.push(Monomial::new(a, b));
            }
        }
        let index: HashMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let top = index[&Monomial::new(max_a, max_b)];

        let mut gen_ops = Vec::new();
        for g in 0..generators.len() {
            let mut rows = Vec::with_capacity(basis.len());
            for m in &basis {
                let mut row = SparseRow::new();
                if g == 0 {
                    if m.a < max_a {
                        row.push((index[&Monomial::new(m.a + 1, m.b)], Rational::one()));
                    }
                } else if m.b < max_b {
                    row.push((index[&Monomial::new(m.a, m.b + 1)], Rational::one()));
                } else if model.is_local() {
                    // xi * h^a xi^{r'+1} = h^a xi^{r'+2}; rewrite through xi (xi - h)^{r'+1} = 0.
                    let n = (rp + 1) as i64;
                    for k in 1..=rp + 1 {
                        if m.a + k > max_a {
                            break;
                        }
                        let sign = if k % 2 == 0 { -1 } else { 1 };
                        let c = Rational::from_integer(binom(n, k as i64)) * rat(sign);
                        row.push((index[&Monomial::new(m.a + k, rp + 2 - k)], c));
                    }
                }
                rows.push(row);
            }
            gen_ops.push(rows);
        }

        let mut ring = Ring {
            model,
            basis,
            index,
            generators,
            gen_ops,
            table: Vec::new(),
            top,
        };
        let n = ring.basis.len();
        let mut table = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let m = ring.basis[i];
                let mut v = ring.monomial_vec(ring.basis[j]);
                v = ring.apply_gen_pow(&v, 0, m.a);
                if ring.generators.len() > 1 {
                    v = ring.apply_gen_pow(&v, 1, m.b);
                }
                row.push(to_sparse(&v));
            }
            table.push(row);
        }
        ring.table = table;
        ring
    }

    fn monomial_vec(&self, m: Monomial) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.basis.len()];
        v[self.index[&m]] = Rational::one();
        v
    }

    fn apply_gen(&self, v: &[Rational], g: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, w) in &self.gen_ops[g][i] {
                out[*j] += c * w;
            }
        }
        out
    }

    fn apply_gen_pow(&self, v: &[Rational], g: usize, e: u32) -> Vec<Rational> {
        let mut cur = v.to_vec();
        for _ in 0..e {
            if cur.iter().all(Zero::is_zero) {
                break;
            }
            cur = self.apply_gen(&cur, g);
        }
        cur
    }

    pub fn model(&self) -> ModelSpec {
        self.model
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn index_of(&self, m: Monomial) -> Option<usize> {
        self.index.get(&m).copied()
    }

    pub fn degree(&self, idx: usize) -> u32 {
        self.basis[idx].degree()
    }

    pub fn top_index(&self) -> usize {
        self.top
    }

    /// Normal form of `basis[i] * basis[j]`.
    pub fn product(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i][j]
    }

    /// Normal form of an arbitrary monomial `g0^a g1^b` (the second exponent must be zero for `ZOnly`).
    pub fn monomial_normal_form(&self, a: u32, b: u32) -> Vec<Rational> {
        let mut v = self.monomial_vec(Monomial::ONE);
        v = self.apply_gen_pow(&v, 0, a);
        if b > 0 {
            assert!(
                self.generators.len() > 1,
                "second generator absent in {}",
                self.model
            );
            v = self.apply_gen_pow(&v, 1, b);
        }
        v
    }

    fn gen_slot(&self, g: Generator) -> Option<usize> {
        self.generators.iter().position(|x| *x == g)
    }
}

fn to_sparse(v: &[Rational]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// An element of a model ring in normal form: dense coordinates over the monomial basis.
#[derive(Clone)]
pub struct CohClass {
    ring: Arc<Ring>,
    coords: Vec<Rational>,
}

impl CohClass {
    pub fn zero(model: ModelSpec) -> Self {
        let ring = Ring::get(model);
        let coords = vec![Rational::zero(); ring.len()];
        CohClass { ring, coords }
    }

    pub fn one(model: ModelSpec) -> Self {
        Self::monomial(model, 0, 0)
    }

    pub fn basis_element(model: ModelSpec, idx: usize) -> Self {
        let mut c = Self::zero(model);
        c.coords[idx] = Rational::one();
        c
    }

    /// Normal form of `g0^a g1^b`: `h^a xi^b` in local models, `x^a y^b` in `EOnly`.
    pub fn monomial(model: ModelSpec, a: u32, b: u32) -> Self {
        let ring = Ring::get(model);
        let coords = ring.monomial_normal_form(a, b);
        CohClass { ring, coords }
    }

    pub fn from_coords(model: ModelSpec, coords: Vec<Rational>) -> Self {
        let ring = Ring::get(model);
        assert_eq!(
            coords.len(),
            ring.len(),
            "coordinate vector has wrong length"
        );
        CohClass { ring, coords }
    }

    pub fn model(&self) -> ModelSpec {
        self.ring.model
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.ring
            .index_of(m)
            .map(|i| self.coords[i].clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero `(basis index, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The common degree of all nonzero terms; `None` for zero or mixed-degree classes.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for (i, _) in self.terms() {
            let d = self.ring.degree(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    /// The part of `self` in degree `d`.
    pub fn graded_piece(&self, d: u32) -> CohClass {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if self.ring.degree(i) == d {
                    c.clone()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        CohClass {
            ring: self.ring.clone(),
            coords,
        }
    }

    pub fn scale(&self, s: &Rational) -> CohClass {
        CohClass {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> CohClass {
        let mut acc = CohClass::one(self.model());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplication by a generator of the model.
    pub fn mul_generator(&self, g: Generator) -> Result<CohClass, RingError> {
        let slot = self.ring.gen_slot(g).ok_or(RingError::UnknownGenerator {
            generator: g,
            model: self.model(),
        })?;
        Ok(CohClass {
            ring: self.ring.clone(),
            coords: self.ring.apply_gen(&self.coords, slot),
        })
    }

    fn check_same(&self, other: &CohClass) {
        assert_eq!(self.model(), other.model(), "classes from different models");
    }
}

impl PartialEq for CohClass {
    fn eq(&self, other: &Self) -> bool {
        self.model() == other.model() && self.coords == other.coords
    }
}

impl Eq for CohClass {}

impl<'a> Add<&'a CohClass> for &'a CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        self.check_same(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a + b)
            .collect();
        CohClass {
            ring: self.ring.clone(),
            coords,
        }
    }
}

impl<'a> Sub<&'a CohClass> for &'a CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        self.check_same(rhs);
        let coords = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(a, b)| a - b)
            .collect();
        CohClass {
            ring: self.ring.clone(),
            coords,
        }
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass {
            ring: self.ring.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a CohClass> for &'a CohClass {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        self.check_same(rhs);
        let mut out = vec![Rational::zero(); self.coords.len()];
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                let ab = a * b;
                for (k, w) in self.ring.product(i, j) {
                    out[*k] += &ab * w;
                }
            }
        }
        CohClass {
            ring: self.ring.clone(),
            coords: out,
        }
    }
}

impl Add for CohClass {
    type Output = CohClass;
    fn add(self, rhs: CohClass) -> CohClass {
        &self + &rhs
    }
}

impl Sub for CohClass {
    type Output = CohClass;
    fn sub(self, rhs: CohClass) -> CohClass {
        &self - &rhs
    }
}

impl Mul for CohClass {
    type Output = CohClass;
    fn mul(self, rhs: CohClass) -> CohClass {
        &self * &rhs
    }
}

impl Neg for CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        -&self
    }
}

/// Writes `m` with the generator names of its model, e.g. `h^2*xi^3`, `x*y`, `1`.
pub fn fmt_monomial(model: ModelSpec, m: Monomial) -> String {
    let (g0, g1) = match model.kind {
        ModelKind::FlopLocal | ModelKind::FlipLocal | ModelKind::ZOnly => ("h", "xi"),
        ModelKind::EOnly => ("x", "y"),
    };
    let mut parts = Vec::new();
    for (g, e) in [(g0, m.a), (g1, m.b)] {
        match e {
            0 => {}
            1 => parts.push(g.to_string()),
            _ => parts.push(format!("{g}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let model = self.model();
        let mut first = true;
        for (i, c) in self.terms() {
            let mono = fmt_monomial(model, self.ring.basis[i]);
            let mag = c.abs();
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if mag.is_one() {
                write!(f, "{mono}")?;
            } else if mono == "1" {
                write!(f, "{}", fmt_rational(&mag))?;
            } else {
                write!(f, "{}*{mono}", fmt_rational(&mag))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohClass[{}]({})", self.model(), self)
    }
}

/// A polynomial expression in named generators, not yet reduced.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RingExpr {
    pub terms: Vec<(Rational, Vec<(Generator, u32)>)>,
}

impl RingExpr {
    pub fn term(coeff: Rational, factors: &[(Generator, u32)]) -> Self {
        RingExpr {
            terms: vec![(coeff, factors.to_vec())],
        }
    }

    pub fn plus(mut self, coeff: Rational, factors: &[(Generator, u32)]) -> Self {
        self.terms.push((coeff, factors.to_vec()));
        self
    }
}

/// Reduces `expr` to its unique normal form in `model`.
pub fn normalize(expr: &RingExpr, model: ModelSpec) -> Result<CohClass, RingError> {
    let ring = Ring::get(model);
    let mut acc = CohClass::zero(model);
    for (coeff, factors) in &expr.terms {
        let mut exps = [0u32; 2];
        for (g, e) in factors {
            let slot = ring.gen_slot(*g).ok_or(RingError::UnknownGenerator {
                generator: *g,
                model,
            })?;
            exps[slot] += e;
        }
        let mono = CohClass::monomial(model, exps[0], exps[1]);
        acc = &acc + &mono.scale(coeff);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Generator::*;

    fn c(model: ModelSpec, terms: &[(i64, u32, u32)]) -> CohClass {
        terms.iter().fold(CohClass::zero(model), |acc, (k, a, b)| {
            &acc + &CohClass::monomial(model, *a, *b).scale(&rat(*k))
        })
    }

    #[test]
    fn xi_cubed_r1() {
        let m = ModelSpec::flop(1);
        let got = normalize(&RingExpr::term(rat(1), &[(Xi, 3)]), m).unwrap();
        assert_eq!(got, c(m, &[(2, 1, 2)]));
    }

    #[test]
    fn xi_fourth_r2() {
        let m = ModelSpec::flop(2);
        let got = normalize(&RingExpr::term(rat(1), &[(Xi, 4)]), m).unwrap();
        assert_eq!(got, c(m, &[(3, 1, 3), (-3, 2, 2)]));
    }

    #[test]
    fn basis_monomials_are_fixed() {
        for model in [
            ModelSpec::flop(3),
            ModelSpec::flip(2, 4),
            ModelSpec::z_only(3),
            ModelSpec::e_only(2, 3),
        ] {
            let ring = Ring::get(model);
            for (i, m) in ring.basis().iter().enumerate() {
                assert_eq!(
                    CohClass::monomial(model, m.a, m.b),
                    CohClass::basis_element(model, i)
                );
            }
        }
    }

    #[test]
    fn unknown_generator() {
        let err = normalize(&RingExpr::term(rat(1), &[(Xi, 1)]), ModelSpec::z_only(2)).unwrap_err();
        assert!(matches!(
            err,
            RingError::UnknownGenerator { generator: Xi, .. }
        ));
        let err =
            normalize(&RingExpr::term(rat(1), &[(H, 1)]), ModelSpec::e_only(2, 2)).unwrap_err();
        assert!(matches!(
            err,
            RingError::UnknownGenerator { generator: H, .. }
        ));
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(Ring::get(ModelSpec::flop(2)).len(), 12);
        assert_eq!(Ring::get(ModelSpec::flip(1, 3)).len(), 10);
        assert_eq!(Ring::get(ModelSpec::e_only(2, 3)).len(), 12);
    }

    #[test]
    fn display() {
        let m = ModelSpec::flop(2);
        let x = c(m, &[(3, 1, 3), (-3, 2, 2)]);
        assert_eq!(x.to_string(), "3*h*xi^3 - 3*h^2*xi^2");
        assert_eq!(CohClass::zero(m).to_string(), "0");
        assert_eq!(CohClass::one(m).to_string(), "1");
    }

    #[test]
    fn power_beyond_nilpotency_vanishes() {
        let m = ModelSpec::flop(2);
        assert!(CohClass::monomial(m, 0, 1).pow(6).is_zero());
        assert!(CohClass::monomial(m, 3, 0).is_zero());
    }
}
