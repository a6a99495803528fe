//! Memoized reconstruction of genus-zero invariants of the local flop model.
//!
//! Each invariant is reduced by, in this order: the dimension filter, the
//! degree-zero formula, the extremal closed forms (when `d2 = 0`), the
//! one-point function, the string and divisor equations, topological
//! recursion for descendents, and the divisor relations that move a divisor
//! factor from one primary slot to another. Every splitting term lands on
//! strictly smaller data, and a depth guard turns any bookkeeping error into
//! [`QlocalError::NonTermination`].

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_traits::Zero;

use super::pbeta::{p_beta_full, virtual_dimension};
use super::QlocalError;
use crate::corealg::model::ModelSpec;
use crate::corealg::novikov::CurveDegree;
use crate::corealg::pairing::{gram_and_dual, Gram};
use crate::corealg::rational::{factorial, rat, Rational};
use crate::corealg::ring::{CohClass, Monomial, Ring};
use crate::extremal;

/// `tau_k cls`.
#[derive(Clone, PartialEq, Eq)]
pub struct Insertion {
    pub k: u32,
    pub cls: CohClass,
}

impl Insertion {
    pub fn new(k: u32, cls: CohClass) -> Self {
        Insertion { k, cls }
    }

    pub fn primary(cls: CohClass) -> Self {
        Insertion { k: 0, cls }
    }

    /// `tau_k h^a xi^b` in the flop model of rank `r`.
    pub fn monomial(r: u32, k: u32, a: u32, b: u32) -> Self {
        Insertion {
            k,
            cls: CohClass::monomial(ModelSpec::flop(r), a, b),
        }
    }
}

impl fmt::Display for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k > 0 {
            write!(f, "tau_{} ", self.k)?;
        }
        write!(f, "{}", self.cls)
    }
}

impl fmt::Debug for Insertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which of several valid reductions the engine takes. All must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionVariant {
    Canonical,
    /// Other recursion partners and the other divisor factor where there is a choice.
    Alternate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EngineOptions {
    /// Use the extremal closed forms for `d2 = 0`.
    pub extremal_shortcut: bool,
    /// Remove degree-one primary slots by the divisor axiom.
    pub divisor_axiom: bool,
    pub variant: ReductionVariant,
    pub max_depth: usize,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            extremal_shortcut: true,
            divisor_axiom: true,
            variant: ReductionVariant::Canonical,
            max_depth: 20_000,
        }
    }
}

/// `(k, basis index)`.
type Slot = (u32, usize);
type Key = (Vec<Slot>, u32, u32);
type Sparse = Vec<(usize, Rational)>;
type Res = Result<Rational, QlocalError>;

pub struct GwEngine {
    r: u32,
    model: ModelSpec,
    ring: Arc<Ring>,
    gram: Arc<Gram>,
    opts: EngineOptions,
    memo: RwLock<HashMap<Key, Rational>>,
    unit: usize,
    h: usize,
    xi: usize,
    by_degree: Vec<Vec<usize>>,
}

const STACK: usize = 512 << 20;

/// Runs `f` on a thread with a stack large enough for deep reductions.
pub(crate) fn on_big_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        let handle = std::thread::Builder::new()
            .stack_size(STACK)
            .spawn_scoped(s, f)
            .expect("spawn worker thread");
        match handle.join() {
            Ok(v) => v,
            Err(p) => std::panic::resume_unwind(p),
        }
    })
}

pub(crate) fn big_stack_pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .stack_size(STACK)
            .build()
            .expect("build thread pool")
    })
}

impl GwEngine {
    pub fn new(r: u32, opts: EngineOptions) -> Self {
        let model = ModelSpec::flop(r);
        let ring = Ring::get(model);
        let gram = gram_and_dual(model).expect("local Gram matrix is invertible");
        let idx = |a, b| ring.index_of(Monomial::new(a, b)).expect("basis monomial");
        let mut by_degree = vec![Vec::new(); model.dim() as usize + 1];
        for (i, m) in ring.basis().iter().enumerate() {
            by_degree[m.degree() as usize].push(i);
        }
        GwEngine {
            r,
            model,
            unit: idx(0, 0),
            h: idx(1, 0),
            xi: idx(0, 1),
            ring,
            gram,
            opts,
            memo: RwLock::new(HashMap::new()),
            by_degree,
        }
    }

    /// Shared engine with default options for rank `r`.
    pub fn global(r: u32) -> Arc<GwEngine> {
        static ENGINES: OnceLock<Mutex<HashMap<u32, Arc<GwEngine>>>> = OnceLock::new();
        let map = ENGINES.get_or_init(|| Mutex::new(HashMap::new()));
        map.lock()
            .expect("engine registry poisoned")
            .entry(r)
            .or_insert_with(|| Arc::new(GwEngine::new(r, EngineOptions::default())))
            .clone()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn model(&self) -> ModelSpec {
        self.model
    }

    pub fn options(&self) -> EngineOptions {
        self.opts
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo poisoned").len()
    }

    /// `<tau_{k1} a1, .., tau_{kn} an>_deg`, expanded multilinearly.
    pub fn invariant(&self, insertions: &[Insertion], deg: CurveDegree) -> Res {
        on_big_stack(|| self.invariant_here(insertions, deg))
    }

    /// As [`GwEngine::invariant`], on the calling thread's stack.
    pub(crate) fn invariant_here(&self, insertions: &[Insertion], deg: CurveDegree) -> Res {
        if let Some(bad) = insertions.iter().find(|i| i.cls.model() != self.model) {
            return Err(QlocalError::WrongModel(bad.cls.model()));
        }
        if !deg.is_effective() {
            return Ok(Rational::zero());
        }
        let ins: Vec<(u32, Sparse)> = insertions.iter().map(|i| (i.k, sparse(&i.cls))).collect();
        self.gwc(ins, deg.d1 as u32, deg.d2 as u32, 0)
    }

    fn basis_deg(&self, i: usize) -> u32 {
        self.ring.degree(i)
    }

    fn mul_basis(&self, i: usize, j: usize) -> Sparse {
        self.ring.product(i, j).to_vec()
    }

    fn mul_sparse(&self, a: &Sparse, j: usize) -> Sparse {
        let mut out: HashMap<usize, Rational> = HashMap::new();
        for (i, c) in a {
            for (k, w) in self.ring.product(*i, j) {
                *out.entry(*k).or_insert_with(Rational::zero) += c * w;
            }
        }
        let mut v: Sparse = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    /// Multilinear expansion into monomial slots.
    fn gwc(&self, ins: Vec<(u32, Sparse)>, d1: u32, d2: u32, depth: usize) -> Res {
        let mut total = Rational::zero();
        let mut slots = Vec::with_capacity(ins.len());
        self.expand(&ins, 0, rat(1), &mut slots, d1, d2, depth, &mut total)?;
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn expand(
        &self,
        ins: &[(u32, Sparse)],
        pos: usize,
        coef: Rational,
        slots: &mut Vec<Slot>,
        d1: u32,
        d2: u32,
        depth: usize,
        total: &mut Rational,
    ) -> Result<(), QlocalError> {
        if pos == ins.len() {
            let v = self.gw(slots.clone(), d1, d2, depth)?;
            if !v.is_zero() {
                *total += coef * v;
            }
            return Ok(());
        }
        let (k, cls) = &ins[pos];
        for (i, c) in cls {
            slots.push((*k, *i));
            self.expand(ins, pos + 1, &coef * c, slots, d1, d2, depth, total)?;
            slots.pop();
        }
        Ok(())
    }

    /// Invariant of monomial slots.
    pub(crate) fn gw(&self, mut slots: Vec<Slot>, d1: u32, d2: u32, depth: usize) -> Res {
        if depth > self.opts.max_depth {
            return Err(QlocalError::NonTermination { depth });
        }
        let n = slots.len();
        if n == 0 {
            return Ok(Rational::zero());
        }
        let total: i64 = slots
            .iter()
            .map(|(k, i)| (*k + self.basis_deg(*i)) as i64)
            .sum();
        if total != virtual_dimension(self.r, n, d2) {
            return Ok(Rational::zero());
        }
        slots.sort_unstable();
        let key = (slots, d1, d2);
        if let Some(v) = self.memo.read().expect("memo poisoned").get(&key) {
            return Ok(v.clone());
        }
        let v = self.compute(&key.0, d1, d2, depth + 1)?;
        self.memo
            .write()
            .expect("memo poisoned")
            .insert(key, v.clone());
        Ok(v)
    }

    fn compute(&self, s: &[Slot], d1: u32, d2: u32, depth: usize) -> Res {
        let n = s.len();
        if d1 == 0 && d2 == 0 {
            return Ok(self.degree_zero(s));
        }
        if d2 == 0 && self.opts.extremal_shortcut {
            if let Some(v) = self.extremal(s, d1) {
                return Ok(v);
            }
        }
        if n == 1 {
            return Ok(self.one_point(s[0], d1, d2));
        }
        if let Some(p) = s.iter().position(|&(k, i)| k == 0 && i == self.unit) {
            return self.string(s, p, d1, d2, depth);
        }
        if self.opts.divisor_axiom {
            if let Some(p) = s
                .iter()
                .position(|&(k, i)| k == 0 && self.basis_deg(i) == 1)
            {
                return self.divisor(s, p, d1, d2, depth);
            }
        }
        if n >= 3 && s.iter().any(|(k, _)| *k > 0) {
            return self.trr(s, d1, d2, depth);
        }
        if n == 2 {
            return self.two_point(s, d1, d2, depth);
        }
        self.primary(s, d1, d2, depth)
    }

    fn one_point(&self, (k, i): Slot, d1: u32, d2: u32) -> Rational {
        let p = p_beta_full(self.r, d1, d2);
        integrate_product(&self.ring, p.coeff(-(k as i64 + 2)).coords(), i)
    }

    /// `(n-3)! / prod k_i! * integral prod a_i` when `sum k_i = n - 3`.
    fn degree_zero(&self, s: &[Slot]) -> Rational {
        let n = s.len();
        let ksum: u32 = s.iter().map(|(k, _)| *k).sum();
        if n < 3 || ksum as usize != n - 3 {
            return Rational::zero();
        }
        let mut acc: Sparse = vec![(self.unit, rat(1))];
        for (_, i) in s {
            acc = self.mul_sparse(&acc, *i);
            if acc.is_empty() {
                return Rational::zero();
            }
        }
        let top = self.ring.top_index();
        let integral = acc
            .iter()
            .find(|(k, _)| *k == top)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero);
        let mut c = Rational::from_integer(factorial(n as u32 - 3));
        for (k, _) in s {
            c /= Rational::from_integer(factorial(*k));
        }
        c * integral
    }

    /// Closed forms for `d2 = 0`; `None` where none applies.
    fn extremal(&self, s: &[Slot], d: u32) -> Option<Rational> {
        let mut ls = Vec::with_capacity(s.len());
        for &(_, i) in s {
            let m = self.ring.basis()[i];
            if m.b > 0 {
                return Some(Rational::zero());
            }
            ls.push(m.a);
        }
        let r = self.r;
        let free: Vec<usize> = (0..s.len()).filter(|&t| s[t].0 == 0).collect();
        match s.len() {
            1 => Some(extremal::one_point_descendent(r, s[0].0, ls[0], d)),
            2 => Some(extremal::two_point_descendent(
                r, s[0].0, ls[0], s[1].0, ls[1], d,
            )),
            _ if free.len() < 2 => Some(Rational::zero()),
            n if free.len() == n => Some(extremal::n_point_extremal(r, &ls, d)),
            3 => {
                let t = (0..3)
                    .find(|t| !free.contains(t))
                    .expect("one descendent slot");
                Some(extremal::three_point_descendent(
                    r,
                    ls[free[0]],
                    ls[free[1]],
                    s[t].0,
                    ls[t],
                    d,
                ))
            }
            _ => None,
        }
    }

    fn string(&self, s: &[Slot], p: usize, d1: u32, d2: u32, depth: usize) -> Res {
        let rest: Vec<Slot> = s
            .iter()
            .enumerate()
            .filter(|(t, _)| *t != p)
            .map(|(_, x)| *x)
            .collect();
        let mut total = Rational::zero();
        for j in 0..rest.len() {
            if rest[j].0 > 0 {
                let mut r2 = rest.clone();
                r2[j].0 -= 1;
                total += self.gw(r2, d1, d2, depth)?;
            }
        }
        Ok(total)
    }

    fn l_beta(&self, l: usize, d1: u32, d2: u32) -> Rational {
        rat(if l == self.h { d1 } else { d2 } as i64)
    }

    fn divisor(&self, s: &[Slot], p: usize, d1: u32, d2: u32, depth: usize) -> Res {
        let l = s[p].1;
        let rest: Vec<Slot> = s
            .iter()
            .enumerate()
            .filter(|(t, _)| *t != p)
            .map(|(_, x)| *x)
            .collect();
        let lb = self.l_beta(l, d1, d2);
        let mut total = Rational::zero();
        if !lb.is_zero() {
            total += lb * self.gw(rest.clone(), d1, d2, depth)?;
        }
        for j in 0..rest.len() {
            if rest[j].0 > 0 {
                let ins: Vec<(u32, Sparse)> = rest
                    .iter()
                    .enumerate()
                    .map(|(t, &(k, i))| {
                        if t == j {
                            (k - 1, self.mul_basis(i, l))
                        } else {
                            (k, unit_sparse(i))
                        }
                    })
                    .collect();
                total += self.gwc(ins, d1, d2, depth)?;
            }
        }
        Ok(total)
    }

    /// `psi_i = D_{i | j m}` on the slot with the most descendents.
    fn trr(&self, s: &[Slot], d1: u32, d2: u32, depth: usize) -> Res {
        let n = s.len();
        let i = (0..n).rev().max_by_key(|&t| s[t].0).expect("nonempty");
        let mut others: Vec<usize> = (0..n).filter(|&t| t != i).collect();
        if self.opts.variant == ReductionVariant::Alternate {
            others.reverse();
        }
        let (j, m) = (others[0], others[1]);
        let rest = &others[2..];
        let mut total = Rational::zero();
        for mask in 0..(1u32 << rest.len()) {
            let (a, b) = partition(rest, mask);
            for e1 in 0..=d1 {
                for e2 in 0..=d2 {
                    let mut left = vec![(s[i].0 - 1, s[i].1)];
                    left.extend(a.iter().map(|&t| s[t]));
                    let mut right = vec![s[j], s[m]];
                    right.extend(b.iter().map(|&t| s[t]));
                    total += self.split(&left, &right, (e1, e2), (d1 - e1, d2 - e2), depth)?;
                }
            }
        }
        Ok(total)
    }

    fn factor(&self, i: usize) -> (usize, usize) {
        let m = self.ring.basis()[i];
        let prefer_h = self.opts.variant == ReductionVariant::Canonical;
        let use_h = if prefer_h { m.a > 0 } else { m.b == 0 };
        let (l, rest) = if use_h {
            (self.h, Monomial::new(m.a - 1, m.b))
        } else {
            (self.xi, Monomial::new(m.a, m.b - 1))
        };
        (l, self.ring.index_of(rest).expect("basis monomial"))
    }

    fn two_point(&self, s: &[Slot], d1: u32, d2: u32, depth: usize) -> Res {
        let (mut x, mut y) = (s[0], s[1]);
        let alt = self.opts.variant == ReductionVariant::Alternate;
        if x.0 > 0 && y.0 > 0 {
            // psi_1 + psi_2 = D_{1|2}, lowering the slot with fewer descendents.
            if x.0 > y.0 || (x.0 == y.0 && alt) {
                std::mem::swap(&mut x, &mut y);
            }
            let mut total = -self.gw(vec![(x.0 - 1, x.1), (y.0 + 1, y.1)], d1, d2, depth)?;
            total += self.two_split((x.0 - 1, x.1), y, d1, d2, None, depth)?;
            return Ok(total);
        }
        if x.0 != 0 {
            std::mem::swap(&mut x, &mut y);
        }
        if y.0 == 0 {
            let (dx, dy) = (self.basis_deg(x.1), self.basis_deg(y.1));
            if dy < dx || (dy == dx && alt) {
                std::mem::swap(&mut x, &mut y);
            }
        }
        // x = L * x' is primary.
        let (l, xp) = self.factor(x.1);
        let (k, b) = y;
        let mut total = self.gwc(
            vec![(0, unit_sparse(xp)), (k, self.mul_basis(b, l))],
            d1,
            d2,
            depth,
        )?;
        let lb = self.l_beta(l, d1, d2);
        if !lb.is_zero() {
            total += lb * self.gw(vec![(0, xp), (k + 1, b)], d1, d2, depth)?;
        }
        total -= self.two_split((0, xp), y, d1, d2, Some(l), depth)?;
        Ok(total)
    }

    /// `sum over beta1 + beta2 = beta, both nonzero, of w(beta1) <x, T>_{beta1} <T^, y>_{beta2}`.
    fn two_split(&self, x: Slot, y: Slot, d1: u32, d2: u32, l: Option<usize>, depth: usize) -> Res {
        let mut total = Rational::zero();
        for e1 in 0..=d1 {
            for e2 in 0..=d2 {
                let (f1, f2) = (d1 - e1, d2 - e2);
                if (e1, e2) == (0, 0) || (f1, f2) == (0, 0) {
                    continue;
                }
                let w = match l {
                    None => rat(1),
                    Some(l) => self.l_beta(l, e1, e2),
                };
                if !w.is_zero() {
                    total += w * self.split(&[x], &[y], (e1, e2), (f1, f2), depth)?;
                }
            }
        }
        Ok(total)
    }

    /// Moves a divisor factor from the smallest slot to another slot.
    fn primary(&self, s: &[Slot], d1: u32, d2: u32, depth: usize) -> Res {
        let n = s.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&t| self.basis_deg(s[t].1));
        let i = order[0];
        let (j, k3) = match self.opts.variant {
            ReductionVariant::Canonical => (order[n - 1], order[1]),
            ReductionVariant::Alternate => (order[1], order[n - 1]),
        };
        let (l, ap) = self.factor(s[i].1);
        let main: Vec<(u32, Sparse)> = (0..n)
            .map(|t| {
                if t == i {
                    (0, unit_sparse(ap))
                } else if t == j {
                    (0, self.mul_basis(s[t].1, l))
                } else {
                    (0, unit_sparse(s[t].1))
                }
            })
            .collect();
        let mut total = self.gwc(main, d1, d2, depth)?;
        let others: Vec<usize> = (0..n).filter(|t| ![i, j, k3].contains(t)).collect();
        for mask in 0..(1u32 << others.len()) {
            let (a, b) = partition(&others, mask);
            for e1 in 0..=d1 {
                for e2 in 0..=d2 {
                    let (f1, f2) = (d1 - e1, d2 - e2);
                    let w = self.l_beta(l, f1, f2);
                    if !w.is_zero() {
                        let mut left = vec![(0, ap), s[k3]];
                        left.extend(a.iter().map(|&t| s[t]));
                        let mut right = vec![s[j]];
                        right.extend(b.iter().map(|&t| s[t]));
                        total += w * self.split(&left, &right, (e1, e2), (f1, f2), depth)?;
                    }
                    let w = self.l_beta(l, e1, e2);
                    if !w.is_zero() {
                        let mut left = vec![(0, ap)];
                        left.extend(a.iter().map(|&t| s[t]));
                        let mut right = vec![s[j], s[k3]];
                        right.extend(b.iter().map(|&t| s[t]));
                        total -= w * self.split(&left, &right, (e1, e2), (f1, f2), depth)?;
                    }
                }
            }
        }
        Ok(total)
    }

    /// `sum_a <left, T_a>_e <T^a, right>_f`.
    fn split(
        &self,
        left: &[Slot],
        right: &[Slot],
        e: (u32, u32),
        f: (u32, u32),
        depth: usize,
    ) -> Res {
        if (e == (0, 0) && left.len() + 1 < 3) || (f == (0, 0) && right.len() + 1 < 3) {
            return Ok(Rational::zero());
        }
        let used: i64 = left
            .iter()
            .map(|(k, i)| (*k + self.basis_deg(*i)) as i64)
            .sum();
        let need = virtual_dimension(self.r, left.len() + 1, e.1) - used;
        if need < 0 || need as usize >= self.by_degree.len() {
            return Ok(Rational::zero());
        }
        let mut total = Rational::zero();
        for &a in &self.by_degree[need as usize] {
            let mut l = left.to_vec();
            l.push((0, a));
            let lv = self.gw(l, e.0, e.1, depth)?;
            if lv.is_zero() {
                continue;
            }
            for (b, g) in &self.gram.dual_sparse[a] {
                let mut rr = Vec::with_capacity(right.len() + 1);
                rr.push((0, *b));
                rr.extend_from_slice(right);
                let rv = self.gw(rr, f.0, f.1, depth)?;
                if !rv.is_zero() {
                    total += &lv * g * rv;
                }
            }
        }
        Ok(total)
    }
}

fn integrate_product(ring: &Ring, coords: &[Rational], i: usize) -> Rational {
    let top = ring.top_index();
    let mut acc = Rational::zero();
    for (j, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if let Some((_, w)) = ring.product(j, i).iter().find(|(k, _)| *k == top) {
            acc += c * w;
        }
    }
    acc
}

fn partition(items: &[usize], mask: u32) -> (Vec<usize>, Vec<usize>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (t, &x) in items.iter().enumerate() {
        if mask >> t & 1 == 1 {
            a.push(x);
        } else {
            b.push(x);
        }
    }
    (a, b)
}

fn sparse(c: &CohClass) -> Sparse {
    c.terms().map(|(i, v)| (i, v.clone())).collect()
}

fn unit_sparse(i: usize) -> Sparse {
    vec![(i, rat(1))]
}

/// `<tau_{k1} a1, .., tau_{kn} an>_deg` on the flop model of rank `r`.
pub fn gw_invariant(
    r: u32,
    insertions: &[Insertion],
    deg: CurveDegree,
) -> Result<Rational, QlocalError> {
    GwEngine::global(r).invariant(insertions, deg)
}
