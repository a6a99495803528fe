//! The Batyrev presentation of the small quantum ring and its image under the flop.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::corealg::rational::{rat, Rational};

/// Laurent polynomial in `h, xi, q1, q2`; exponents may be negative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent4 {
    terms: BTreeMap<[i32; 4], Rational>,
}

impl Laurent4 {
    pub fn monomial(c: Rational, e: [i32; 4]) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Laurent4 { terms }
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::monomial(rat(1), e)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(rat(1)), |acc, _| &acc * self)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    fn add_term(&mut self, e: [i32; 4], c: Rational) {
        let v = self.terms.entry(e).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Ring map given by the images of the four variables; negative exponents need invertible images.
    pub fn substitute(&self, images: &[Laurent4; 4], inverses: &[Option<Laurent4>; 4]) -> Self {
        let mut out = Self::default();
        for (e, c) in &self.terms {
            let mut t = Self::constant(c.clone());
            for v in 0..4 {
                let base = if e[v] >= 0 {
                    images[v].clone()
                } else {
                    inverses[v]
                        .clone()
                        .expect("variable with a negative exponent has no inverse image")
                };
                t = &t * &base.pow(e[v].unsigned_abs());
            }
            out = &out + &t;
        }
        out
    }
}

impl Add for &Laurent4 {
    type Output = Laurent4;
    fn add(self, rhs: &Laurent4) -> Laurent4 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Laurent4 {
    type Output = Laurent4;
    fn sub(self, rhs: &Laurent4) -> Laurent4 {
        self + &rhs.scale(&rat(-1))
    }
}

impl Mul for &Laurent4 {
    type Output = Laurent4;
    fn mul(self, rhs: &Laurent4) -> Laurent4 {
        let mut out = Laurent4::default();
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, a * b);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatyrevReport {
    pub r: u32,
    /// `F(h^{r+1} - q1 (xi-h)^{r+1}) = -q1'^{-1} (h'^{r+1} - q1' (xi'-h')^{r+1})`.
    pub first_relation: bool,
    /// `F((xi-h)^{r+1} xi - q2) = (h'^{r+1} - q1' (xi'-h')^{r+1}) xi' + q1' ((xi'-h')^{r+1} xi' - q2')`.
    pub second_relation: bool,
}

impl BatyrevReport {
    pub fn passed(&self) -> bool {
        self.first_relation && self.second_relation
    }
}

/// Checks that the flop substitution maps the Batyrev relations into the ideal of the primed side.
pub fn batyrev_check(r: u32) -> BatyrevReport {
    let [h, xi, q1, q2] = [0, 1, 2, 3].map(Laurent4::var);
    let q1_inv = Laurent4::monomial(rat(1), [0, 0, -1, 0]);
    let e = r + 1;
    let xmh = &xi - &h;

    let rel1 = &h.pow(e) - &(&q1 * &xmh.pow(e));
    let rel2 = &(&xmh.pow(e) * &xi) - &q2;

    let images = [xmh.clone(), xi.clone(), q1_inv.clone(), &q1 * &q2];
    let inverses = [None, None, Some(q1.clone()), None];
    let f1 = rel1.substitute(&images, &inverses);
    let f2 = rel2.substitute(&images, &inverses);

    // Primed relations, written in the same variables.
    let rel1p = &h.pow(e) - &(&q1 * &xmh.pow(e));
    let rel2p = &(&xmh.pow(e) * &xi) - &q2;
    let want1 = (&q1_inv * &rel1p).scale(&rat(-1));
    let want2 = &(&rel1p * &xi) + &(&q1 * &rel2p);

    BatyrevReport {
        r,
        first_relation: f1 == want1,
        second_relation: f2 == want2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        for r in [1, 2, 4] {
            assert!(batyrev_check(r).passed(), "r = {r}");
        }
    }
}
