//! Truncated series in several inverse variables x_1, ..., x_n, expanded in the
//! region |x_1| > |x_2| > ... > |x_n|.
//!
//! Variable `j` is known for exponents `>= -tail[j]`; inside that box every
//! coefficient not stored is zero.

use std::collections::BTreeMap;

use super::ring::{int, Arith, Ring};
use super::series::TruncSeries;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries<R> {
    coeffs: BTreeMap<Vec<i64>, R>,
    tails: Vec<i64>,
}

impl<R: Ring> MultiSeries<R> {
    pub fn zero(tails: Vec<i64>) -> Self {
        MultiSeries { coeffs: BTreeMap::new(), tails }
    }

    pub fn one(tails: Vec<i64>) -> Self {
        let n = tails.len();
        let mut s = Self::zero(tails);
        s.add_term(vec![0; n], &R::one());
        s
    }

    pub fn nvars(&self) -> usize {
        self.tails.len()
    }

    pub fn tails(&self) -> &[i64] {
        &self.tails
    }

    fn in_window(&self, e: &[i64]) -> bool {
        e.iter().zip(&self.tails).all(|(x, t)| *x >= -t)
    }

    /// Add `c * x^e`; terms outside the window are dropped.
    pub fn add_term(&mut self, e: Vec<i64>, c: &R) {
        if c.is_zero() || !self.in_window(&e) {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(v) => {
                v.add_assign(c);
                if v.is_zero() {
                    self.coeffs.remove(&e);
                }
            }
            None => {
                self.coeffs.insert(e, c.clone());
            }
        }
    }

    pub fn coeff(&self, e: &[i64]) -> Result<R> {
        for (j, (x, t)) in e.iter().zip(&self.tails).enumerate() {
            if *x < -t {
                return Err(Error::Truncated { var: format!("x{}", j + 1), exponent: *x, tail: *t });
            }
        }
        Ok(self.coeffs.get(e).cloned().unwrap_or_else(R::zero))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &R)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest exponent of variable `j` among stored terms.
    pub fn head(&self, j: usize) -> Option<i64> {
        self.coeffs.keys().map(|e| e[j]).max()
    }

    /// Embed a one-variable series as variable `j` of `n`.
    pub fn from_series(s: &TruncSeries<R>, j: usize, tails: Vec<i64>) -> Self {
        let mut tails = tails;
        tails[j] = tails[j].min(s.tail());
        let n = tails.len();
        let mut out = Self::zero(tails);
        for (e, c) in s.terms() {
            let mut v = vec![0; n];
            v[j] = e;
            out.add_term(v, c);
        }
        out
    }

    pub fn scale_by(&self, k: &R) -> Self {
        let mut out = Self::zero(self.tails.clone());
        for (e, c) in &self.coeffs {
            out.add_term(e.clone(), &c.mul(k));
        }
        out
    }

    /// Keep only the terms whose exponents are all negative.
    pub fn negative_part(&self) -> Self {
        let mut out = Self::zero(self.tails.clone());
        for (e, c) in &self.coeffs {
            if e.iter().all(|x| *x < 0) {
                out.add_term(e.clone(), c);
            }
        }
        out
    }
}

impl<R: Ring> Arith for MultiSeries<R> {
    fn add(&self, other: &Self) -> Self {
        let tails = self.tails.iter().zip(&other.tails).map(|(a, b)| *a.min(b)).collect();
        let mut out = Self::zero(tails);
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_term(e.clone(), c);
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let n = self.nvars();
        let tails: Vec<i64> = (0..n)
            .map(|j| {
                let ha = self.head(j).unwrap_or(0).max(0);
                let hb = other.head(j).unwrap_or(0).max(0);
                (self.tails[j] - hb).min(other.tails[j] - ha)
            })
            .collect();
        let mut out = Self::zero(tails);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                if out.in_window(&e) {
                    out.add_term(e, &c1.mul(c2));
                }
            }
        }
        out
    }
    fn neg(&self) -> Self {
        MultiSeries { coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), c.neg())).collect(), tails: self.tails.clone() }
    }
}

/// Expansion of `1/(x_a - x_b)^power` (0-based indices) in the fixed region.
///
/// For `a < b` this is `sum_k binom(power-1+k, k) x_b^k x_a^(-power-k)`; for
/// `a > b` it is `(-1)^power` times the mirrored expansion. Terms are kept
/// while the larger variable stays inside its window.
pub fn expand_inverse_difference<R: Ring>(a: usize, b: usize, power: u32, tails: &[i64]) -> Result<MultiSeries<R>> {
    if a == b {
        return Err(Error::InvalidRequest("inverse difference of a variable with itself".into()));
    }
    let (big, small, sign) = if a < b { (a, b, 1) } else { (b, a, if power % 2 == 0 { 1 } else { -1 }) };
    let mut out = MultiSeries::zero(tails.to_vec());
    let p = power as i64;
    let mut k = 0i64;
    while -p - k >= -tails[big] {
        let mut e = vec![0; tails.len()];
        e[big] = -p - k;
        e[small] = k;
        let c = super::ring::binomial(p - 1 + k, k);
        out.add_term(e, &R::from_rational(&(int(sign) * num_rational::BigRational::from_integer(c))));
        k += 1;
    }
    Ok(out)
}
