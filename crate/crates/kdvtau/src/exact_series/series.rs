//! Truncated Laurent series in one inverse variable.
//!
//! A series stores every coefficient from its head exponent down to `-tail`.
//! Exponents below `-tail` are unknown; asking for one is an error.

use super::ring::{rational_to_string, Arith, Rational, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R> {
    var: &'static str,
    /// Exponent of `coeffs[0]`.
    top: i64,
    /// `coeffs[i]` multiplies `var^(top - i)`; the last entry sits at `-tail`.
    coeffs: Vec<R>,
    tail: i64,
}

impl<R: Ring> TruncSeries<R> {
    /// The zero series known down to `var^(-tail)`.
    pub fn zero(var: &'static str, tail: i64) -> Self {
        TruncSeries { var, top: -tail - 1, coeffs: Vec::new(), tail }
    }

    pub fn monomial(var: &'static str, e: i64, c: R, tail: i64) -> Self {
        Self::from_terms(var, tail, [(e, c)])
    }

    pub fn constant(var: &'static str, c: R, tail: i64) -> Self {
        Self::monomial(var, 0, c, tail)
    }

    /// Build from `(exponent, coefficient)` pairs; pairs below the window are dropped.
    pub fn from_terms(var: &'static str, tail: i64, terms: impl IntoIterator<Item = (i64, R)>) -> Self {
        let terms: Vec<(i64, R)> = terms.into_iter().filter(|(e, c)| *e >= -tail && !c.is_zero()).collect();
        let top = terms.iter().map(|t| t.0).max().unwrap_or(-tail - 1);
        let mut coeffs = vec![R::zero(); (top + tail + 1).max(0) as usize];
        for (e, c) in terms {
            coeffs[(top - e) as usize].add_assign(&c);
        }
        let mut s = TruncSeries { var, top, coeffs, tail };
        s.normalize();
        s
    }

    /// Coefficients `c[k]` of `var^(-k)` for `k = 0..len`, known down to `-(len-1)`.
    pub fn from_inverse_powers(var: &'static str, c: Vec<R>) -> Self {
        let tail = c.len() as i64 - 1;
        let mut s = TruncSeries { var, top: 0, coeffs: c, tail };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.top -= lead as i64;
        }
        if self.coeffs.is_empty() {
            self.top = -self.tail - 1;
        }
    }

    pub fn var(&self) -> &'static str {
        self.var
    }

    pub fn tail(&self) -> i64 {
        self.tail
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn head(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.top)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `var^e`; an error below the reliable window.
    pub fn coeff(&self, e: i64) -> Result<R> {
        if e < -self.tail {
            return Err(Error::Truncated { var: self.var.to_string(), exponent: e, tail: self.tail });
        }
        if e > self.top {
            return Ok(R::zero());
        }
        Ok(self.coeffs[(self.top - e) as usize].clone())
    }

    /// Like [`coeff`](Self::coeff) but panics outside the window.
    pub fn at(&self, e: i64) -> R {
        self.coeff(e).unwrap_or_else(|err| panic!("{err}"))
    }

    fn at_ref(&self, e: i64) -> Option<&R> {
        if e > self.top || e < -self.tail {
            None
        } else {
            Some(&self.coeffs[(self.top - e) as usize])
        }
    }

    /// Nonzero terms, highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        let top = self.top;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (top - i as i64, c))
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch(self.var.into(), other.var.into()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let tail = self.tail.min(other.tail);
        let top = self.top.max(other.top);
        let mut coeffs = vec![R::zero(); (top + tail + 1).max(0) as usize];
        for (k, slot) in coeffs.iter_mut().enumerate() {
            let e = top - k as i64;
            if let Some(a) = self.at_ref(e) {
                slot.add_assign(a);
            }
            if let Some(b) = other.at_ref(e) {
                slot.add_assign(b);
            }
        }
        let mut s = TruncSeries { var: self.var, top, coeffs, tail };
        s.normalize();
        Ok(s)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        if self.is_zero() || other.is_zero() {
            let tail = match (self.head(), other.head()) {
                (Some(h), None) => other.tail - h,
                (None, Some(h)) => self.tail - h,
                _ => self.tail.min(other.tail),
            };
            return Ok(Self::zero(self.var, tail));
        }
        let tail = (self.tail - other.top).min(other.tail - self.top);
        let top = self.top + other.top;
        let len = (top + tail + 1).max(0) as usize;
        let mut coeffs = vec![R::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j].add_assign(&a.mul(b));
            }
        }
        let mut s = TruncSeries { var: self.var, top, coeffs, tail };
        s.normalize();
        Ok(s)
    }

    /// Multiply every coefficient by a ring element.
    pub fn scale_by(&self, c: &R) -> Self {
        let mut s = TruncSeries {
            var: self.var,
            top: self.top,
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            tail: self.tail,
        };
        s.normalize();
        s
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale_by(&R::from_rational(q))
    }

    /// Multiply by `var^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries { var: self.var, top: self.top + k, coeffs: self.coeffs.clone(), tail: self.tail - k }
    }

    /// Forget everything below `var^(-tail)`.
    pub fn truncate(&self, tail: i64) -> Self {
        let tail = tail.min(self.tail);
        let terms = self.terms().map(|(e, c)| (e, c.clone())).collect::<Vec<_>>();
        Self::from_terms(self.var, tail, terms)
    }

    /// Inverse of a series whose leading coefficient is a unit.
    pub fn inverse(&self) -> Result<Self> {
        let h = self.head().ok_or(Error::NotInvertible)?;
        let lead_inv = self.coeffs[0].inverse().ok_or(Error::NotInvertible)?;
        // self = c var^h (1 + r), r = sum_{k>=1} r_k var^-k known for k <= n.
        let n = (self.tail + h) as usize;
        let r: Vec<R> = (0..=n).map(|k| self.coeffs[k].mul(&lead_inv)).collect();
        let mut inv = vec![R::zero(); n + 1];
        inv[0] = R::one();
        for k in 1..=n {
            let mut acc = R::zero();
            for j in 1..=k {
                if !r[j].is_zero() {
                    acc.add_assign(&r[j].mul(&inv[k - j]));
                }
            }
            inv[k] = acc.neg();
        }
        let coeffs = inv.into_iter().map(|c| c.mul(&lead_inv)).collect();
        let mut s = TruncSeries { var: self.var, top: -h, coeffs, tail: self.tail + 2 * h };
        s.normalize();
        Ok(s)
    }

    /// `self^q` for a series of the form `1 + O(var^-1)`.
    pub fn pow_rational(&self, q: &Rational) -> Result<Self> {
        if self.head() != Some(0) || !self.coeffs[0].is_one() {
            return Err(Error::NotInvertible);
        }
        let n = self.tail as usize;
        let a = &self.coeffs;
        let mut g = vec![R::zero(); n + 1];
        g[0] = R::one();
        // n g_n = sum_k (k (q + 1) - n) a_k g_{n-k}
        for m in 1..=n {
            let mut acc = R::zero();
            for k in 1..=m {
                if a[k].is_zero() {
                    continue;
                }
                let w = q.clone() * Rational::from_integer((k as i64).into()) + Rational::from_integer((k as i64 - m as i64).into());
                acc.add_assign(&a[k].mul(&g[m - k]).scale(&w));
            }
            g[m] = acc.scale(&Rational::new(1.into(), (m as i64).into()));
        }
        Ok(TruncSeries::from_inverse_powers(self.var, g))
    }

    /// Derivative with respect to the variable.
    pub fn derivative(&self) -> Self {
        let terms: Vec<(i64, R)> = self.terms().map(|(e, c)| (e - 1, c.mul(&R::from_int(e)))).collect();
        Self::from_terms(self.var, self.tail + 1, terms)
    }

    /// Substitute `var = new_var^2`.
    pub fn square_variable(&self, new_var: &'static str) -> Self {
        let terms: Vec<(i64, R)> = self.terms().map(|(e, c)| (2 * e, c.clone())).collect();
        Self::from_terms(new_var, 2 * self.tail + 1, terms)
    }

    /// Substitute `var -> -var`.
    pub fn reflect(&self) -> Self {
        let terms: Vec<(i64, R)> =
            self.terms().map(|(e, c)| (e, if e.rem_euclid(2) == 1 { c.neg() } else { c.clone() })).collect();
        Self::from_terms(self.var, self.tail, terms)
    }

    pub fn rename(&self, var: &'static str) -> Self {
        TruncSeries { var, ..self.clone() }
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        let terms: Vec<(i64, S)> = self.terms().map(|(e, c)| (e, f(c))).collect();
        TruncSeries::from_terms(self.var, self.tail, terms)
    }

    /// True when every coefficient inside the window vanishes.
    pub fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl TruncSeries<Rational> {
    /// Canonical text: ascending `(exponent, coefficient)` pairs, then the tail order.
    pub fn to_canonical_text(&self) -> String {
        let mut terms: Vec<String> = self.terms().map(|(e, c)| format!("({e}, {})", rational_to_string(c))).collect();
        terms.reverse();
        format!("{}: [{}] tail {}", self.var, terms.join(", "), self.tail)
    }
}

impl<R: Ring> Arith for TruncSeries<R> {
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).unwrap_or_else(|e| panic!("{e}"))
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }
    fn neg(&self) -> Self {
        TruncSeries {
            var: self.var,
            top: self.top,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            tail: self.tail,
        }
    }
}

/// Exact product, tail propagated to the common reliable window.
pub fn series_mul<R: Ring>(a: &TruncSeries<R>, b: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    a.try_mul(b)
}

/// Two-sided inverse up to truncation.
pub fn series_invert<R: Ring>(a: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    a.inverse()
}
