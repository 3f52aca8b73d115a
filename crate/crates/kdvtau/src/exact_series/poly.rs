//! Sparse multivariate polynomials over an exact ring.
//!
//! Variables are positional; names are attached only when printing. Terms are
//! kept in graded lexicographic order with the declared variable order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::ring::{rational_to_string, Arith, Rational, Ring};

/// Exponent vector with trailing zeros removed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize, e: u32) -> Self {
        let mut v = vec![0; i + 1];
        v[i] = e;
        Monomial::new(v)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.exp(i) + other.exp(i)).collect();
        Monomial(v)
    }

    /// Weighted degree with weight `w(i)` for variable `i`.
    pub fn weight(&self, w: impl Fn(usize) -> i64) -> i64 {
        self.0.iter().enumerate().map(|(i, &e)| w(i) * e as i64).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in positional variables x_0, x_1, ... with coefficients in `R`.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<R> {
    terms: BTreeMap<Monomial, R>,
}

/// Polynomial in named parameters (C, g2, g3, X, ...) over the rationals.
pub type ParamPoly = MPoly<Rational>;

impl<R: Ring> MPoly<R> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: R) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i, 1), R::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&Monomial::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: &R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                v.add_assign(c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// Highest variable index that occurs, if any.
    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.0.len().checked_sub(1)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(i)).max()
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> MPoly<S> {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn scale_by(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut v = m.0.clone();
            v[i] -= 1;
            out.add_term(Monomial::new(v), &c.mul(&R::from_int(e as i64)));
        }
        out
    }

    /// Evaluate with variable `i` replaced by `vals[i]`, coefficients embedded by `embed`.
    /// Panics when a variable beyond `vals` occurs.
    pub fn eval_with<S: Ring>(&self, vals: &[S], embed: impl Fn(&R) -> S) -> S {
        let mut powers: Vec<Vec<S>> = vals.iter().map(|v| vec![S::one(), v.clone()]).collect();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                assert!(i < vals.len(), "no value supplied for variable {i}");
                let p = &mut powers[i];
                while p.len() <= e as usize {
                    let next = p.last().unwrap().mul(&vals[i]);
                    p.push(next);
                }
                t = t.mul(&p[e as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Replace variable `i` by `val`, keeping the other variables.
    pub fn substitute(&self, i: usize, val: &MPoly<R>) -> Self {
        let mut out = Self::zero();
        let mut powers = vec![Self::one(), val.clone()];
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul(val);
                powers.push(next);
            }
            let mut v = m.0.clone();
            if i < v.len() {
                v[i] = 0;
            }
            let rest = MPoly::term(Monomial::new(v), c.clone());
            out = out.add(&rest.mul(&powers[e]));
        }
        out
    }

    /// Whether every term has the same weighted degree under `w`.
    pub fn is_isobaric(&self, w: impl Fn(usize) -> i64) -> bool {
        let mut it = self.terms.keys().map(|m| m.weight(&w));
        match it.next() {
            None => true,
            Some(first) => it.all(|x| x == first),
        }
    }
}

impl<R: Ring> Arith for MPoly<R> {
    fn add(&self, other: &Self) -> Self {
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &c.neg());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &c1.mul(c2));
            }
        }
        out
    }

    fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }
}

impl<R: Ring> Ring for MPoly<R> {
    fn zero() -> Self {
        MPoly::zero()
    }
    fn one() -> Self {
        MPoly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_rational(q: &Rational) -> Self {
        MPoly::constant(R::from_rational(q))
    }
    fn inverse(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return c.inverse().map(MPoly::constant);
            }
        }
        None
    }
    fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl ParamPoly {
    /// Human-readable form, highest terms first, e.g. `2*C^2 + 1/3*C*g2 - 5`.
    pub fn to_text(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c < &<Rational as Ring>::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_text(m, names);
            let coeff_is_one = abs == <Rational as Ring>::one();
            match (mono.is_empty(), coeff_is_one) {
                (true, _) => s.push_str(&rational_to_string(&abs)),
                (false, true) => s.push_str(&mono),
                (false, false) => {
                    let _ = write!(s, "{}*{}", rational_to_string(&abs), mono);
                }
            }
        }
        s
    }

    /// Terms as `(exponents, coefficient)` pairs in ascending monomial order.
    pub fn sorted_terms(&self, nvars: usize) -> Vec<(Vec<u32>, Rational)> {
        self.terms
            .iter()
            .map(|(m, c)| ((0..nvars.max(m.0.len())).map(|i| m.exp(i)).collect(), c.clone()))
            .collect()
    }

    /// Evaluate every variable at a rational point.
    pub fn eval_rational(&self, vals: &[Rational]) -> Rational {
        self.eval_with(vals, |c| c.clone())
    }
}

fn monomial_text(m: &Monomial, names: &[&str]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = names.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("x{i}"));
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    parts.join("*")
}


/// Univariate helper: the polynomial in variable `i` with the given
/// coefficients `c[0] + c[1] x_i + ...`.
pub fn univariate(i: usize, coeffs: &[Rational]) -> ParamPoly {
    let mut p = ParamPoly::zero();
    for (k, c) in coeffs.iter().enumerate() {
        p.add_term(Monomial::var(i, k as u32), c);
    }
    p
}

/// Interpolating polynomial in variable `i` through `(x_j, y_j)` (Newton form).
pub fn interpolate(i: usize, points: &[(Rational, Rational)]) -> ParamPoly {
    let n = points.len();
    // Newton divided differences.
    let mut coef: Vec<Rational> = points.iter().map(|p| p.1.clone()).collect();
    for j in 1..n {
        for k in (j..n).rev() {
            let num = &coef[k] - &coef[k - 1];
            let den = &points[k].0 - &points[k - j].0;
            coef[k] = num / den;
        }
    }
    let x = ParamPoly::var(i);
    let mut result = ParamPoly::constant(coef[n - 1].clone());
    for k in (0..n - 1).rev() {
        result = result.mul(&x.sub(&ParamPoly::constant(points[k].0.clone())));
        result = result.add(&ParamPoly::constant(coef[k].clone()));
    }
    result
}
