//! Truncated Laurent series in a small variable x, known up to O(x^order).

use super::ring::{Arith, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<R> {
    low: i64,
    /// `c[i]` multiplies `x^(low + i)`.
    c: Vec<R>,
}

impl<R: Ring> PowerSeries<R> {
    /// Series with `c[i]` at `x^(low + i)`, exact through `x^(low + c.len() - 1)`.
    pub fn new(low: i64, c: Vec<R>) -> Self {
        PowerSeries { low, c }
    }

    pub fn zero(order: i64) -> Self {
        PowerSeries { low: order, c: Vec::new() }
    }

    pub fn constant(v: R, order: i64) -> Self {
        let mut c = vec![R::zero(); order.max(0) as usize];
        if !c.is_empty() {
            c[0] = v;
        }
        PowerSeries { low: 0, c }
    }

    /// The series x, exact to the given order.
    pub fn x(order: i64) -> Self {
        let mut c = vec![R::zero(); order.max(0) as usize];
        if c.len() > 1 {
            c[1] = R::one();
        }
        PowerSeries { low: 0, c }
    }

    /// First unknown exponent.
    pub fn order(&self) -> i64 {
        self.low + self.c.len() as i64
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn coeff(&self, e: i64) -> Result<R> {
        if e >= self.order() {
            return Err(Error::Truncated { var: "x".into(), exponent: e, tail: -self.order() });
        }
        if e < self.low {
            return Ok(R::zero());
        }
        Ok(self.c[(e - self.low) as usize].clone())
    }

    pub fn at(&self, e: i64) -> R {
        self.coeff(e).unwrap_or_else(|err| panic!("{err}"))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &R)> {
        let low = self.low;
        self.c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(i, v)| (low + i as i64, v))
    }

    /// Drop everything from `x^order` upwards.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order());
        let keep = (order - self.low).max(0) as usize;
        PowerSeries { low: self.low, c: self.c[..keep.min(self.c.len())].to_vec() }
    }

    pub fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().map(|(i, v)| v.mul(&R::from_int(self.low + i as i64))).collect::<Vec<_>>();
        if self.low == 0 && !c.is_empty() {
            return PowerSeries { low: 0, c: c[1..].to_vec() };
        }
        PowerSeries { low: self.low - 1, c }
    }

    /// Antiderivative with zero constant term; fails on an x^-1 term.
    pub fn integrate(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.c.len() + 1);
        let new_low = if self.low >= 0 { 0 } else { self.low + 1 };
        for _ in new_low..self.low + 1 {
            out.push(R::zero());
        }
        for (i, v) in self.c.iter().enumerate() {
            let e = self.low + i as i64;
            if e == -1 {
                if !v.is_zero() {
                    return Err(Error::NotDivisible("x^-1 has no antiderivative".into()));
                }
                out.push(R::zero());
                continue;
            }
            out.push(v.scale(&super::ring::rat(1, e + 1)));
        }
        Ok(PowerSeries { low: new_low, c: out })
    }

    pub fn scale_by(&self, k: &R) -> Self {
        PowerSeries { low: self.low, c: self.c.iter().map(|v| v.mul(k)).collect() }
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> PowerSeries<S> {
        PowerSeries { low: self.low, c: self.c.iter().map(f).collect() }
    }
}

impl<R: Ring> Arith for PowerSeries<R> {
    fn add(&self, other: &Self) -> Self {
        let low = self.low.min(other.low);
        let order = self.order().min(other.order());
        let c = (low..order)
            .map(|e| {
                let mut v = R::zero();
                if e >= self.low {
                    v.add_assign(&self.c[(e - self.low) as usize]);
                }
                if e >= other.low {
                    v.add_assign(&other.c[(e - other.low) as usize]);
                }
                v
            })
            .collect();
        PowerSeries { low, c }
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let low = self.low + other.low;
        let order = (self.low + other.order()).min(other.low + self.order());
        let len = (order - low).max(0) as usize;
        let mut c = vec![R::zero(); len];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    c[i + j].add_assign(&a.mul(b));
                }
            }
        }
        PowerSeries { low, c }
    }
    fn neg(&self) -> Self {
        PowerSeries { low: self.low, c: self.c.iter().map(|v| v.neg()).collect() }
    }
}
