//! 2x2 matrices over any [`Arith`] type, usually truncated series.

use super::ring::Arith;

/// `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Arith> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Entry `(i, j)` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> &T {
        match (i, j) {
            (1, 1) => &self.a,
            (1, 2) => &self.b,
            (2, 1) => &self.c,
            (2, 2) => &self.d,
            _ => panic!("Mat2 index ({i},{j}) out of range"),
        }
    }

    pub fn trace(&self) -> T {
        self.a.add(&self.d)
    }

    pub fn det(&self) -> T {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn map<S: Arith>(&self, f: impl Fn(&T) -> S) -> Mat2<S> {
        Mat2 { a: f(&self.a), b: f(&self.b), c: f(&self.c), d: f(&self.d) }
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl<T: Arith> Arith for Mat2<T> {
    fn add(&self, o: &Self) -> Self {
        Mat2 { a: self.a.add(&o.a), b: self.b.add(&o.b), c: self.c.add(&o.c), d: self.d.add(&o.d) }
    }
    fn sub(&self, o: &Self) -> Self {
        Mat2 { a: self.a.sub(&o.a), b: self.b.sub(&o.b), c: self.c.sub(&o.c), d: self.d.sub(&o.d) }
    }
    fn mul(&self, o: &Self) -> Self {
        Mat2 {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
    }
    fn neg(&self) -> Self {
        Mat2 { a: self.a.neg(), b: self.b.neg(), c: self.c.neg(), d: self.d.neg() }
    }
}
