//! The commutative-ring contract shared by every coefficient type.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision exact rational, always kept in lowest terms.
pub type Rational = BigRational;

/// Additive and multiplicative structure without a canonical zero.
///
/// Series and matrices implement this; scalar rings implement [`Ring`].
pub trait Arith: Clone + Debug {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// A commutative Q-algebra with exact arithmetic.
pub trait Ring: Arith + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;

    /// Multiplicative inverse when `self` is a unit.
    fn inverse(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn scale(&self, q: &Rational) -> Self {
        self.mul(&Self::from_rational(q))
    }

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Arith for Rational {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

/// `n/d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"a"`, `"-a/b"` style text into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Canonical text form: `num/den`, with the denominator omitted when it is 1.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering rounded to `digits` places, for display only.
pub fn rational_to_decimal(q: &Rational, digits: usize) -> String {
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, digits);
    let scaled = q * Rational::from_integer(scale.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        -((-scaled) + half).floor()
    } else {
        (scaled + half).floor()
    };
    let n = rounded.to_integer();
    let neg = n.is_negative();
    let digits_str = n.abs().to_string();
    let body = if digits == 0 {
        digits_str
    } else {
        let padded = format!("{:0>width$}", digits_str, width = digits + 1);
        let (a, b) = padded.split_at(padded.len() - digits);
        format!("{a}.{b}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// (2k+1)!! with the convention (-1)!! = 1; `double_factorial(k)` is the
/// product of odd numbers up to `k`.
pub fn double_factorial(k: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut j = k;
    while j > 1 {
        acc *= BigInt::from(j);
        j -= 2;
    }
    acc
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Rising factorial (a)_k.
pub fn pochhammer<R: Ring>(a: &R, k: usize) -> R {
    let mut acc = R::one();
    for j in 0..k {
        acc = acc.mul(&a.add(&R::from_int(j as i64)));
    }
    acc
}
