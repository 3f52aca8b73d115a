//! The Lamé family with initial data C℘(x): the elliptic ring V, the b-series
//! coefficients P_k, spectral-curve checks at triangular C and partial
//! correlation functions in elliptic and x-Laurent form.

use crate::error::Result;
use crate::exact_series::{rat, substitute_jets, Arith, Monomial, ParamPoly, PowerSeries, Rational, Ring, TruncSeries};
use crate::matrix_resolvent::{ResidualReport, LAMBDA};
use crate::tau_structure::omega_multi;

/// Variable slots of [`ParamPoly`] in this module.
pub const VAR_C: usize = 0;
pub const VAR_G2: usize = 1;
pub const VAR_G3: usize = 2;
pub const VAR_X: usize = 3;
pub const NAMES: [&str; 4] = ["C", "g2", "g3", "X"];

/// Weights with wt X = 2, wt g2 = 4, wt g3 = 6 and C of weight 0.
pub fn modular_weight(i: usize) -> i64 {
    match i {
        VAR_G2 => 4,
        VAR_G3 => 6,
        VAR_X => 2,
        _ => 0,
    }
}

fn var(i: usize) -> ParamPoly {
    ParamPoly::var(i)
}

fn cst(q: Rational) -> ParamPoly {
    ParamPoly::constant(q)
}

/// 4X³ − g2X − g3, the value of Y².
pub fn y_squared() -> ParamPoly {
    let x = var(VAR_X);
    x.pow(3).scale(&rat(4, 1)).sub(&var(VAR_G2).mul(&x)).sub(&var(VAR_G3))
}

/// poly0 + poly1·Y with X = ℘, Y = ℘′ and Y² = 4X³ − g2X − g3.
#[derive(Clone, Debug, PartialEq)]
pub struct EllipticElem {
    pub poly0: ParamPoly,
    pub poly1: ParamPoly,
}

impl EllipticElem {
    pub fn new(poly0: ParamPoly, poly1: ParamPoly) -> Self {
        EllipticElem { poly0, poly1 }
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        EllipticElem { poly0: p, poly1: ParamPoly::zero() }
    }

    /// ℘ as an element of V.
    pub fn wp() -> Self {
        Self::from_poly(var(VAR_X))
    }

    /// ℘′ as an element of V.
    pub fn wp_prime() -> Self {
        EllipticElem { poly0: ParamPoly::zero(), poly1: ParamPoly::one() }
    }

    /// ∂_x, with ∂_x X = Y and ∂_x Y = 6X² − g2/2.
    pub fn derive(&self) -> Self {
        let y_prime = var(VAR_X).pow(2).scale(&rat(6, 1)).sub(&var(VAR_G2).scale(&rat(1, 2)));
        let p0 = self.poly1.partial(VAR_X).mul(&y_squared()).add(&self.poly1.mul(&y_prime));
        EllipticElem { poly0: p0, poly1: self.poly0.partial(VAR_X) }
    }

    /// Evaluate at X = ℘(x), Y = ℘′(x) given as x-Laurent series.
    pub fn to_laurent(&self, wp: &PowerSeries<ParamPoly>, wp_prime: &PowerSeries<ParamPoly>) -> PowerSeries<ParamPoly> {
        let p0 = poly_at_x(&self.poly0, wp);
        if self.poly1.is_zero() {
            return p0;
        }
        p0.add(&poly_at_x(&self.poly1, wp).mul(wp_prime))
    }

    pub fn to_text(&self) -> String {
        format!("({}) + ({})*Y", self.poly0.to_text(&NAMES), self.poly1.to_text(&NAMES))
    }
}

/// Substitute X by an x-series, keeping C, g2, g3 in the coefficients.
fn poly_at_x(p: &ParamPoly, wp: &PowerSeries<ParamPoly>) -> PowerSeries<ParamPoly> {
    let dx = p.degree_in(VAR_X).unwrap_or(0) as usize;
    let mut powers = vec![PowerSeries::constant(ParamPoly::one(), wp.order() + 2 * dx as i64)];
    for _ in 0..dx {
        let next = powers.last().unwrap().mul(wp);
        powers.push(next);
    }
    let order = powers.iter().map(|s| s.order()).min().unwrap();
    let mut acc = PowerSeries::zero(order);
    for (m, c) in p.terms() {
        let e = m.exp(VAR_X) as usize;
        let mut v = m.exps().to_vec();
        if VAR_X < v.len() {
            v[VAR_X] = 0;
        }
        let coeff = ParamPoly::term(Monomial::new(v), c.clone());
        acc = acc.add(&powers[e].scale_by(&coeff));
    }
    acc
}

impl Arith for EllipticElem {
    fn add(&self, other: &Self) -> Self {
        EllipticElem { poly0: self.poly0.add(&other.poly0), poly1: self.poly1.add(&other.poly1) }
    }
    fn sub(&self, other: &Self) -> Self {
        EllipticElem { poly0: self.poly0.sub(&other.poly0), poly1: self.poly1.sub(&other.poly1) }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut p0 = self.poly0.mul(&other.poly0);
        if !self.poly1.is_zero() && !other.poly1.is_zero() {
            p0 = p0.add(&self.poly1.mul(&other.poly1).mul(&y_squared()));
        }
        let p1 = self.poly0.mul(&other.poly1).add(&self.poly1.mul(&other.poly0));
        EllipticElem { poly0: p0, poly1: p1 }
    }
    fn neg(&self) -> Self {
        EllipticElem { poly0: self.poly0.neg(), poly1: self.poly1.neg() }
    }
}

impl Ring for EllipticElem {
    fn zero() -> Self {
        Self::from_poly(ParamPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(ParamPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.poly0.is_zero() && self.poly1.is_zero()
    }
    fn from_rational(q: &Rational) -> Self {
        Self::from_poly(cst(q.clone()))
    }
    fn inverse(&self) -> Option<Self> {
        if self.poly1.is_zero() {
            self.poly0.inverse().map(Self::from_poly)
        } else {
            None
        }
    }
}

/// u_i = ∂_x^i (C℘) for i < count.
pub fn lame_jets(count: usize) -> Vec<EllipticElem> {
    let mut out = Vec::with_capacity(count);
    let mut cur = EllipticElem::from_poly(var(VAR_C).mul(&var(VAR_X)));
    for _ in 0..count {
        let next = cur.derive();
        out.push(cur);
        cur = next;
    }
    out
}

/// x-Laurent coefficients a_k of ℘ = Σ a_k x^{2k−2}, k < terms.
pub fn wp_coefficients(terms: usize) -> Vec<ParamPoly> {
    let mut a: Vec<ParamPoly> = Vec::with_capacity(terms);
    for k in 0..terms {
        let v = match k {
            0 => ParamPoly::one(),
            1 => ParamPoly::zero(),
            // The x⁰ coefficient of ℘′² = 4℘³ − g2℘ − g3 gives −16a₃ = 12a₃ − g3.
            3 => var(VAR_G3).scale(&rat(1, 28)),
            _ => {
                // ℘″ = 6℘² − g2/2 at x^{2k−4}: 2(2k+1)(k−3) a_k = 6 Σ_{0<i<k} a_i a_{k−i} − (g2/2)δ_{k2}.
                let mut s = ParamPoly::zero();
                for i in 1..k {
                    s = s.add(&a[i].mul(&a[k - i]));
                }
                s = s.scale(&rat(6, 1));
                if k == 2 {
                    s = s.sub(&var(VAR_G2).scale(&rat(1, 2)));
                }
                let kk = k as i64;
                s.scale(&rat(1, 2 * (2 * kk + 1) * (kk - 3)))
            }
        };
        a.push(v);
    }
    a
}

/// ℘ as an x-series exact through x^{max_exp}.
pub fn wp_series(max_exp: i64) -> PowerSeries<ParamPoly> {
    let terms = ((max_exp + 2) / 2 + 1).max(1) as usize;
    let a = wp_coefficients(terms);
    let len = (max_exp + 3).max(0) as usize;
    let mut c = vec![ParamPoly::zero(); len];
    for (k, v) in a.into_iter().enumerate() {
        if 2 * k < len {
            c[2 * k] = v;
        }
    }
    PowerSeries::new(-2, c)
}

/// P_0..P_kmax, from collecting powers of λ in
/// S(2bb″ − b′²) + (3X² − g2/4)bb′ + (2CX − λ)b² + λ = 0 with ′ = ∂_X,
/// S = X³ − g2X/4 − g3/4 and b = Σ P_m λ^{−m}.
pub fn lame_p_list(kmax: usize) -> Vec<ParamPoly> {
    let x = var(VAR_X);
    let s = x.pow(3).sub(&var(VAR_G2).mul(&x).scale(&rat(1, 4))).sub(&var(VAR_G3).scale(&rat(1, 4)));
    let half_t = x.pow(2).scale(&rat(3, 2)).sub(&var(VAR_G2).scale(&rat(1, 8)));
    let cx = var(VAR_C).mul(&x);
    let mut p = vec![ParamPoly::one()];
    let mut dp = vec![ParamPoly::zero()];
    let mut ddp = vec![ParamPoly::zero()];
    for k in 1..=kmax {
        let mut acc = ParamPoly::zero();
        for i in 0..k {
            let j = k - 1 - i;
            let term = cx
                .mul(&p[i].mul(&p[j]))
                .add(&half_t.mul(&p[i].mul(&dp[j])))
                .add(&s.mul(&p[i].mul(&ddp[j]).sub(&dp[i].mul(&dp[j]).scale(&rat(1, 2)))));
            acc = acc.add(&term);
        }
        for i in 1..k {
            acc = acc.sub(&p[i].mul(&p[k - i]).scale(&rat(1, 2)));
        }
        dp.push(acc.partial(VAR_X));
        ddp.push(dp[k].partial(VAR_X));
        p.push(acc);
    }
    p
}

#[allow(non_snake_case)]
pub fn lame_P(k: usize) -> ParamPoly {
    lame_p_list(k).pop().unwrap()
}

/// The LameData record: P_0..P_K and b = Σ P_m λ^{−m} through λ^{−K}.
#[derive(Clone, Debug)]
pub struct LameData {
    pub depth: usize,
    pub p_list: Vec<ParamPoly>,
    pub b: TruncSeries<ParamPoly>,
}

impl LameData {
    pub fn new(depth: usize) -> Self {
        let p_list = lame_p_list(depth);
        let b = TruncSeries::from_terms(LAMBDA, depth as i64, p_list.iter().enumerate().map(|(m, p)| (-(m as i64), p.clone())));
        LameData { depth, p_list, b }
    }
}

/// b through λ^{−depth}.
pub fn lame_b(depth: usize) -> TruncSeries<ParamPoly> {
    LameData::new(depth).b
}

/// b_xx·b − ½b_x² − 2(λ − 2C℘)b² + 2λ, computed in V with x-derivatives.
pub fn lame_b10_residual(depth: usize) -> TruncSeries<EllipticElem> {
    let b = lame_b(depth).map_coeffs(|p| EllipticElem::from_poly(p.clone()));
    let bx = b.map_coeffs(EllipticElem::derive);
    let bxx = bx.map_coeffs(EllipticElem::derive);
    let tail = depth as i64;
    let lam = TruncSeries::monomial(LAMBDA, 1, EllipticElem::one(), tail + 1);
    let cwp = EllipticElem::from_poly(var(VAR_C).mul(&var(VAR_X)).scale(&rat(2, 1)));
    let pot = lam.sub(&TruncSeries::constant(LAMBDA, cwp, tail + 1));
    let two = Rational::from_integer(2.into());
    bxx.mul(&b)
        .sub(&bx.mul(&bx).scale_rational(&rat(1, 2)))
        .sub(&pot.mul(&b.mul(&b)).scale_rational(&two))
        .add(&lam.scale_rational(&two))
}

/// Whether every P_k with k ≤ kmax is homogeneous of weight 2k.
pub fn lame_homogeneity(kmax: usize) -> bool {
    lame_p_list(kmax).iter().enumerate().all(|(k, p)| {
        p.is_zero() || (p.is_isobaric(modular_weight) && p.terms().all(|(m, _)| m.weight(modular_weight) == 2 * k as i64))
    })
}

/// Σ c_i λ^{−i} with the given coefficients, all constant in C.
fn inverse_poly(coeffs: &[ParamPoly], tail: i64) -> TruncSeries<ParamPoly> {
    TruncSeries::from_terms(LAMBDA, tail, coeffs.iter().enumerate().map(|(i, c)| (-(i as i64), c.clone())))
}

fn lin(terms: &[(Rational, ParamPoly)]) -> ParamPoly {
    terms.iter().fold(ParamPoly::zero(), |acc, (q, p)| acc.add(&p.scale(q)))
}

/// Closed form of b at the triangular value C = −p(p+1)/2 through λ^{−depth}.
///
/// Each displayed ratio is rewritten as (numerator/λ^p)·(radicand/lead·λ^deg)^{−1/2}.
pub fn spectral_closed_form(p: usize, depth: usize) -> Result<TruncSeries<ParamPoly>> {
    let tail = depth.max(6) as i64;
    let (x, g2, g3) = (var(VAR_X), var(VAR_G2), var(VAR_G3));
    let one = ParamPoly::one();
    let (num, rad): (Vec<ParamPoly>, Vec<ParamPoly>) = match p {
        1 => (
            vec![one.clone(), x.neg()],
            vec![one.clone(), ParamPoly::zero(), g2.scale(&rat(-1, 4)), g3.scale(&rat(-1, 4))],
        ),
        2 => {
            // (λ² − 3g2)(4λ³ − 9g2λ + 27g3)/4.
            let a = inverse_poly(&[one.clone(), ParamPoly::zero(), g2.scale(&rat(-3, 1))], tail);
            let b = inverse_poly(&[one.clone(), ParamPoly::zero(), g2.scale(&rat(-9, 4)), g3.scale(&rat(27, 4))], tail);
            let r = a.mul(&b);
            (
                vec![one.clone(), x.scale(&rat(-3, 1)), lin(&[(rat(9, 1), x.pow(2)), (rat(-9, 4), g2.clone())])],
                (0..=5).map(|i| r.at(-i)).collect(),
            )
        }
        3 => (
            vec![
                one.clone(),
                x.scale(&rat(-6, 1)),
                lin(&[(rat(45, 1), x.pow(2)), (rat(-15, 1), g2.clone())]),
                lin(&[(rat(-225, 1), x.pow(3)), (rat(225, 4), g2.mul(&x)), (rat(225, 4), g3.clone())]),
            ],
            vec![
                one.clone(),
                ParamPoly::zero(),
                g2.scale(&rat(-504, 16)),
                g3.scale(&rat(2376, 16)),
                g2.pow(2).scale(&rat(4185, 16)),
                g2.mul(&g3).scale(&rat(-36450, 16)),
                lin(&[(rat(-3375, 16), g2.pow(3)), (rat(91125, 16), g3.pow(2))]),
            ],
        ),
        _ => return Err(crate::Error::InvalidRequest(format!("closed forms are displayed for p = 1, 2, 3, not {p}"))),
    };
    let num = inverse_poly(&num, tail);
    let rad = inverse_poly(&rad, tail).pow_rational(&rat(-1, 2))?;
    Ok(num.mul(&rad).truncate(depth as i64))
}

/// S_p for p ≤ 2 as displayed, as λ-polynomials (ascending coefficients).
pub fn spectral_s(p: usize) -> Vec<ParamPoly> {
    let (g2, g3) = (var(VAR_G2), var(VAR_G3));
    let z = ParamPoly::zero();
    let one = ParamPoly::one();
    match p {
        0 => vec![z, one],
        1 => vec![g3.scale(&rat(-1, 4)), g2.scale(&rat(-1, 4)), z.clone(), one],
        2 => {
            let a = [g2.scale(&rat(-3, 1)), z.clone(), one.clone()];
            let b = [g3.scale(&rat(27, 4)), g2.scale(&rat(-9, 4)), z.clone(), one.clone()];
            let mut out = vec![ParamPoly::zero(); 6];
            for (i, u) in a.iter().enumerate() {
                for (j, v) in b.iter().enumerate() {
                    out[i + j] = out[i + j].add(&u.mul(v));
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

/// Specialize C in a λ-series.
fn at_c(s: &TruncSeries<ParamPoly>, c: &Rational) -> TruncSeries<ParamPoly> {
    let cp = cst(c.clone());
    s.map_coeffs(|p| p.substitute(VAR_C, &cp))
}

/// Compare the closed form with the P_k series at C = −p(p+1)/2, and check
/// that (S_p/λ)·b² is a monic polynomial of degree 2p (p ≤ 2).
pub fn spectral_check(p: usize, depth: usize) -> Result<ResidualReport> {
    let c = rat(-((p * (p + 1)) as i64), 2);
    let b = at_c(&lame_b(depth), &c);
    let closed = spectral_closed_form(p, depth)?;
    let mut report = ResidualReport::default();
    report.push(&format!("closed form p={p}"), &closed.sub(&b));
    if p <= 2 {
        let s = spectral_s(p);
        let tail = depth as i64;
        let s_over_l = TruncSeries::from_terms(LAMBDA, tail, s.iter().enumerate().map(|(i, v)| (i as i64 - 1, v.clone())));
        let prod = s_over_l.mul(&b).mul(&b);
        let negative = TruncSeries::from_terms(LAMBDA, prod.tail(), prod.terms().filter(|(e, _)| *e < 0).map(|(e, v)| (e, v.clone())));
        report.push(&format!("S_{p} polynomiality"), &negative);
        report.push_flag(&format!("S_{p} monic degree {}", 2 * p), prod.head() == Some(2 * p as i64) && prod.at(2 * p as i64).is_one());
    }
    Ok(report)
}

/// Output forms of a partial correlation function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LameOutput {
    Elliptic,
    XLaurent,
}

/// Ω_{p_1..p_n}(x) in V, n ≥ 2.
pub fn lame_partial_correlator(ps: &[usize]) -> Result<EllipticElem> {
    let poly = omega_multi(ps)?;
    let count = poly.max_var().map_or(1, |m| m + 1);
    substitute_jets(&poly, &lame_jets(count))
}

/// Ω_{p_1..p_n}(x) as an x-Laurent series exact through x^{max_exp}.
pub fn lame_partial_laurent(ps: &[usize], max_exp: i64) -> Result<PowerSeries<ParamPoly>> {
    let e = lame_partial_correlator(ps)?;
    let dx = e.poly0.degree_in(VAR_X).unwrap_or(0).max(e.poly1.degree_in(VAR_X).unwrap_or(0) + 2) as i64;
    // X^d loses 2(d−1) orders; the Y factor loses 3 more.
    let wp = wp_series(max_exp + 2 * dx + 4);
    let wpp = wp.derivative();
    Ok(e.to_laurent(&wp, &wpp).truncate(max_exp + 1))
}

/// Convenience for building x-Laurent targets.
pub fn laurent_from(terms: &[(i64, ParamPoly)], low: i64, max_exp: i64) -> PowerSeries<ParamPoly> {
    let mut c = vec![ParamPoly::zero(); (max_exp + 1 - low) as usize];
    for (e, v) in terms {
        c[(e - low) as usize] = v.clone();
    }
    PowerSeries::new(low, c)
}
