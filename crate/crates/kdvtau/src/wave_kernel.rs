//! Wave-function pairs at a base point, the kernels D and K, the kernel
//! formulas for n-point series, and the A_mn coefficient algebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::bessel_model::a_k;
use crate::error::{Error, Result};
use crate::exact_series::ring::{binomial, rat};
use crate::exact_series::{Arith, PowerSeries, Rational, Ring, TruncSeries};
use crate::matrix_resolvent::{mr_from_initial_data, ResidualReport};
use crate::tau_structure::{cyclic_orders, inv_weight};

pub const Z: &str = "z";

/// Extra orders a pair carries beyond the kernel depth it is built for.
pub const PAIR_MARGIN: i64 = 3;

/// β'_j and β_j (j = 1..J) as x-series; `dbeta[j-1]` is β'_j.
#[derive(Clone, Debug)]
pub struct BetaData<R> {
    pub dbeta: Vec<PowerSeries<R>>,
    pub beta: Vec<PowerSeries<R>>,
}

/// Solve β'_j = -β''_{j-1}/2 - (1/2) Σ_{j1+j2=j-1} β'_{j1}β'_{j2} - f δ_{j,1},
/// integrating with zero constant at x = 0.
pub fn beta_coeffs<R: Ring>(f: &PowerSeries<R>, depth: usize) -> Result<BetaData<R>> {
    if f.order() < depth as i64 {
        return Err(Error::DepthExhausted { needed: depth, available: f.order().max(0) as usize });
    }
    let half = R::from_rational(&rat(-1, 2));
    let mut dbeta: Vec<PowerSeries<R>> = Vec::with_capacity(depth);
    for j in 1..=depth {
        let next = if j == 1 {
            f.neg()
        } else {
            let mut acc = dbeta[j - 2].derivative();
            for j1 in 1..j - 1 {
                let j2 = j - 1 - j1;
                acc = acc.add(&dbeta[j1 - 1].mul(&dbeta[j2 - 1]));
            }
            acc.scale_by(&half)
        };
        dbeta.push(next);
    }
    let beta = dbeta.iter().map(|d| d.integrate()).collect::<Result<Vec<_>>>()?;
    Ok(BetaData { dbeta, beta })
}

/// A pair of wave functions at a base point, exponentials evaluated there.
///
/// `psi_x` is ∂_xψ at the base point, so it carries the leading z from e^{xz};
/// `b` and `b_x` are b(z², ·) and its x-derivative there.
#[derive(Clone, Debug)]
pub struct WavePair<R> {
    pub psi: TruncSeries<R>,
    pub psi_x: TruncSeries<R>,
    pub psi_star: TruncSeries<R>,
    pub psi_star_x: TruncSeries<R>,
    pub b: TruncSeries<R>,
    pub b_x: TruncSeries<R>,
    /// f, f', f'', ... at the base point.
    pub f_jets: Vec<R>,
    pub depth: usize,
}

/// b(z²) and b_x(z²) at the base point from a resolvent in λ.
pub fn b_in_z<R: Ring>(r: &crate::exact_series::Mat2<TruncSeries<R>>) -> (TruncSeries<R>, TruncSeries<R>) {
    let b = r.b.square_variable(Z);
    let bx = r.a.scale_rational(&Rational::from_integer(2.into())).square_variable(Z);
    (b, bx)
}

/// ψ* = b/ψ and ∂_xψ* = (b_x ψ - b ψ_x)/ψ².
pub fn dual_from_psi<R: Ring>(
    psi: &TruncSeries<R>,
    psi_x: &TruncSeries<R>,
    b: &TruncSeries<R>,
    b_x: &TruncSeries<R>,
) -> Result<(TruncSeries<R>, TruncSeries<R>)> {
    let inv = psi.inverse()?;
    let star = b.try_mul(&inv)?;
    let star_x = b_x.try_mul(psi)?.try_add(&b.try_mul(psi_x)?.neg())?.try_mul(&inv.try_mul(&inv)?)?;
    Ok((star, star_x))
}

/// Derivatives f^{(l)}(0) of an x-series.
pub fn jets_of<R: Ring>(f: &PowerSeries<R>, count: usize) -> Result<Vec<R>> {
    let mut out = Vec::with_capacity(count);
    let mut d = f.clone();
    for _ in 0..count {
        out.push(d.coeff(0)?);
        d = d.derivative();
    }
    Ok(out)
}

impl<R: Ring> WavePair<R> {
    /// The pair with ψ(z, 0) = 1 obtained from the β-recursion.
    pub fn from_initial_data(f: &PowerSeries<R>, depth: usize) -> Result<Self> {
        let tail = depth as i64 + PAIR_MARGIN;
        let depth = depth + PAIR_MARGIN as usize;
        let beta = beta_coeffs(f, depth)?;
        let psi = TruncSeries::constant(Z, R::one(), tail);
        let mut terms = vec![(1, R::one())];
        for (j, d) in beta.dbeta.iter().enumerate() {
            terms.push((-(j as i64) - 1, d.coeff(0)?));
        }
        let psi_x = TruncSeries::from_terms(Z, tail, terms);
        let r = mr_from_initial_data(f, (depth + 1) / 2 + 1)?;
        let (b, b_x) = b_in_z(&r);
        Self::from_psi(psi, psi_x, b.truncate(tail), b_x.truncate(tail), jets_of(f, depth.min(f.order().max(0) as usize))?, depth)
    }

    /// Complete ψ with its dual.
    pub fn from_psi(
        psi: TruncSeries<R>,
        psi_x: TruncSeries<R>,
        b: TruncSeries<R>,
        b_x: TruncSeries<R>,
        f_jets: Vec<R>,
        depth: usize,
    ) -> Result<Self> {
        let (psi_star, psi_star_x) = dual_from_psi(&psi, &psi_x, &b, &b_x)?;
        Ok(WavePair { psi, psi_x, psi_star, psi_star_x, b, b_x, f_jets, depth })
    }

    /// Multiply ψ by g(z) and divide ψ* by it.
    pub fn regauge(&self, g: &TruncSeries<R>) -> Result<Self> {
        let gi = g.inverse()?;
        Ok(WavePair {
            psi: self.psi.try_mul(g)?,
            psi_x: self.psi_x.try_mul(g)?,
            psi_star: self.psi_star.try_mul(&gi)?,
            psi_star_x: self.psi_star_x.try_mul(&gi)?,
            ..self.clone()
        })
    }

    /// ∂_x^i ψ at the base point for i = 0..=imax, from ψ'' = (z² - 2f)ψ.
    pub fn psi_derivatives(&self, imax: usize) -> Result<Vec<TruncSeries<R>>> {
        let mut out = vec![self.psi.clone(), self.psi_x.clone()];
        let z2 = TruncSeries::monomial(Z, 2, R::one(), self.psi.tail() + 2);
        for i in 0..imax.saturating_sub(1) {
            let mut next = z2.try_mul(&out[i])?;
            for l in 0..=i {
                let fl = self.f_jets.get(l).ok_or(Error::MissingJet(l))?;
                let k = R::from_rational(&Rational::from_integer(binomial(i as i64, l as i64) * BigInt::from(-2)));
                next = next.try_add(&out[i - l].scale_by(&fl.mul(&k)))?;
            }
            out.push(next);
        }
        out.truncate(imax + 1);
        Ok(out)
    }
}

/// Wronskian ψ_xψ* - ψψ*_x = 2z, ψψ* = b, and zero residue of (∂_x^i ψ)ψ* for i <= `imax`.
pub fn pair_verify<R: Ring>(pair: &WavePair<R>, imax: usize) -> ResidualReport {
    let mut rep = ResidualReport::default();
    let two_z = TruncSeries::monomial(Z, 1, R::from_int(2), pair.psi_x.tail());
    let w = pair.psi_x.mul(&pair.psi_star).sub(&pair.psi.mul(&pair.psi_star_x)).sub(&two_z);
    rep.push("wronskian", &w);
    rep.push("product equals b", &pair.psi.mul(&pair.psi_star).sub(&pair.b));
    match pair.psi_derivatives(imax) {
        Ok(ds) => {
            for (i, d) in ds.iter().enumerate() {
                let ok = d.try_mul(&pair.psi_star).and_then(|p| p.coeff(-1)).map(|c| c.is_zero()).unwrap_or(false);
                rep.push_flag(&format!("residue {i}"), ok);
            }
        }
        Err(_) => rep.push_flag("residues", false),
    }
    rep
}

/// A double series Σ q_{ij} z^i w^j with i, j <= -1, known on total degrees >= `min_total`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiSeries<R> {
    coeffs: BTreeMap<(i64, i64), R>,
    min_total: i64,
}

impl<R: Ring> BiSeries<R> {
    pub fn zero(min_total: i64) -> Self {
        BiSeries { coeffs: BTreeMap::new(), min_total }
    }

    pub fn min_total(&self) -> i64 {
        self.min_total
    }

    pub fn coeff(&self, i: i64, j: i64) -> Result<R> {
        if i + j < self.min_total {
            return Err(Error::Truncated { var: "z,w".into(), exponent: i + j, tail: -self.min_total });
        }
        Ok(self.coeffs.get(&(i, j)).cloned().unwrap_or_else(R::zero))
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: &R) {
        if c.is_zero() || i + j < self.min_total {
            return;
        }
        let slot = self.coeffs.entry((i, j)).or_insert_with(R::zero);
        slot.add_assign(c);
        if slot.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &R)> {
        self.coeffs.iter()
    }

    /// Terms z^a w^j with j >= `jmin`.
    fn row(&self, a: i64, jmin: i64) -> impl Iterator<Item = (i64, &R)> {
        self.coeffs.range((a, jmin)..=(a, i64::MAX)).map(|((_, j), c)| (*j, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = BiSeries::zero(self.min_total.max(other.min_total));
        for ((i, j), c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_term(*i, *j, c);
        }
        out
    }

    pub fn scale_by(&self, k: &R) -> Self {
        let mut out = BiSeries::zero(self.min_total);
        for ((i, j), c) in &self.coeffs {
            out.add_term(*i, *j, &c.mul(k));
        }
        out
    }

    /// True when every stored exponent is negative in both variables.
    pub fn is_regular(&self) -> bool {
        self.coeffs.keys().all(|(i, j)| *i < 0 && *j < 0)
    }
}

/// The singular part of a kernel in its first argument z and second w.
#[derive(Clone, Debug)]
pub enum Singular<R> {
    /// 1/(z - w).
    Cauchy,
    /// (B(z) + B(w)) / (2(z - w)) for an even series B(z) = b(z²).
    Symmetric(TruncSeries<R>),
}

/// A kernel: singular part plus a regular double series.
#[derive(Clone, Debug)]
pub struct Kernel<R> {
    pub singular: Singular<R>,
    pub regular: BiSeries<R>,
}

/// Solve (w² - z²) Q = Σ_t f_t(z) g_t(w) for Q with negative exponents only,
/// on total degrees >= `min_total`; any leftover is a divisibility failure.
fn divide_by_w2_minus_z2<R: Ring>(terms: &[(TruncSeries<R>, TruncSeries<R>)], min_total: i64) -> Result<BiSeries<R>> {
    let imax = terms.iter().filter_map(|(f, _)| f.head()).max().unwrap_or(0).max(1);
    let jmax = terms.iter().filter_map(|(_, g)| g.head()).max().unwrap_or(0).max(1);
    let p = |i: i64, j: i64| -> Result<R> {
        let mut acc = R::zero();
        for (f, g) in terms {
            let a = f.coeff(i)?;
            if a.is_zero() {
                continue;
            }
            let b = g.coeff(j)?;
            if !b.is_zero() {
                acc.add_assign(&a.mul(&b));
            }
        }
        Ok(acc)
    };
    let mut q = BiSeries::zero(min_total);
    let mut s = imax + jmax;
    while s - 2 >= min_total {
        for i in (s - jmax)..=imax {
            let j = s - i;
            let lower = if j <= -1 { q.coeff(i - 2, j).unwrap_or_else(|_| R::zero()) } else { R::zero() };
            let v = p(i, j)?.add(&lower);
            if i <= -1 && j - 2 <= -1 {
                q.add_term(i, j - 2, &v);
            } else if !v.is_zero() {
                return Err(Error::NotDivisible(format!("numerator does not vanish on w = ±z (z^{i} w^{j})")));
            }
        }
        s -= 1;
    }
    Ok(q)
}

fn z_monomial<R: Ring>(e: i64, c: R, tail: i64) -> TruncSeries<R> {
    TruncSeries::monomial(Z, e, c, tail)
}

/// D(z,w) = (ψ(z)ψ*_x(w) - ψ*(w)ψ_x(z))/(w² - z²), split as 1/(z-w) plus a
/// regular part known on total degrees >= -`depth`.
pub fn kernel_d<R: Ring>(pair: &WavePair<R>, depth: usize) -> Result<Kernel<R>> {
    // D - 1/(z-w) = (numerator + z + w)/(w² - z²).
    let t = depth as i64 + 4;
    let terms = vec![
        (pair.psi.clone(), pair.psi_star_x.clone()),
        (pair.psi_x.neg(), pair.psi_star.clone()),
        (z_monomial(1, R::one(), t), z_monomial(0, R::one(), t)),
        (z_monomial(0, R::one(), t), z_monomial(1, R::one(), t)),
    ];
    let regular = divide_by_w2_minus_z2(&terms, -(depth as i64)).map_err(depth_error)?;
    Ok(Kernel { singular: Singular::Cauchy, regular })
}

/// K(z,w) from b and b_x, split as (b(z²)+b(w²))/(2(z-w)) plus a regular part.
pub fn kernel_k<R: Ring>(b: &TruncSeries<R>, b_x: &TruncSeries<R>, depth: usize) -> Result<Kernel<R>> {
    let h = R::from_rational(&rat(1, 2));
    let mh = h.neg();
    let t = depth as i64 + 4;
    let one = z_monomial(0, R::one(), t);
    let zee = z_monomial(1, R::one(), t);
    let terms = vec![
        (b.scale_by(&h), b_x.clone()),
        (b_x.scale_by(&mh), b.clone()),
        (b.shift(1).scale_by(&h), one.clone()),
        (zee.scale_by(&mh), b.clone()),
        (b.scale_by(&mh), zee.clone()),
        (one.scale_by(&h), b.shift(1)),
    ];
    let regular = divide_by_w2_minus_z2(&terms, -(depth as i64)).map_err(depth_error)?;
    Ok(Kernel { singular: Singular::Symmetric(b.clone()), regular })
}

fn depth_error(e: Error) -> Error {
    match e {
        Error::Truncated { exponent, .. } => Error::DepthExhausted { needed: (-exponent) as usize, available: 0 },
        other => other,
    }
}

/// (B(z) - B(w))/(z - w) = -Σ_m β_m Σ_{a+c=m+1} z^{-a} w^{-c}, on total degrees >= `min_total`.
pub fn difference_quotient<R: Ring>(b: &TruncSeries<R>, min_total: i64) -> Result<BiSeries<R>> {
    let mut out = BiSeries::zero(min_total);
    for m in 1..=(-1 - min_total) {
        let beta = b.coeff(-m)?;
        if beta.is_zero() {
            continue;
        }
        for a in 1..=m {
            out.add_term(-a, -(m + 1 - a), &beta.neg());
        }
    }
    Ok(out)
}

/// The three regular forms K - B(z)/(z-w), K - B(w)/(z-w) and
/// K - (B(z)+B(w))/(2(z-w)).
pub fn kernel_k_forms<R: Ring>(k: &Kernel<R>) -> Result<[BiSeries<R>; 3]> {
    let b = match &k.singular {
        Singular::Symmetric(b) => b,
        Singular::Cauchy => return Err(Error::InvalidRequest("not a K kernel".into())),
    };
    let dq = difference_quotient(b, k.regular.min_total())?;
    let half = dq.scale_by(&R::from_rational(&rat(1, 2)));
    let first = k.regular.add(&half.scale_by(&R::from_int(-1)));
    let second = k.regular.add(&half);
    Ok([first, second, k.regular.clone()])
}

/// Check K = ψ*(z)ψ(w)D(z,w) on total degrees >= `min_total`, in the form
/// (z - w)(ψ*(z)ψ(w)D_reg - K_reg) = (B(z)+B(w))/2 - ψ*(z)ψ(w).
pub fn kd_relation_holds<R: Ring>(pair: &WavePair<R>, d: &Kernel<R>, k: &Kernel<R>, min_total: i64) -> Result<bool> {
    let coef = |s: &TruncSeries<R>, e: i64| s.coeff(e);
    // ψ*(z)ψ(w)D_reg on the window.
    let mut prod = BiSeries::zero(min_total);
    for ((i, j), c) in d.regular.terms() {
        for (a, pa) in pair.psi_star.terms() {
            for (b, pb) in pair.psi.terms() {
                if i + a + j + b >= min_total {
                    prod.add_term(i + a, j + b, &c.mul(pa).mul(pb));
                }
            }
        }
    }
    if d.regular.min_total() > min_total || k.regular.min_total() > min_total {
        return Err(Error::DepthExhausted { needed: (-min_total) as usize, available: (-d.regular.min_total()) as usize });
    }
    let diff = prod.add(&k.regular.scale_by(&R::from_int(-1)));
    let bz = match &k.singular {
        Singular::Symmetric(b) => b,
        Singular::Cauchy => return Err(Error::InvalidRequest("not a K kernel".into())),
    };
    // Compare coefficients of z^i w^j with i + j >= min_total + 1.
    let mut s = 0i64;
    while s > min_total {
        for i in s..=0 {
            let j = s - i;
            let lhs = diff.coeff(i - 1, j).unwrap_or_else(|_| R::zero()).sub(&diff.coeff(i, j - 1).unwrap_or_else(|_| R::zero()));
            let mut rhs = R::zero();
            if j == 0 {
                rhs.add_assign(&coef(bz, i)?.scale(&rat(1, 2)));
            }
            if i == 0 {
                rhs.add_assign(&coef(bz, j)?.scale(&rat(1, 2)));
            }
            let ps = coef(&pair.psi_star, i)?.mul(&coef(&pair.psi, j)?);
            rhs = rhs.sub(&ps);
            if lhs != rhs {
                return Ok(false);
            }
        }
        s -= 1;
    }
    Ok(true)
}

impl<R: Ring> Kernel<R> {
    /// Monomials z_A^a z_B^b of this kernel evaluated at (z_A, z_B), for a
    /// fixed a and b >= `bmin`. `a_larger` says |z_A| > |z_B|.
    fn edge_terms(&self, a: i64, a_larger: bool, bmin: i64, out: &mut Vec<(i64, R)>) -> Result<()> {
        for (b, c) in self.regular.row(a, bmin) {
            out.push((b, c.clone()));
        }
        match &self.singular {
            Singular::Cauchy => {
                if a_larger && a <= -1 {
                    out.push((-1 - a, R::one()));
                } else if !a_larger && a >= 0 {
                    out.push((-1 - a, R::one().neg()));
                }
            }
            Singular::Symmetric(bs) => {
                let h = R::from_rational(&rat(1, 2));
                let mh = h.neg();
                if a_larger {
                    // Σ_j z_B^j z_A^{-1-j}, times B(z_A) or B(z_B).
                    let mut k = 0;
                    while -a - 1 - k >= 0.max(bmin) {
                        let beta = bs.coeff(-k)?;
                        if !beta.is_zero() {
                            out.push((-a - 1 - k, beta.mul(&h)));
                        }
                        k += 1;
                    }
                    if a <= -1 {
                        let j = -1 - a;
                        let mut k = 0;
                        while j - k >= bmin {
                            let beta = bs.coeff(-k)?;
                            if !beta.is_zero() {
                                out.push((j - k, beta.mul(&h)));
                            }
                            k += 1;
                        }
                    }
                } else {
                    // -Σ_j z_A^j z_B^{-1-j}, times B(z_A) or B(z_B).
                    let mut k = 0.max(-a);
                    while -1 - a - k >= bmin {
                        let beta = bs.coeff(-k)?;
                        if !beta.is_zero() {
                            out.push((-1 - a - k, beta.mul(&mh)));
                        }
                        k += 1;
                    }
                    if a >= 0 {
                        let mut k = 0;
                        while -1 - a - k >= bmin {
                            let beta = bs.coeff(-k)?;
                            if !beta.is_zero() {
                                out.push((-1 - a - k, beta.mul(&mh)));
                            }
                            k += 1;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Coefficient of Π z_j^{exps[j]} in Σ_{σ∈S_n/C_n} Π_i K(z_{σ(i)}, z_{σ(i+1)}).
///
/// Every monomial of a kernel has total degree <= -1, so each edge has total
/// degree >= Σe + n - 1, and both exponents at the first vertex are negative.
pub fn kernel_cycle_sum<R: Ring>(k: &Kernel<R>, exps: &[i64]) -> Result<R> {
    let n = exps.len();
    let sum_e: i64 = exps.iter().sum();
    let edge_min = sum_e + n as i64 - 1;
    if edge_min < k.regular.min_total() {
        return Err(Error::DepthExhausted { needed: (-edge_min) as usize, available: (-k.regular.min_total()) as usize });
    }
    if edge_min > -1 {
        return Ok(R::zero());
    }
    let orders = cyclic_orders(n);
    let parts = orders.par_iter().map(|o| kernel_cycle(k, o, exps, edge_min)).collect::<Result<Vec<R>>>()?;
    Ok(parts.iter().fold(R::zero(), |a, b| a.add(b)))
}

fn kernel_cycle<R: Ring>(k: &Kernel<R>, order: &[usize], exps: &[i64], edge_min: i64) -> Result<R> {
    let n = order.len();
    let e0 = exps[order[0]];
    let mut total = R::zero();
    let mut buf = Vec::new();
    for s in (e0 + 1)..=-1 {
        let mut states: BTreeMap<i64, R> = BTreeMap::new();
        states.insert(s, R::one());
        for i in 0..n {
            let (va, vb) = (order[i], order[(i + 1) % n]);
            let mut next: BTreeMap<i64, R> = BTreeMap::new();
            for (y, acc) in &states {
                let a = exps[va] - y;
                buf.clear();
                k.edge_terms(a, va < vb, edge_min - a, &mut buf)?;
                for (b, c) in &buf {
                    if i == n - 1 && *b != s {
                        continue;
                    }
                    let slot = next.entry(*b).or_insert_with(R::zero);
                    slot.add_assign(&acc.mul(c));
                }
            }
            states = next;
        }
        if let Some(v) = states.get(&s) {
            total.add_assign(v);
        }
    }
    Ok(total)
}

/// Coefficient of 1/(z_1 - z_2)² at z_1^{e_1} z_2^{e_2}.
fn kernel_counterterm(e1: i64, e2: i64) -> i64 {
    if e2 >= 0 && e1 == -2 - e2 {
        e2 + 1
    } else {
        0
    }
}

/// (-1)^{n+1}: with D - 1/(z-w) regular and ψ_xψ* - ψψ*_x = 2z, the cyclic
/// sum carries (-1)^n relative to the correlators, visible at odd n.
fn cycle_sign<R: Ring>(n: usize) -> R {
    if n % 2 == 0 {
        R::one().neg()
    } else {
        R::one()
    }
}

/// Coefficient of Π z_j^{exps[j]} in (-1)^{n+1} Σ_σ Π D(z_{σ(i)}, z_{σ(i+1)}) - δ_{n2}/(z_1-z_2)².
pub fn npoint_from_d<R: Ring>(d: &Kernel<R>, exps: &[i64]) -> Result<R> {
    if exps.len() < 2 {
        return Err(Error::InvalidRequest("the kernel formula needs n >= 2".into()));
    }
    let mut out = kernel_cycle_sum(d, exps)?.mul(&cycle_sign(exps.len()));
    if exps.len() == 2 {
        out = out.sub(&R::from_int(kernel_counterterm(exps[0], exps[1])));
    }
    Ok(out)
}

/// Coefficient of Π z_j^{exps[j]} in (-1)^{n+1} (Π b(z_i²))^{-1} Σ_σ Π K(z_{σ(i)}, z_{σ(i+1)}) - δ_{n2}/(z_1-z_2)².
pub fn npoint_from_k<R: Ring>(k: &Kernel<R>, exps: &[i64]) -> Result<R> {
    let n = exps.len();
    if n < 2 {
        return Err(Error::InvalidRequest("the kernel formula needs n >= 2".into()));
    }
    let b = match &k.singular {
        Singular::Symmetric(b) => b,
        Singular::Cauchy => return Err(Error::InvalidRequest("not a K kernel".into())),
    };
    let ib = b.inverse()?;
    let sum_e: i64 = exps.iter().sum();
    // Monomials of the cyclic sum have total degree <= -n.
    let budget = -(n as i64) - sum_e;
    let mut out = R::zero();
    let mut shift = vec![0i64; n];
    loop {
        let used: i64 = shift.iter().sum();
        if used <= budget {
            let mut w = R::one();
            for s in &shift {
                w = w.mul(&ib.coeff(-s)?);
                if w.is_zero() {
                    break;
                }
            }
            if !w.is_zero() {
                let e: Vec<i64> = exps.iter().zip(&shift).map(|(a, s)| a + s).collect();
                out.add_assign(&w.mul(&kernel_cycle_sum(k, &e)?));
            }
        }
        // Next shift vector in even steps, bounded by the budget.
        let mut j = n;
        loop {
            if j == 0 {
                let mut res = out.mul(&cycle_sign(n));
                if n == 2 {
                    res = res.sub(&R::from_int(kernel_counterterm(exps[0], exps[1])));
                }
                return Ok(res);
            }
            j -= 1;
            if shift.iter().sum::<i64>() + 2 <= budget {
                shift[j] += 2;
                break;
            }
            shift[j] = 0;
        }
    }
}

/// z-exponents -(2p+2) for indices p.
pub fn z_exponents(ps: &[usize]) -> Vec<i64> {
    ps.iter().map(|p| -2 * *p as i64 - 2).collect()
}

/// Ω_{p_1..p_n} through the D kernel.
pub fn correlator_from_d<R: Ring>(d: &Kernel<R>, ps: &[usize]) -> Result<R> {
    Ok(npoint_from_d(d, &z_exponents(ps))?.mul(&inv_weight(ps)))
}

/// Ω_{p_1..p_n} through the K kernel.
pub fn correlator_from_k<R: Ring>(k: &Kernel<R>, ps: &[usize]) -> Result<R> {
    Ok(npoint_from_k(k, &z_exponents(ps))?.mul(&inv_weight(ps)))
}

/// Kernel depth sufficient for indices `ps`: every edge has total degree >= Σe + n - 1.
pub fn kernel_depth(ps: &[usize]) -> usize {
    ps.iter().map(|p| 2 * p + 2).sum::<usize>() + 1 - ps.len()
}

/// A_{mn} read off D = 1/(z-w) + Σ A_{mn} z^{-m} (-w)^{-n}.
pub fn amn_from_kernel<R: Ring>(d: &Kernel<R>, m: i64, n: i64) -> Result<R> {
    let c = d.regular.coeff(-m, -n)?;
    Ok(if n % 2 == 0 { c } else { c.neg() })
}

/// A_{mn} for m <= `mmax`, n <= `nmax` from A_{m,n+1} - A_{m+1,n} = (m-n)/(m+n) a_m a_n
/// with A_{m,0} = 0. `table[m][n]` is A_{mn}.
pub fn amn_recursion<R: Ring>(c: &R, mmax: usize, nmax: usize) -> Vec<Vec<R>> {
    let width = mmax + nmax + 1;
    let a: Vec<R> = (0..=width).map(|k| a_k(c, k)).collect();
    let mut cols: Vec<Vec<R>> = vec![vec![R::zero(); width + 1]];
    for n in 1..=nmax {
        let prev = &cols[n - 1];
        let mut col = vec![R::zero(); width + 1 - n];
        for (m, slot) in col.iter_mut().enumerate() {
            if m == 0 {
                continue;
            }
            // A_{m,n} = A_{m+1,n-1} + (m-n+1)/(m+n-1) a_m a_{n-1}.
            let num = m as i64 - n as i64 + 1;
            let den = m as i64 + n as i64 - 1;
            *slot = prev[m + 1].add(&a[m].mul(&a[n - 1]).scale(&rat(num, den)));
        }
        cols.push(col);
    }
    (0..=mmax).map(|m| (0..=nmax).map(|n| cols[n][m].clone()).collect()).collect()
}

/// Σ_{r >= lo, s >= 0, r+s = m+n-1} (r-s)/(r+s) a_r a_s.
fn amn_sum<R: Ring>(c: &R, m: usize, n: usize, lo: usize) -> R {
    if m + n == 0 {
        return R::zero();
    }
    let total = m + n - 1;
    let mut acc = R::zero();
    for r in lo..=total {
        let s = total - r;
        if r + s == 0 {
            continue;
        }
        let w = rat(r as i64 - s as i64, (r + s) as i64);
        acc.add_assign(&a_k(c, r).mul(&a_k(c, s)).scale(&w));
    }
    acc
}

/// The two finite-sum forms of A_{mn}: summing over r >= m and over r >= n.
pub fn amn_simple<R: Ring>(c: &R, m: usize, n: usize) -> (R, R) {
    if m == 0 || n == 0 {
        return (R::zero(), R::zero());
    }
    (amn_sum(c, m, n, m), amn_sum(c, m, n, n))
}

/// C = (1/4 - α²)/2.
pub fn c_from_alpha(alpha: &Rational) -> Rational {
    (rat(1, 4) - alpha * alpha) / Rational::from_integer(2.into())
}

/// The closed form 2 m! n! a_m a_n /((m+n-1)(m+n-1)!) Σ_k (-1)^k C(m+n-1,m+k) C(m+n-1,n+k)/(α-k-1/2).
pub fn amn_closed(alpha: &Rational, m: usize, n: usize) -> Result<Rational> {
    if m == 0 || n == 0 {
        return Ok(Rational::from_integer(0.into()));
    }
    let c = c_from_alpha(alpha);
    let t = (m + n - 1) as i64;
    let (m, n) = (m as i64, n as i64);
    let mut sum = Rational::from_integer(0.into());
    for k in -m.min(n)..=(m.min(n) - 1) {
        let b1 = binomial(t, m + k);
        let b2 = binomial(t, n + k);
        let num = b1 * b2;
        if num == BigInt::from(0) {
            continue;
        }
        let den = alpha - Rational::from_integer(k.into()) - rat(1, 2);
        if den == Rational::from_integer(0.into()) {
            return Err(Error::PoleCollision(format!("α = {alpha} meets the pole at k = {k}")));
        }
        let term = Rational::from_integer(num) / den;
        sum = if k.rem_euclid(2) == 0 { sum + term } else { sum - term };
    }
    let fact = |x: i64| Rational::from_integer(crate::exact_series::ring::factorial(x as u64));
    let pre = Rational::from_integer(2.into()) * fact(m) * fact(n) * a_k(&c, m as usize) * a_k(&c, n as usize)
        / (Rational::from_integer(t.into()) * fact(t));
    Ok(pre * sum)
}
