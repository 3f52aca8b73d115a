//! The tau-structure Ω_{p,q}, its multi-point extension, and the cyclic trace
//! formula for n-point generating series.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_series::ring::double_factorial;
use crate::airy_model::wk_m;
use crate::bessel_model::{gbgw_r, onepoint_closed, theta_m};
use crate::exact_series::{rat, Arith, DiffPoly, Mat2, MultiSeries, ParamPoly, Rational, Ring, TruncSeries};
use crate::matrix_resolvent::{KdvFlows, ResolventData};

/// (2p+1)!! as a rational.
pub fn weight(p: usize) -> Rational {
    Rational::from_integer(double_factorial(2 * p as i64 + 1))
}

/// Π 1/(2p_j+1)!!.
pub fn inv_weight<R: Ring>(ps: &[usize]) -> R {
    let mut d = BigInt::from(1);
    for p in ps {
        d *= double_factorial(2 * *p as i64 + 1);
    }
    R::from_rational(&Rational::new(BigInt::from(1), d))
}

/// Ω_{p,q} read off a resolvent through
/// tr(R(λ) ∂_λ((R(λ) - R(μ))/(λ - μ))), which has no polynomial part.
///
/// With R = Σ R_i λ^i, the λ^{-p-1} μ^{-q-1} coefficient is
/// Σ_{a=1}^{p+1} a · tr(R_{a-p} R_{-(a+q)}).
pub fn omega_pq_from<R: Ring>(r: &Mat2<TruncSeries<R>>, p: usize, q: usize) -> Result<R> {
    let (p, q) = (p as i64, q as i64);
    let at = |e: i64| -> Result<Mat2<R>> {
        Ok(Mat2::new(r.a.coeff(e)?, r.b.coeff(e)?, r.c.coeff(e)?, r.d.coeff(e)?))
    };
    let mut acc = R::zero();
    for a in 1..=p + 1 {
        let tr = at(a - p)?.mul(&at(-(a + q))?).trace();
        acc.add_assign(&tr.mul(&R::from_int(a)));
    }
    Ok(acc.mul(&inv_weight(&[p as usize, q as usize])))
}

/// The abstract Ω_{p,q} as a differential polynomial.
pub fn omega_pq(p: usize, q: usize) -> DiffPoly {
    let data = ResolventData::new(p + q + 1);
    omega_pq_from(&data.r, p, q).expect("resolvent depth p+q+1 covers Ω_{p,q}")
}

/// Shared resolvent and flows for repeated tau-structure queries.
#[derive(Clone, Debug)]
pub struct TauStructure {
    data: ResolventData,
    flows: KdvFlows,
}

impl TauStructure {
    /// Supports Ω_{p,q} with p + q + 1 <= `depth` and flows D_k with k <= `k_max`.
    pub fn new(depth: usize, k_max: usize) -> Self {
        TauStructure { data: ResolventData::new(depth), flows: KdvFlows::new(k_max) }
    }

    pub fn resolvent(&self) -> &ResolventData {
        &self.data
    }

    pub fn flows(&self) -> &KdvFlows {
        &self.flows
    }

    pub fn omega_pq(&self, p: usize, q: usize) -> Result<DiffPoly> {
        if p + q + 1 > self.data.depth {
            return Err(Error::DepthExhausted { needed: p + q + 1, available: self.data.depth });
        }
        omega_pq_from(&self.data.r, p, q)
    }

    /// D_{p_1} ... D_{p_{n-2}} Ω_{p_{n-1}, p_n}.
    pub fn omega_multi(&self, ps: &[usize]) -> Result<DiffPoly> {
        let n = ps.len();
        if n < 2 {
            return Err(Error::InvalidRequest("Ω needs at least two indices".into()));
        }
        let mut out = self.omega_pq(ps[n - 2], ps[n - 1])?;
        for &k in ps[..n - 2].iter().rev() {
            if k > self.flows.k_max() {
                return Err(Error::DepthExhausted { needed: k, available: self.flows.k_max() });
            }
            out = self.flows.apply(k, &out);
        }
        Ok(out)
    }
}

/// Ω_{p_1..p_n} for n >= 2 as a differential polynomial.
pub fn omega_multi(ps: &[usize]) -> Result<DiffPoly> {
    if ps.len() < 2 {
        return Err(Error::InvalidRequest("Ω needs at least two indices".into()));
    }
    let n = ps.len();
    let k_max = ps[..n - 2].iter().copied().max().unwrap_or(0);
    TauStructure::new(ps[n - 2] + ps[n - 1] + 1, k_max).omega_multi(ps)
}

/// Representatives of S_n/C_n: permutations of 0..n fixing the first slot.
pub fn cyclic_orders(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut rest: Vec<usize> = (1..n).collect();
    loop {
        let mut v = vec![0];
        v.extend(&rest);
        out.push(v);
        if !next_permutation(&mut rest) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Dense coefficient table of a matrix series, from its head down to -tail.
struct MatTable<R> {
    top: i64,
    tail: i64,
    /// `rows[i]` is the coefficient at `top - i`, `None` when zero.
    rows: Vec<Option<Mat2<R>>>,
}

impl<R: Ring> MatTable<R> {
    fn new(m: &Mat2<TruncSeries<R>>) -> Self {
        let entries = m.entries();
        let tail = entries.iter().map(|s| s.tail()).min().unwrap_or(0);
        let top = entries.iter().filter_map(|s| s.head()).max().unwrap_or(-tail - 1);
        let rows = (0..(top + tail + 1).max(0))
            .map(|i| {
                let e = top - i;
                let mat = Mat2::new(m.a.at(e), m.b.at(e), m.c.at(e), m.d.at(e));
                (!mat.entries().iter().all(|x| x.is_zero())).then_some(mat)
            })
            .collect();
        MatTable { top, tail, rows }
    }

    fn get(&self, d: i64) -> Option<&Mat2<R>> {
        if d > self.top || d < -self.tail {
            return None;
        }
        self.rows[(self.top - d) as usize].as_ref()
    }
}

fn mat_mul_acc<R: Ring>(acc: &mut Mat2<R>, x: &Mat2<R>, y: &Mat2<R>) {
    let prod = |p: &R, q: &R| if p.is_zero() || q.is_zero() { None } else { Some(p.mul(q)) };
    let add = |slot: &mut R, p: &R, q: &R, r: &R, s: &R| {
        if let Some(v) = prod(p, q) {
            slot.add_assign(&v);
        }
        if let Some(v) = prod(r, s) {
            slot.add_assign(&v);
        }
    };
    add(&mut acc.a, &x.a, &y.a, &x.b, &y.c);
    add(&mut acc.b, &x.a, &y.b, &x.b, &y.d);
    add(&mut acc.c, &x.c, &y.a, &x.d, &y.c);
    add(&mut acc.d, &x.c, &y.b, &x.d, &y.d);
}

fn zero_mat<R: Ring>() -> Mat2<R> {
    Mat2::new(R::zero(), R::zero(), R::zero(), R::zero())
}

/// Coefficient of Π λ_j^{exps[j]} in tr(M(λ_{v_0}) ... M(λ_{v_{n-1}})) / Π(λ_{v_{i+1}} - λ_{v_i})
/// for one cyclic order `v` with `v[0] = 0`.
///
/// Edge i joins v_i to v_{i+1}; its expansion places λ^{x_i} at v_i and
/// λ^{-1-x_i} at v_{i+1}, with x_i <= -1 (sign -1) when v_i < v_{i+1} and
/// x_i >= 0 (sign +1) otherwise. The matrix exponent at v_i is then
/// d_i = e_{v_i} + 1 + x_{i-1} - x_i, and the sum over x runs as a transfer
/// product around the cycle.
fn cycle_coefficient<R: Ring>(tables: &[MatTable<R>], order: &[usize], exps: &[i64], dmin: i64, top: i64) -> R {
    let n = order.len();
    let down: Vec<bool> = (0..n).map(|i| order[i] < order[(i + 1) % n]).collect();
    let sign = if down.iter().filter(|d| **d).count() % 2 == 0 { 1 } else { -1 };
    // Remaining Σ e_{v_j} + 1 over slots after i.
    let mut suffix = vec![0i64; n + 1];
    for i in (0..n).rev() {
        suffix[i] = suffix[i + 1] + exps[order[i]] + 1;
    }
    let mut total = R::zero();
    let e0 = exps[order[0]];
    for s in 0..=(top - e0 - 2) {
        let mut states: BTreeMap<i64, Mat2<R>> = BTreeMap::new();
        states.insert(s, Mat2::new(R::one(), R::zero(), R::zero(), R::one()));
        for i in 0..n {
            let t = &tables[order[i]];
            let e = exps[order[i]];
            let rem = (n - 1 - i) as i64;
            let mut next: BTreeMap<i64, Mat2<R>> = BTreeMap::new();
            for (xp, acc) in &states {
                for d in (dmin..=top.min(t.top)).rev() {
                    let m = match t.get(d) {
                        Some(m) => m,
                        None => continue,
                    };
                    let x = e + 1 + xp - d;
                    if (down[i] && x > -1) || (!down[i] && x < 0) {
                        continue;
                    }
                    if i == n - 1 && x != s {
                        continue;
                    }
                    // The later d's must sum to suffix[i+1] + x - s.
                    let need = suffix[i + 1] + x - s;
                    if need < rem * dmin || need > rem * top {
                        continue;
                    }
                    let slot = next.entry(x).or_insert_with(zero_mat);
                    mat_mul_acc(slot, acc, m);
                }
            }
            states = next;
        }
        if let Some(m) = states.get(&s) {
            total.add_assign(&m.trace());
        }
    }
    if sign < 0 {
        total.neg()
    } else {
        total
    }
}

/// The two-point counterterm -(λ_1+λ_2)/(λ_1-λ_2)² at λ_1^{e_1} λ_2^{e_2}.
fn trace_counterterm(e1: i64, e2: i64) -> i64 {
    if e2 >= 0 && e1 == -1 - e2 {
        -(2 * e2 + 1)
    } else {
        0
    }
}

/// Coefficient of Π λ_j^{exps[j]} in
/// -Σ_{σ∈S_n/C_n} tr(M_{σ(1)}(λ_{σ(1)})...)/Π(λ_{σ(i+1)} - λ_{σ(i)}) - δ_{n2}(λ_1+λ_2)/(λ_1-λ_2)²,
/// expanded in |λ_1| > ... > |λ_n|. `mats[j]` is the matrix attached to λ_j.
pub fn npoint_coefficient<R: Ring>(mats: &[&Mat2<TruncSeries<R>>], exps: &[i64]) -> Result<R> {
    let n = mats.len();
    if n < 2 || exps.len() != n {
        return Err(Error::InvalidRequest("the trace formula needs n >= 2 matching exponents".into()));
    }
    let tables: Vec<MatTable<R>> = mats.iter().map(|m| MatTable::new(m)).collect();
    let top = tables.iter().map(|t| t.top).max().unwrap_or(0).max(1);
    let sum_e: i64 = exps.iter().sum();
    // Σ d_i = Σ e + n and every d_i <= top.
    let dmin = sum_e + n as i64 - (n as i64 - 1) * top;
    for t in &tables {
        if -t.tail > dmin {
            return Err(Error::DepthExhausted { needed: (-dmin) as usize, available: t.tail.max(0) as usize });
        }
    }
    let orders = cyclic_orders(n);
    let sum = orders
        .par_iter()
        .map(|o| cycle_coefficient(&tables, o, exps, dmin, top))
        .reduce(R::zero, |a, b| a.add(&b));
    let mut out = sum.neg();
    if n == 2 {
        out.add_assign(&R::from_int(trace_counterterm(exps[0], exps[1])));
    }
    Ok(out)
}

/// The full n-point series for exponents in [-(depth+1), -1] in every variable.
///
/// Coefficients with exponents 0 and 1 are computed as well and must vanish;
/// a nonzero one is reported as an error.
pub fn npoint_series<R: Ring>(mats: &[&Mat2<TruncSeries<R>>], depth: usize) -> Result<MultiSeries<R>> {
    let n = mats.len();
    let lo = -(depth as i64) - 1;
    let mut out = MultiSeries::zero(vec![-lo; n]);
    let mut e = vec![lo; n];
    loop {
        let c = npoint_coefficient(mats, &e)?;
        if e.iter().any(|x| *x >= 0) {
            if !c.is_zero() {
                return Err(Error::InvalidRequest(format!("non-negative power {e:?} survived the cyclic sum")));
            }
        } else {
            out.add_term(e.clone(), &c);
        }
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            if e[j] < 1 {
                e[j] += 1;
                break;
            }
            e[j] = lo;
        }
    }
}

/// Ω_{p_1..p_n} from a model matrix via the trace formula.
pub fn trace_correlator<R: Ring>(m: &Mat2<TruncSeries<R>>, ps: &[usize]) -> Result<R> {
    let mats = vec![m; ps.len()];
    let exps: Vec<i64> = ps.iter().map(|p| -(*p as i64) - 1).collect();
    Ok(npoint_coefficient(&mats, &exps)?.mul(&inv_weight(ps)))
}

/// Resolvent depth sufficient for an n-point trace extraction with indices `ps`.
pub fn trace_depth(ps: &[usize]) -> usize {
    ps.iter().map(|p| p + 1).sum::<usize>()
}

/// Which solution a correlator is taken for.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// Witten–Kontsevich, f = x.
    Wk,
    /// Theta class, gBGW at C = 1/8.
    Theta,
    /// Generalized BGW with the given C, a constant or the symbol C (variable 0).
    Gbgw(ParamPoly),
}

/// Ω_{p_1..p_n}(0) for one family; `depth` of `None` means the minimal sufficient depth.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorRequest {
    pub indices: Vec<usize>,
    pub family: Family,
    pub depth: Option<usize>,
}

impl CorrelatorRequest {
    pub fn new(family: Family, indices: &[usize]) -> Self {
        CorrelatorRequest { indices: indices.to_vec(), family, depth: None }
    }

    /// Resolvent depth needed by the trace route.
    pub fn minimal_depth(&self) -> usize {
        trace_depth(&self.indices)
    }
}

/// Ω_{p_1..p_n}(0): the trace formula for n >= 2, the closed 1-point formula for
/// n = 1 (gBGW and Theta only). Values lie in Q[C].
pub fn correlator(req: &CorrelatorRequest) -> Result<ParamPoly> {
    let ps = &req.indices;
    if ps.is_empty() {
        return Err(Error::InvalidRequest("no indices given".into()));
    }
    let needed = req.minimal_depth();
    let depth = req.depth.unwrap_or(needed);
    if depth < needed {
        return Err(Error::DepthExhausted { needed, available: depth });
    }
    if ps.len() == 1 {
        return match &req.family {
            Family::Wk => Err(Error::InvalidRequest("1-point WK values have no normalization here".into())),
            Family::Theta => Ok(ParamPoly::constant(onepoint_closed(&rat(1, 8), ps[0]))),
            Family::Gbgw(c) => Ok(onepoint_closed(c, ps[0])),
        };
    }
    let constant = |v: Rational| ParamPoly::constant(v);
    match &req.family {
        Family::Wk => trace_correlator(&wk_m(depth), ps).map(constant),
        Family::Theta => trace_correlator(&theta_m(depth), ps).map(constant),
        Family::Gbgw(c) => match constant_value(c) {
            Some(v) => trace_correlator(&gbgw_r(&v, depth), ps).map(constant),
            None => trace_correlator(&gbgw_r(c, depth), ps),
        },
    }
}

/// The value of a polynomial without variables.
pub fn constant_value(p: &ParamPoly) -> Option<Rational> {
    if p.max_var().is_none() {
        Some(p.constant_term())
    } else {
        None
    }
}
