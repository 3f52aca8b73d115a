//! The basic matrix resolvent of the abstract KdV hierarchy and the KdV flows.

use num_bigint::BigInt;

use crate::exact_series::diffpoly::{dpoly_derive, dpoly_derive_n};
use crate::exact_series::ring::{double_factorial, factorial, rat};
use crate::exact_series::{u, Arith, DiffPoly, Mat2, PowerSeries, Rational, Ring, TruncSeries};

pub const LAMBDA: &str = "λ";

/// b_{-1}, ..., b_K together with the assembled resolvent.
#[derive(Clone, Debug)]
pub struct ResolventData {
    pub depth: usize,
    /// `b_list[k + 1]` is b_k.
    pub b_list: Vec<DiffPoly>,
    pub r: Mat2<TruncSeries<DiffPoly>>,
}

impl ResolventData {
    pub fn new(depth: usize) -> Self {
        let b_list = mr_b_coeffs(depth);
        let r = assemble_from_b(&b_list, &dpoly_derive);
        ResolventData { depth, b_list, r }
    }

    /// b_k for k >= -1.
    pub fn b(&self, k: i64) -> &DiffPoly {
        &self.b_list[(k + 1) as usize]
    }
}

fn rq(q: Rational) -> DiffPoly {
    DiffPoly::from_rational(&q)
}

/// b_{-1} = 1, b_0, ..., b_K from the closed quadratic recursion.
pub fn mr_b_coeffs(depth: usize) -> Vec<DiffPoly> {
    b_coeffs_with(DiffPoly::one(), u(0), &dpoly_derive, &|p, q| p.mul(&rq(q.clone())), depth)
}

/// The quadratic recursion in any differential ring, given 1, u_0, the
/// derivation and scaling by rationals.
pub fn b_coeffs_with<T: Arith>(
    one: T,
    u0: T,
    derive: &dyn Fn(&T) -> T,
    scale: &dyn Fn(&T, &Rational) -> T,
    depth: usize,
) -> Vec<T> {
    let mut b: Vec<T> = vec![one.clone()];
    // First and second derivatives are reused across steps.
    let d1_one = derive(&one);
    let mut d1: Vec<T> = vec![d1_one.clone()];
    let mut d2: Vec<T> = vec![derive(&d1_one)];
    let (quarter, eighth, half) = (rat(1, 4), rat(1, 8), rat(1, 2));
    for k in 0..=depth as i64 {
        let mut acc: Option<T> = None;
        let mut push = |t: T| {
            acc = Some(match acc.take() {
                Some(a) => a.add(&t),
                None => t,
            })
        };
        // k1 + k2 = k - 2 with k1, k2 >= -1.
        for k1 in -1..=(k - 1) {
            let k2 = k - 2 - k1;
            let (i1, i2) = ((k1 + 1) as usize, (k2 + 1) as usize);
            push(scale(&b[i1].mul(&d2[i2]), &quarter));
            push(scale(&d1[i1].mul(&d1[i2]), &eighth).neg());
            push(u0.mul(&b[i1]).mul(&b[i2]));
        }
        // k1 >= 0, k2 >= -1, k1 + k2 = k - 2: pairs b_{k1} b_{k2+1}.
        for k1 in 0..=(k - 1) {
            let k2 = k - 2 - k1;
            push(scale(&b[(k1 + 1) as usize].mul(&b[(k2 + 2) as usize]), &half).neg());
        }
        let acc = acc.expect("k1 = -1 always contributes");
        let first = derive(&acc);
        let second = derive(&first);
        b.push(acc);
        d1.push(first);
        d2.push(second);
    }
    b
}

/// R(λ) at x = 0 for initial data f given as a power series in x.
///
/// Runs the recursion over x-series; each step costs two orders in x, so `f`
/// must be known through x^{2K+2}.
pub fn mr_from_initial_data<R: Ring>(f: &PowerSeries<R>, depth: usize) -> crate::Result<Mat2<TruncSeries<R>>> {
    let needed = 2 * depth as i64 + 3;
    if f.order() < needed {
        return Err(crate::Error::DepthExhausted { needed: needed as usize, available: f.order().max(0) as usize });
    }
    let one = PowerSeries::constant(R::one(), f.order());
    let b = b_coeffs_with(one, f.clone(), &|s: &PowerSeries<R>| s.derivative(), &|s, q| s.scale_by(&R::from_rational(q)), depth);
    let tail = depth as i64 + 1;
    let at = |n: usize| -> crate::Result<TruncSeries<R>> {
        let mut terms = Vec::with_capacity(b.len());
        for (i, s) in b.iter().enumerate() {
            let mut d = s.clone();
            for _ in 0..n {
                d = d.derivative();
            }
            terms.push((-(i as i64), d.coeff(0)?));
        }
        Ok(TruncSeries::from_terms(LAMBDA, tail, terms))
    };
    Ok(assemble_entries(&at(0)?, &at(1)?, &at(2)?, &f.coeff(0)?))
}

/// R(λ) = [[a, b], [c, -a]] with a = ∂b/2 and c = (λ - 2u_0) b - ∂²b/2, from
/// the list b_{-1}..b_K and a derivation on the coefficient ring.
pub fn assemble_from_b<R: Ring>(b_list: &[R], derive: &dyn Fn(&R) -> R) -> Mat2<TruncSeries<R>> {
    let k_max = b_list.len() as i64 - 2;
    let tail = k_max + 1;
    let b_terms: Vec<(i64, R)> = b_list.iter().enumerate().map(|(i, v)| (-(i as i64), v.clone())).collect();
    let b = TruncSeries::from_terms(LAMBDA, tail, b_terms.clone());
    let db = TruncSeries::from_terms(LAMBDA, tail, b_terms.iter().map(|(e, v)| (*e, derive(v))));
    let d2b = TruncSeries::from_terms(LAMBDA, tail, b_terms.iter().map(|(e, v)| (*e, derive(&derive(v)))));
    // b_0 = u_0 in every specialization.
    let u0 = b_list.get(1).cloned().unwrap_or_else(R::zero);
    assemble_entries(&b, &db, &d2b, &u0)
}

/// Assemble R from b, ∂b, ∂²b and the value of u_0.
pub fn assemble_entries<R: Ring>(
    b: &TruncSeries<R>,
    db: &TruncSeries<R>,
    d2b: &TruncSeries<R>,
    u0: &R,
) -> Mat2<TruncSeries<R>> {
    let half = rat(1, 2);
    let a = db.scale_rational(&half);
    let lam_minus = TruncSeries::from_terms(LAMBDA, b.tail() + 1, [(1, R::one()), (0, u0.mul(&R::from_int(-2)))]);
    let c = lam_minus.mul(b).sub(&d2b.scale_rational(&half));
    Mat2::new(a.clone(), b.clone(), c, a.neg())
}

/// The abstract resolvent with b known through b_K.
pub fn mr_assemble(depth: usize) -> Mat2<TruncSeries<DiffPoly>> {
    ResolventData::new(depth).r
}

/// Outcome of one identity check inside a truncation window.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub name: String,
    /// Highest exponent carrying a nonzero residual, if any.
    pub first_failure: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResidualReport {
    pub items: Vec<Residual>,
}

impl ResidualReport {
    pub fn push<R: Ring>(&mut self, name: &str, s: &TruncSeries<R>) {
        self.items.push(Residual { name: name.to_string(), first_failure: s.head() });
    }

    pub fn push_flag(&mut self, name: &str, ok: bool) {
        self.items.push(Residual { name: name.to_string(), first_failure: if ok { None } else { Some(0) } });
    }

    pub fn extend(&mut self, other: ResidualReport) {
        self.items.extend(other.items);
    }

    pub fn all_zero(&self) -> bool {
        self.items.iter().all(|r| r.first_failure.is_none())
    }
}

/// Residuals of the three defining identities for a resolvent entry b with
/// derivatives ∂b, ∂²b, ∂³b and jets u_0, u_1.
pub fn resolvent_residuals<R: Ring>(
    b: &TruncSeries<R>,
    db: &TruncSeries<R>,
    d2b: &TruncSeries<R>,
    d3b: &TruncSeries<R>,
    u0: &R,
    u1: &R,
) -> ResidualReport {
    let mut rep = ResidualReport::default();
    let tail = b.tail();
    let lam = TruncSeries::monomial(LAMBDA, 1, R::one(), tail + 1);
    let lam_minus = lam.add(&TruncSeries::constant(LAMBDA, u0.mul(&R::from_int(-2)), tail + 1));
    let half = rat(1, 2);
    let essential = b
        .mul(d2b)
        .sub(&db.mul(db).scale_rational(&half))
        .sub(&lam_minus.mul(&b.mul(b)).scale_rational(&Rational::from_integer(2.into())))
        .add(&lam.scale_rational(&Rational::from_integer(2.into())));
    rep.push("essential", &essential);
    let linear = d3b.sub(&lam_minus.mul(db).scale_rational(&Rational::from_integer(4.into()))).add(&b.scale_by(&u1.mul(&R::from_int(4))));
    rep.push("linear third-order", &linear);
    let r = assemble_entries(b, db, d2b, u0);
    let tr = r.mul(&r).trace().sub(&lam.scale_rational(&Rational::from_integer(2.into())));
    rep.push("trace of square", &tr);
    rep
}

/// Residual check for a list b_{-1}..b_K of differential polynomials.
pub fn mr_verify_list(b_list: &[DiffPoly]) -> ResidualReport {
    let k_max = b_list.len() as i64 - 2;
    let tail = k_max + 1;
    let series = |n: usize| {
        TruncSeries::from_terms(LAMBDA, tail, b_list.iter().enumerate().map(|(i, v)| (-(i as i64), dpoly_derive_n(v, n))))
    };
    resolvent_residuals(&series(0), &series(1), &series(2), &series(3), &u(0), &u(1))
}

/// Residuals of the essential identity, the third-order linear equation and
/// Tr R² = 2λ for the abstract resolvent through b_K.
pub fn mr_verify(depth: usize) -> ResidualReport {
    mr_verify_list(&mr_b_coeffs(depth))
}

/// Residual of the Lenard–Magri relation ∂b_k = 2u_0∂b_{k-1} + u_1 b_{k-1} + ∂³b_{k-1}/4 for k = 0..K.
pub fn lenard_magri_residuals(b_list: &[DiffPoly]) -> Vec<DiffPoly> {
    let quarter = rq(rat(1, 4));
    (1..b_list.len())
        .map(|i| {
            let prev = &b_list[i - 1];
            let rhs = u(0).mul(&dpoly_derive(prev)).mul(&DiffPoly::from_int(2)).add(&u(1).mul(prev)).add(&dpoly_derive_n(prev, 3).mul(&quarter));
            dpoly_derive(&b_list[i]).sub(&rhs)
        })
        .collect()
}

/// Q_k = ∂b_k/(2k+1)!! - u_0^k u_1/k!.
#[allow(non_snake_case)]
pub fn kdv_Q(k: usize) -> DiffPoly {
    let b = mr_b_coeffs(k);
    let lead = u(0).pow(k as u32).mul(&u(1)).mul(&rq(Rational::new(BigInt::from(1), factorial(k as u64))));
    flow_generator_from(&b[k + 1], k).sub(&lead)
}

fn flow_generator_from(bk: &DiffPoly, k: usize) -> DiffPoly {
    dpoly_derive(bk).mul(&rq(Rational::new(BigInt::from(1), double_factorial(2 * k as i64 + 1))))
}

/// D_k(u_0) = ∂b_k/(2k+1)!!.
pub fn kdv_flow_generator(k: usize) -> DiffPoly {
    let b = mr_b_coeffs(k);
    flow_generator_from(&b[k + 1], k)
}

/// The commuting KdV derivations, with their generators precomputed.
#[derive(Clone, Debug)]
pub struct KdvFlows {
    generators: Vec<DiffPoly>,
}

impl KdvFlows {
    pub fn new(k_max: usize) -> Self {
        let b = mr_b_coeffs(k_max);
        let generators = (0..=k_max).map(|k| flow_generator_from(&b[k + 1], k)).collect();
        KdvFlows { generators }
    }

    pub fn k_max(&self) -> usize {
        self.generators.len() - 1
    }

    /// D_k(p) = sum_i ∂p/∂u_i · ∂^i(D_k(u_0)).
    pub fn apply(&self, k: usize, p: &DiffPoly) -> DiffPoly {
        assert!(k <= self.k_max(), "flow D_{k} was not precomputed");
        let top = match p.max_var() {
            Some(t) => t,
            None => return DiffPoly::zero(),
        };
        let mut jet = self.generators[k].clone();
        let mut out = DiffPoly::zero();
        for i in 0..=top {
            let dp = p.partial(i);
            if !dp.is_zero() {
                out.add_assign(&dp.mul(&jet));
            }
            if i < top {
                jet = dpoly_derive(&jet);
            }
        }
        out
    }
}

/// Image of `p` under D_k.
pub fn kdv_flow_apply(k: usize, p: &DiffPoly) -> DiffPoly {
    KdvFlows::new(k).apply(k, p)
}

/// R(λ) at a point where u_i takes the value `jets[i]`.
pub fn mr_specialize<S: Ring>(data: &ResolventData, jets: &[S]) -> crate::Result<Mat2<TruncSeries<S>>> {
    use crate::exact_series::substitute_jets;
    let mut b = Vec::with_capacity(data.b_list.len());
    let mut db = Vec::with_capacity(data.b_list.len());
    let mut d2b = Vec::with_capacity(data.b_list.len());
    for bk in &data.b_list {
        let d1 = dpoly_derive(bk);
        let d2 = dpoly_derive(&d1);
        b.push(substitute_jets(bk, jets)?);
        db.push(substitute_jets(&d1, jets)?);
        d2b.push(substitute_jets(&d2, jets)?);
    }
    let tail = data.depth as i64 + 1;
    let series = |v: &[S]| TruncSeries::from_terms(LAMBDA, tail, v.iter().enumerate().map(|(i, c)| (-(i as i64), c.clone())));
    Ok(assemble_entries(&series(&b), &series(&db), &series(&d2b), &b[1]))
}
