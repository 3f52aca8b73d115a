//! The generalized BGW family with initial data C/(x-1)²: the ρ series and
//! ₃F₀ resolvent, the Theta matrix at C = 1/8, closed 1-point values, the
//! wave pair, and the second-kind ODE certificate.

use num_bigint::BigInt;

use crate::error::Result;
use crate::exact_series::ring::{double_factorial, factorial, pochhammer, rat};
use crate::exact_series::{Arith, Mat2, MPoly, ParamPoly, PowerSeries, Rational, Ring, TruncSeries};
use crate::matrix_resolvent::{ResidualReport, LAMBDA};
use crate::tau_structure::trace_correlator;
use crate::wave_kernel::{WavePair, Z};

/// The parameter C as the polynomial variable 0.
pub fn c_symbol() -> ParamPoly {
    MPoly::var(0)
}

fn q<R: Ring>(n: i64, d: i64) -> R {
    R::from_rational(&rat(n, d))
}

/// a_k = (-1)^k/k! Π_{j=1}^k (C + j(j-1)/2).
pub fn a_k<R: Ring>(c: &R, k: usize) -> R {
    let mut acc = R::one();
    for j in 1..=k as i64 {
        acc = acc.mul(&c.add(&R::from_int(j * (j - 1) / 2)));
    }
    let sign = if k % 2 == 0 { 1 } else { -1 };
    acc.scale(&Rational::new(BigInt::from(sign), factorial(k as u64)))
}

/// ρ = 1 + Σ_{k>=0} (2k+1)!! ρ_k ζ^{-k-1} with ρ_k = (C + k(k+1)/2)/(k+1) ρ_{k-1},
/// known through ζ^{-depth}.
pub fn rho_series<R: Ring>(c: &R, depth: usize) -> TruncSeries<R> {
    let mut terms = vec![(0, R::one())];
    let mut rho = R::one();
    for k in 0..depth as i64 {
        rho = rho.mul(&c.add(&q(k * (k + 1), 2))).scale(&rat(1, k + 1));
        terms.push((-k - 1, rho.scale(&Rational::from_integer(double_factorial(2 * k + 1)))));
    }
    TruncSeries::from_terms(LAMBDA, depth as i64, terms)
}

/// Σ_k (a)_k (b)_k (c)_k / k! ζ^{-k} through ζ^{-depth}.
pub fn hypergeom_3f0<R: Ring>(a: &R, b: &R, c: &R, depth: usize) -> TruncSeries<R> {
    let terms = (0..=depth).map(|k| {
        let v = pochhammer(a, k).mul(&pochhammer(b, k)).mul(&pochhammer(c, k));
        (-(k as i64), v.scale(&Rational::new(BigInt::from(1), factorial(k as u64))))
    });
    TruncSeries::from_terms(LAMBDA, depth as i64, terms.collect::<Vec<_>>())
}

/// G_s = ₃F₀(s, s+α, s-α) with α² = 1/4 - 2C, so that
/// (s+α)_k (s-α)_k = Π_{j<k} ((s+j)² - 1/4 + 2C).
pub fn g_series<R: Ring>(s: &Rational, c: &R, depth: usize) -> TruncSeries<R> {
    let two_c = c.add(c);
    let s_r = R::from_rational(s);
    let mut terms = Vec::with_capacity(depth + 1);
    let mut pair = R::one();
    for k in 0..=depth {
        let v = pochhammer(&s_r, k).mul(&pair).scale(&Rational::new(BigInt::from(1), factorial(k as u64)));
        terms.push((-(k as i64), v));
        let sj = s + Rational::from_integer((k as i64).into());
        pair = pair.mul(&R::from_rational(&(&sj * &sj - rat(1, 4))).add(&two_c));
    }
    TruncSeries::from_terms(LAMBDA, depth as i64, terms)
}

/// R(λ) at x = 0 in the resolvent layout: b known through λ^{-depth-1}, c through λ^{-depth}.
///
/// At x = 0 one has ζ = λ and (x-1)³ = -1, so the diagonal is +(C/λ)G_{3/2}.
pub fn gbgw_r<R: Ring>(c: &R, depth: usize) -> Mat2<TruncSeries<R>> {
    let g = |s: Rational| g_series(&s, c, depth + 3);
    let (g1, g3, g5) = (g(rat(1, 2)), g(rat(3, 2)), g(rat(5, 2)));
    let tail = depth as i64 + 1;
    let b = g1.truncate(tail);
    let a = g3.scale_by(c).shift(-1).truncate(tail);
    let lam = TruncSeries::from_terms(LAMBDA, tail + 2, [(1, R::one()), (0, c.add(c).neg())]);
    let cc = lam
        .mul(&g1)
        .sub(&g3.scale_by(&c.scale(&rat(3, 1))).shift(-1))
        .sub(&g5.scale_by(&c.mul(&c.add(&R::one())).scale(&rat(6, 1))).shift(-2))
        .truncate(tail - 1);
    Mat2::new(a.clone(), b, cc, a.neg())
}

/// M(λ) = (0,0;λ,0) + Σ_k [(2k-1)!!/2^k]³ (k, 1; -(8k³+12k²+4k+1)/(8(k+1)), -k) λ^{-k}/k!.
pub fn theta_m(depth: usize) -> Mat2<TruncSeries<Rational>> {
    let tail = depth as i64 + 1;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = vec![(1, Rational::from_integer(1.into()))];
    for k in 0..=tail {
        let df = Rational::new(double_factorial(2 * k - 1), BigInt::from(1) << k as usize);
        let w = &df * &df * &df / Rational::from_integer(factorial(k as u64));
        let kk = Rational::from_integer(k.into());
        a.push((-k, &w * &kk));
        b.push((-k, w.clone()));
        c.push((-k, -(&w * rat(8 * k * k * k + 12 * k * k + 4 * k + 1, 8 * (k + 1)))));
    }
    let s = |t: Vec<(i64, Rational)>, tail| TruncSeries::from_terms(LAMBDA, tail, t);
    let a = s(a, tail);
    Mat2::new(a.clone(), s(b, tail), s(c, tail - 1), a.neg())
}

/// Ω_p(0) = Π_{i=0}^p (C + i(i+1)/2) / ((p+1)! (2p+1)).
pub fn onepoint_closed<R: Ring>(c: &R, p: usize) -> R {
    let mut acc = R::one();
    for i in 0..=p as i64 {
        acc = acc.mul(&c.add(&q(i * (i + 1), 2)));
    }
    acc.scale(&Rational::new(BigInt::from(1), factorial(p as u64 + 1) * BigInt::from(2 * p + 1)))
}

/// (2g-1)!!² / (8^g g! (2g-1)) for g >= 1.
pub fn theta_onepoint(g: usize) -> Rational {
    let df = double_factorial(2 * g as i64 - 1);
    Rational::new(&df * &df, (BigInt::from(1) << (3 * g)) * factorial(g as u64) * BigInt::from(2 * g - 1))
}

/// 1-point values from ρ: Ω_p = b_p / ((2p+1)!! (2p+1)), b_p the λ^{-p-1} coefficient.
pub fn onepoint_from_rho<R: Ring>(rho: &TruncSeries<R>, p: usize) -> Result<R> {
    let bp = rho.coeff(-(p as i64) - 1)?;
    let d = double_factorial(2 * p as i64 + 1) * BigInt::from(2 * p + 1);
    Ok(bp.scale(&Rational::new(BigInt::from(1), d)))
}

/// ζρ'² + (1 - 2C/ζ)ρ² - ρρ' - 2ζρρ'' - 1, which vanishes identically.
pub fn rho_ode_residual<R: Ring>(rho: &TruncSeries<R>, c: &R) -> TruncSeries<R> {
    let d1 = rho.derivative();
    let d2 = d1.derivative();
    let one = TruncSeries::constant(LAMBDA, R::one(), rho.tail());
    let coef = TruncSeries::from_terms(LAMBDA, rho.tail() + 4, [(0, R::one()), (-1, c.add(c).neg())]);
    d1.mul(&d1)
        .shift(1)
        .add(&coef.mul(&rho.mul(rho)))
        .sub(&rho.mul(&d1))
        .sub(&rho.mul(&d2).shift(1).scale_rational(&rat(2, 1)))
        .sub(&one)
}

/// The wave pair ψ(z,0) = Σ a_k z^{-k}, ψ* (z,0) = ψ(-z,0) with x-derivatives at x = 0.
pub fn gbgw_pair<R: Ring>(c: &R, depth: usize) -> Result<WavePair<R>> {
    let tail = depth as i64 + crate::wave_kernel::PAIR_MARGIN;
    let ks = 0..=tail as usize + 1;
    let a: Vec<R> = ks.clone().map(|k| a_k(c, k)).collect();
    // ∂_x (a_k (1-x)^{-k} z^{-k} e^{zx}) at x = 0 is (a_{k+1} + k a_k) z^{-k} after collecting the z e^{zx} term.
    let psi = TruncSeries::from_terms(Z, tail, a.iter().enumerate().map(|(k, v)| (-(k as i64), v.clone())).collect::<Vec<_>>());
    let mut dx = vec![(1, R::one())];
    for k in 0..=tail as usize {
        dx.push((-(k as i64), a[k + 1].add(&a[k].mul(&R::from_int(k as i64)))));
    }
    let psi_x = TruncSeries::from_terms(Z, tail, dx);
    let psi_star = psi.reflect();
    let psi_star_x = psi_x.reflect();
    let r = gbgw_r(c, tail as usize / 2 + 1);
    let (b, b_x) = crate::wave_kernel::b_in_z(&r);
    let jets = gbgw_jets(c, tail as usize + 2);
    Ok(WavePair {
        psi,
        psi_x,
        psi_star,
        psi_star_x,
        b: b.truncate(tail),
        b_x: b_x.truncate(tail),
        f_jets: jets,
        depth: tail as usize,
    })
}

/// f^{(l)}(0) for f = C/(x-1)²: (l+1)! C.
pub fn gbgw_jets<R: Ring>(c: &R, count: usize) -> Vec<R> {
    (0..count).map(|l| c.scale(&Rational::from_integer(factorial(l as u64 + 1)))).collect()
}

/// C/(x-1)² as an x-series through x^{order-1}.
pub fn gbgw_initial_data<R: Ring>(c: &R, order: usize) -> PowerSeries<R> {
    PowerSeries::new(0, (0..order).map(|k| c.mul(&R::from_int(k as i64 + 1))).collect())
}

/// M = λ^{-1/2} λ^{σ₃/4} R λ^{-σ₃/4} in the chart ζ = z², where the branch
/// ζ^{1/2} = λ^{1/2}(x-1) gives z = -λ^{1/2} at x = 0: M = (-a/z, b; c/z², a/z).
pub fn second_kind_m<R: Ring>(r: &Mat2<TruncSeries<R>>) -> Mat2<TruncSeries<R>> {
    let a = r.a.square_variable(Z).shift(-1).neg();
    let c = r.c.square_variable(Z).shift(-2);
    Mat2::new(a.clone(), r.b.square_variable(Z), c, a.neg())
}

/// dM/dz + [(0,1; 1-2C/z², 0), M] and det M + 1, both within the window.
pub fn second_kind_ode_verify<R: Ring>(c: &R, depth: usize) -> ResidualReport {
    let r = gbgw_r(c, depth);
    let m = second_kind_m(&r);
    let tail = m.c.tail().min(m.a.tail()).min(m.b.tail());
    let one = TruncSeries::constant(Z, R::one(), tail + 2);
    let zero = TruncSeries::zero(Z, tail + 2);
    let low = TruncSeries::from_terms(Z, tail + 2, [(0, R::one()), (-2, c.add(c).neg())]);
    let n = Mat2::new(zero.clone(), one.clone(), low, zero);
    let dm = m.map(|s| s.derivative());
    let res = dm.add(&n.commutator(&m));
    let mut rep = ResidualReport::default();
    for (name, s) in ["(1,1)", "(1,2)", "(2,1)", "(2,2)"].iter().zip(res.entries()) {
        rep.push(&format!("ode {name}"), s);
    }
    rep.push("det + 1", &m.det().add(&one));
    rep
}

/// Σ_{p<depth} (2p+1)!! Ω_{prefix,p}(0) λ^{-p-1} through the trace formula.
pub fn full_genera_series<R: Ring>(r: &Mat2<TruncSeries<R>>, prefix: &[usize], depth: usize) -> Result<TruncSeries<R>> {
    let mut terms = Vec::with_capacity(depth);
    for p in 0..depth {
        let mut ps = prefix.to_vec();
        ps.push(p);
        let v = trace_correlator(r, &ps)?;
        terms.push((-(p as i64) - 1, v.scale(&Rational::from_integer(double_factorial(2 * p as i64 + 1)))));
    }
    Ok(TruncSeries::from_terms(LAMBDA, depth as i64, terms))
}

/// Σ_i λ^{e_i} k_i s_i for (e_i, k_i, s_i).
pub fn lambda_combination<R: Ring>(terms: &[(i64, R, &TruncSeries<R>)], tail: i64) -> TruncSeries<R> {
    let mut acc = TruncSeries::zero(LAMBDA, tail);
    for (e, k, s) in terms {
        acc = acc.add(&s.scale_by(k).shift(*e).truncate(tail));
    }
    acc
}

/// The a, b, c series of the full-genera displays, read off a resolvent with margin.
pub struct AbcSeries<R> {
    pub a: TruncSeries<R>,
    pub b: TruncSeries<R>,
    pub c: TruncSeries<R>,
    pub one: TruncSeries<R>,
}

impl<R: Ring> AbcSeries<R> {
    pub fn from_resolvent(r: &Mat2<TruncSeries<R>>) -> Self {
        let one = TruncSeries::constant(LAMBDA, R::one(), r.b.tail());
        AbcSeries { a: r.a.clone(), b: r.b.clone(), c: r.c.clone(), one }
    }
}

/// Named residuals of the five generalized-BGW full-genera identities through λ^{-depth}.
pub fn gbgw_full_genera_residuals<R: Ring>(c: &R, depth: usize) -> Result<Vec<(String, TruncSeries<R>)>> {
    let margin = 6;
    let r = gbgw_r(c, depth + margin);
    let s = AbcSeries::from_resolvent(&r);
    let t = depth as i64;
    let k = |n: i64| R::from_int(n);
    let cp = |coeffs: &[i64]| -> R {
        // Σ coeffs[i] C^i
        let mut acc = R::zero();
        let mut pw = R::one();
        for v in coeffs {
            acc.add_assign(&pw.mul(&R::from_int(*v)));
            pw = pw.mul(c);
        }
        acc
    };
    let (a, b, cc, one) = (&s.a, &s.b, &s.c, &s.one);
    let lhs = |prefix: &[usize], scale: R| -> Result<TruncSeries<R>> {
        Ok(full_genera_series(&r, prefix, depth)?.scale_by(&scale))
    };
    let mut out = Vec::new();

    let l0 = lhs(&[0], R::one())?;
    let r0 = lambda_combination(&[(0, k(1), b), (0, k(-1), one)], t);
    out.push(("Ω_{0,p}".to_string(), l0.sub(&r0)));

    let l1 = lhs(&[1], k(3))?;
    let r1 = lambda_combination(&[(1, k(2), b), (1, k(-3), one), (0, k(1), cc), (0, c.neg(), b)], t);
    out.push(("Ω_{1,p}".to_string(), l1.sub(&r1)));

    let l2 = lhs(&[2], k(15))?;
    let r2 = lambda_combination(
        &[
            (2, k(3), b),
            (2, k(-5), one),
            (1, k(2), cc),
            (1, c.mul(&k(-2)), b),
            (0, c.mul(&k(2)), a),
            (0, cp(&[0, 3, 1]).scale(&rat(-1, 2)), b),
            (0, c.clone(), cc),
        ],
        t,
    );
    out.push(("Ω_{2,p}".to_string(), l2.sub(&r2)));

    let l11 = lhs(&[1, 1], q(-9, 2))?;
    let r11 = lambda_combination(
        &[
            (2, k(-1), a),
            (1, c.mul(&k(2)), b),
            (1, c.mul(&k(-2)), a),
            (0, cp(&[0, 3, 1]).neg(), a),
            (0, cp(&[0, 3, 2]), b),
            (0, c.neg(), cc),
        ],
        t,
    );
    out.push(("Ω_{1,1,p}".to_string(), l11.sub(&r11)));

    let l22 = lhs(&[2, 2], k(-450))?;
    let r22 = lambda_combination(
        &[
            (4, k(-4), a),
            (3, c.mul(&k(8)), b),
            (3, c.mul(&k(-8)), a),
            (2, cp(&[0, 9, 8]).mul(&k(4)), b),
            (2, c.mul(&k(-4)), cc),
            (2, cp(&[0, 6, 4]).mul(&k(-4)), a),
            (1, cp(&[0, 180, 216, 36]), b),
            (1, cp(&[0, 120, 132, 12]).neg(), a),
            (1, cp(&[0, 24, 24]).neg(), cc),
            (0, cp(&[0, 105, 151, 49, 3]).mul(&k(12)), b),
            (0, cp(&[0, 5, 7, 2]).mul(&k(-18)), cc),
            (0, cp(&[0, 70, 99, 30, 1]).mul(&k(-9)), a),
        ],
        t,
    );
    out.push(("Ω_{2,2,p}".to_string(), l22.sub(&r22)));
    Ok(out)
}

/// Named residuals of the three Theta full-genera identities through λ^{-depth},
/// with a, b, c taken from the Theta matrix.
pub fn theta_full_genera_residuals(depth: usize) -> Result<Vec<(String, TruncSeries<Rational>)>> {
    let m = theta_m(depth + 6);
    theta_full_genera_with(&m, &AbcSeries::from_resolvent(&m), depth)
}

/// The Theta identities for given a, b, c series.
pub fn theta_full_genera_with(
    m: &Mat2<TruncSeries<Rational>>,
    s: &AbcSeries<Rational>,
    depth: usize,
) -> Result<Vec<(String, TruncSeries<Rational>)>> {
    let t = depth as i64;
    let k = |n: i64| Rational::from_integer(n.into());
    let (a, b, cc, one) = (&s.a, &s.b, &s.c, &s.one);
    let mut out = Vec::new();

    let l0 = full_genera_series(m, &[0], depth)?;
    out.push(("Ω_{0,p}".to_string(), l0.sub(&lambda_combination(&[(0, k(1), b), (0, k(-1), one)], t))));

    let l12 = full_genera_series(m, &[1, 2], depth)?.scale_by(&k(-512 * 3 * 15));
    let r12 = lambda_combination(
        &[
            (3, k(-1024), a),
            (2, k(256), b),
            (2, k(-256), a),
            (1, k(848), b),
            (1, k(-616), a),
            (1, k(-128), cc),
            (0, k(3321), b),
            (0, k(-2187), a),
            (0, k(-432), cc),
        ],
        t,
    );
    out.push(("Ω_{1,2,p}".to_string(), l12.sub(&r12)));

    let l111 = full_genera_series(m, &[1, 1, 1], depth)?.scale_by(&k(1024 * 27));
    let r111 = lambda_combination(
        &[
            (4, k(2048), b),
            (3, k(256), b),
            (3, k(-2048), cc),
            (2, k(-1536), a),
            (2, k(-96), b),
            (2, k(-768), cc),
            (1, k(1728), a),
            (1, k(-8820), b),
            (1, k(-864), cc),
            (0, k(26352), a),
            (0, k(-46989), b),
            (0, k(4284), cc),
        ],
        t,
    );
    out.push(("Ω_{1,1,1,p}".to_string(), l111.sub(&r111)));
    Ok(out)
}
