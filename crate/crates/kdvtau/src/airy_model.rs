//! The Witten–Kontsevich family with initial data f = x: the wave pair and the
//! explicit matrix M(λ) at x = 0, and ψ-class intersection numbers by three routes.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact_series::ring::{double_factorial, factorial, rat};
use crate::exact_series::{substitute_jets, Arith, Mat2, PowerSeries, Rational, TruncSeries};
use crate::matrix_resolvent::LAMBDA;
use crate::tau_structure::{omega_multi, trace_correlator, trace_depth};
use crate::wave_kernel::{correlator_from_d, kernel_d, kernel_depth, WavePair, Z};

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// (-1)^k (6k)! / (288^k (3k)! (2k)!).
pub fn wk_psi_coefficient(k: usize) -> Rational {
    let num = factorial(6 * k as u64);
    let den = BigInt::from(288).pow(k as u32) * factorial(3 * k as u64) * factorial(2 * k as u64);
    let v = Rational::new(num, den);
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

/// ψ(z,0) and ψ_x(z,0) through z^{-depth}.
pub fn wk_psi(depth: usize) -> (TruncSeries<Rational>, TruncSeries<Rational>) {
    let kmax = depth / 3 + 1;
    let psi = (0..=kmax).map(|k| (-3 * k as i64, wk_psi_coefficient(k)));
    let psi_x = (0..=kmax).map(|k| {
        let k6 = 6 * k as i64;
        (1 - 3 * k as i64, wk_psi_coefficient(k) * rat(1 + k6, 1 - k6))
    });
    (
        TruncSeries::from_terms(Z, depth as i64, psi.collect::<Vec<_>>()),
        TruncSeries::from_terms(Z, depth as i64, psi_x.collect::<Vec<_>>()),
    )
}

/// u_0 = x, u_1 = 1, higher jets zero, at x = 0.
pub fn wk_jets(count: usize) -> Vec<Rational> {
    (0..count.max(2)).map(|i| if i == 1 { int(1) } else { int(0) }).collect()
}

/// The wave pair of f = x at x = 0 with ψ from the closed form and ψ* = b/ψ.
pub fn wk_pair(depth: usize) -> Result<WavePair<Rational>> {
    let tail = depth as i64 + crate::wave_kernel::PAIR_MARGIN;
    let (psi, psi_x) = wk_psi(tail as usize);
    let k = tail as usize / 2 + 1;
    let (b, b_x) = crate::wave_kernel::b_in_z(&wk_m(k));
    WavePair::from_psi(psi, psi_x, b.truncate(tail), b_x.truncate(tail), wk_jets(tail as usize + 2), tail as usize)
}

/// The explicit M(λ) through λ^{-depth} (λ^{-depth-1} for the (1,2) entry).
pub fn wk_m(depth: usize) -> Mat2<TruncSeries<Rational>> {
    let tail = depth as i64 + 1;
    let gmax = tail / 3 + 2;
    let main = |g: i64| Rational::new(double_factorial(6 * g - 1), BigInt::from(24).pow(g as u32) * factorial(g as u64));
    let diag = |g: i64| {
        Rational::new(double_factorial(6 * g - 5), BigInt::from(24).pow(g as u32 - 1) * factorial(g as u64 - 1)) * rat(1, 2)
    };
    let a: Vec<(i64, Rational)> = (1..=gmax).map(|g| (-3 * g + 2, diag(g))).collect();
    let b: Vec<(i64, Rational)> = (0..=gmax).map(|g| (-3 * g, main(g))).collect();
    let c: Vec<(i64, Rational)> = (0..=gmax).map(|g| (-3 * g + 1, main(g) * rat(1 + 6 * g, 1 - 6 * g))).collect();
    let a = TruncSeries::from_terms(LAMBDA, tail, a);
    Mat2::new(a.clone(), TruncSeries::from_terms(LAMBDA, tail, b), TruncSeries::from_terms(LAMBDA, tail - 1, c), a.neg())
}

/// WK initial data f = x as an x-series through x^{order-1}.
pub fn wk_initial_data(order: usize) -> PowerSeries<Rational> {
    PowerSeries::x(order as i64)
}

/// The three routes to ⟨τ_{p_1} ... τ_{p_n}⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct WkRoutes {
    pub trace: Rational,
    pub kernel: Rational,
    pub abstract_jets: Rational,
}

/// ⟨τ_{p_1} ... τ_{p_n}⟩ computed through the explicit matrix, the D kernel of
/// the closed-form pair, and the abstract Ω evaluated at the WK jets.
pub fn wk_correlator_routes(ps: &[usize]) -> Result<WkRoutes> {
    if ps.len() < 2 {
        return Err(Error::InvalidRequest("WK correlators here need n >= 2".into()));
    }
    let trace = trace_correlator(&wk_m(trace_depth(ps)), ps)?;
    let kd = kernel_depth(ps);
    let d = kernel_d(&wk_pair(kd)?, kd)?;
    let kernel = correlator_from_d(&d, ps)?;
    let poly = omega_multi(ps)?;
    let abstract_jets = substitute_jets(&poly, &wk_jets(4 * ps.iter().sum::<usize>() + 2 * ps.len() + 4))?;
    Ok(WkRoutes { trace, kernel, abstract_jets })
}

/// ⟨τ_{p_1} ... τ_{p_n}⟩, checked across the three routes.
pub fn wk_correlator(ps: &[usize]) -> Result<Rational> {
    let r = wk_correlator_routes(ps)?;
    if r.trace != r.kernel || r.trace != r.abstract_jets {
        return Err(Error::InvalidRequest(format!("routes disagree for {ps:?}: {r:?}")));
    }
    Ok(r.trace)
}
