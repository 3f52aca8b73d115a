use kdvtau::exact_series::{rat, Arith, Monomial, ParamPoly, PowerSeries, Rational, Ring};
use kdvtau::lame_model::*;
use proptest::prelude::*;

/// Σ q·C^a g2^b g3^c X^d from (a, b, c, d, num, den) rows.
fn poly(rows: &[(u32, u32, u32, u32, i64, i64)]) -> ParamPoly {
    let mut p = ParamPoly::zero();
    for &(a, b, c, d, n, den) in rows {
        p.add_term(Monomial::new(vec![a, b, c, d]), &rat(n, den));
    }
    p
}

fn c() -> ParamPoly {
    ParamPoly::var(VAR_C)
}

fn cpoly(coeffs: &[i64]) -> ParamPoly {
    kdvtau::exact_series::poly::univariate(VAR_C, &coeffs.iter().map(|&v| rat(v, 1)).collect::<Vec<_>>())
}

fn reflect_x(s: &PowerSeries<ParamPoly>) -> PowerSeries<ParamPoly> {
    let c = (s.low()..s.order()).map(|e| if e.rem_euclid(2) == 1 { s.at(e).neg() } else { s.at(e) }).collect();
    PowerSeries::new(s.low(), c)
}

#[test]
fn p_list_starts_with_one_and_c_x() {
    let p = lame_p_list(2);
    assert_eq!(p[0], ParamPoly::one());
    assert_eq!(p[1], c().mul(&ParamPoly::var(VAR_X)));
    assert_eq!(lame_P(1), p[1]);
}

#[test]
fn p_list_has_x_degree_k() {
    for (k, p) in lame_p_list(6).iter().enumerate() {
        assert_eq!(p.degree_in(VAR_X).unwrap_or(0) as usize, k);
    }
}

#[test]
fn b10_residual_vanishes() {
    let r = lame_b10_residual(8);
    assert!(r.is_zero(), "{:?}", r.terms().next());
}

#[test]
fn p_k_is_homogeneous_of_weight_2k() {
    assert!(lame_homogeneity(8));
}

#[test]
fn wp_coefficients_match_laurent_display() {
    let a = wp_coefficients(7);
    assert_eq!(a[2], poly(&[(0, 1, 0, 0, 1, 20)]));
    assert_eq!(a[3], poly(&[(0, 0, 1, 0, 1, 28)]));
    assert_eq!(a[4], poly(&[(0, 2, 0, 0, 1, 1200)]));
    assert_eq!(a[5], poly(&[(0, 1, 1, 0, 3, 6160)]));
    assert_eq!(a[6], poly(&[(0, 3, 0, 0, 49, 7644000), (0, 0, 2, 0, 750, 7644000)]));
}

#[test]
fn wp_satisfies_first_order_equation() {
    let wp = wp_series(14);
    let d = wp.derivative();
    let lhs = d.mul(&d);
    let g2 = ParamPoly::var(VAR_G2);
    let g3 = ParamPoly::var(VAR_G3);
    let rhs = wp.mul(&wp).mul(&wp).scale_by(&ParamPoly::from_int(4)).sub(&wp.scale_by(&g2));
    let diff = lhs.sub(&rhs);
    for e in diff.low()..diff.order() {
        let want = if e == 0 { g3.neg() } else { ParamPoly::zero() };
        assert_eq!(diff.at(e), want, "x^{e}");
    }
}

#[test]
fn jets_close_in_v() {
    let j = lame_jets(3);
    assert_eq!(j[1], EllipticElem::wp_prime().mul(&EllipticElem::from_poly(c())));
    let want = poly(&[(1, 0, 0, 2, 6, 1), (1, 1, 0, 0, -1, 2)]);
    assert_eq!(j[2], EllipticElem::from_poly(want));
}

#[test]
fn spectral_closed_forms_match_p_series() {
    for p in 1..=3 {
        let r = spectral_check(p, 8).unwrap();
        assert!(r.all_zero(), "p={p}: {r:?}");
    }
}

#[test]
fn spectral_p1_heads() {
    let s = spectral_closed_form(1, 4).unwrap();
    assert_eq!(s.at(-1), ParamPoly::var(VAR_X).neg());
    assert_eq!(s.at(-2), poly(&[(0, 1, 0, 0, 1, 8)]));
}

#[test]
fn spectral_p2_first_coefficient() {
    let s = spectral_closed_form(2, 3).unwrap();
    assert_eq!(s.at(-1), poly(&[(0, 0, 0, 1, -3, 1)]));
}

#[test]
fn wrong_c_fails_spectral_check() {
    let b = lame_b(6);
    let closed = spectral_closed_form(1, 6).unwrap();
    let at = |s: &ParamPoly| s.substitute(VAR_C, &ParamPoly::constant(rat(-3, 1)));
    assert_ne!(closed.at(-1), at(&b.at(-1)));
}

#[test]
fn spectral_rejects_other_p() {
    assert!(spectral_closed_form(4, 4).is_err());
}

#[test]
fn omega_00_and_000_and_0000() {
    let cx = c().mul(&ParamPoly::var(VAR_X));
    assert_eq!(lame_partial_correlator(&[0, 0]).unwrap(), EllipticElem::from_poly(cx));
    assert_eq!(lame_partial_correlator(&[0, 0, 0]).unwrap(), EllipticElem::new(ParamPoly::zero(), c()));
    let want = poly(&[(1, 0, 0, 2, 6, 1), (1, 1, 0, 0, -1, 2)]);
    assert_eq!(lame_partial_correlator(&[0, 0, 0, 0]).unwrap(), EllipticElem::from_poly(want));
}

#[test]
fn omega_11_elliptic() {
    let want = poly(&[
        (1, 0, 0, 3, 5, 6),
        (2, 0, 0, 3, 7, 6),
        (3, 0, 0, 3, 2, 6),
        (1, 1, 0, 1, -1, 8),
        (2, 1, 0, 1, -1, 8),
        (1, 0, 1, 0, -2, 24),
        (2, 0, 1, 0, -1, 24),
    ]);
    assert_eq!(lame_partial_correlator(&[1, 1]).unwrap(), EllipticElem::from_poly(want));
}

#[test]
fn omega_111_elliptic() {
    // C(C+1)/24 · (4(2C+7)(3C+10)X³ − (11C+28)g2X − 2(C+5)g3) · Y
    let pre = c().mul(&c().add(&ParamPoly::one())).scale(&rat(1, 24));
    let x = ParamPoly::var(VAR_X);
    let g2 = ParamPoly::var(VAR_G2);
    let g3 = ParamPoly::var(VAR_G3);
    let inner = cpoly(&[280, 164, 24])
        .mul(&x.pow(3))
        .sub(&cpoly(&[28, 11]).mul(&g2).mul(&x))
        .sub(&cpoly(&[10, 2]).mul(&g3));
    let want = EllipticElem::new(ParamPoly::zero(), pre.mul(&inner));
    assert_eq!(lame_partial_correlator(&[1, 1, 1]).unwrap(), want);
}

#[test]
fn omega_00_laurent_through_x10() {
    let got = lame_partial_laurent(&[0, 0], 10).unwrap();
    let wp = wp_series(10).scale_by(&c());
    assert_eq!(got, wp);
    assert_eq!(got.at(10), poly(&[(1, 3, 0, 0, 49, 7644000), (1, 0, 2, 0, 750, 7644000)]));
}

#[test]
fn omega_000_laurent_through_x9() {
    // The display is written in the reflected coordinate x -> -x.
    let got = reflect_x(&lame_partial_laurent(&[0, 0, 0], 9).unwrap());
    let terms = [
        (-3, poly(&[(1, 0, 0, 0, 2, 1)])),
        (1, poly(&[(1, 1, 0, 0, -1, 10)])),
        (3, poly(&[(1, 0, 1, 0, -1, 7)])),
        (5, poly(&[(1, 2, 0, 0, -1, 200)])),
        (7, poly(&[(1, 1, 1, 0, -3, 770)])),
        (9, poly(&[(1, 3, 0, 0, -49, 764400), (1, 0, 2, 0, -750, 764400)])),
    ];
    assert_eq!(got, laurent_from(&terms, -3, 9));
}

#[test]
fn omega_11_laurent_head() {
    let got = lame_partial_laurent(&[1, 1], 2).unwrap();
    let cc1 = c().mul(&c().add(&ParamPoly::one()));
    assert_eq!(got.at(-6), cc1.mul(&cpoly(&[5, 2])).scale(&rat(1, 6)));
    assert_eq!(got.at(-2), cc1.mul(&c()).mul(&ParamPoly::var(VAR_G2)).scale(&rat(1, 20)));
    assert_eq!(got.at(0), c().mul(&cpoly(&[1, 14, 6])).mul(&ParamPoly::var(VAR_G3)).scale(&rat(1, 168)));
    assert_eq!(got.at(2), cc1.mul(&cpoly(&[5, 8])).mul(&ParamPoly::var(VAR_G2).pow(2)).scale(&rat(1, 2400)));
}

#[test]
fn omega_000_laurent_is_c_wp_prime() {
    let got = lame_partial_laurent(&[0, 0, 0], 9).unwrap();
    assert_eq!(got, wp_series(12).derivative().scale_by(&c()).truncate(10));
    assert_eq!(got.at(-3), c().scale(&rat(-2, 1)));
}

#[test]
fn omega_111_laurent_head() {
    // Expansion of the elliptic form, checked by hand at x^-9 and x^-5.
    let got = lame_partial_laurent(&[1, 1, 1], 1).unwrap();
    let cc1 = c().mul(&c().add(&ParamPoly::one()));
    let g2 = ParamPoly::var(VAR_G2);
    let g3 = ParamPoly::var(VAR_G3);
    assert_eq!(got.at(-9), cc1.mul(&cpoly(&[7, 2])).mul(&cpoly(&[10, 3])).scale(&rat(-1, 3)));
    assert_eq!(got.at(-5), cc1.mul(&c()).mul(&cpoly(&[9, 4])).mul(&g2).scale(&rat(-1, 20)));
    assert_eq!(got.at(-3), cc1.mul(&c()).mul(&cpoly(&[9, 2])).mul(&g3).scale(&rat(-1, 28)));
    assert!(got.at(-1).is_zero());
}

#[test]
fn laurent_coefficients_are_isobaric() {
    for ps in [vec![0, 0], vec![0, 0, 0], vec![1, 1], vec![1, 1, 1]] {
        let s = lame_partial_laurent(&ps, 8).unwrap();
        for e in s.low()..s.order() {
            assert!(s.at(e).is_isobaric(modular_weight), "{ps:?} x^{e}");
        }
    }
}

#[test]
fn partial_correlator_needs_two_indices() {
    assert!(lame_partial_correlator(&[1]).is_err());
}

fn elem() -> impl Strategy<Value = EllipticElem> {
    let coeff = (-4i64..=4, 0u32..=2, 0u32..=1, 0u32..=1, 0u32..=3);
    let side = proptest::collection::vec(coeff, 0..4).prop_map(|rows| {
        let mut p = ParamPoly::zero();
        for (q, a, b, cc, d) in rows {
            p.add_term(Monomial::new(vec![a, b, cc, d]), &Rational::from_integer(q.into()));
        }
        p
    });
    (side.clone(), side).prop_map(|(a, b)| EllipticElem::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn derivation_obeys_leibniz(a in elem(), b in elem()) {
        prop_assert_eq!(a.mul(&b).derive(), a.derive().mul(&b).add(&a.mul(&b.derive())));
    }

    #[test]
    fn product_is_associative(a in elem(), b in elem(), d in elem()) {
        prop_assert_eq!(a.mul(&b).mul(&d), a.mul(&b.mul(&d)));
    }
}
