use kdvtau::airy_model::{wk_initial_data, wk_pair};
use kdvtau::bessel_model::{a_k, c_symbol, gbgw_initial_data, gbgw_pair, gbgw_r};
use kdvtau::exact_series::poly::interpolate;
use kdvtau::exact_series::{rat, Arith, ParamPoly, PowerSeries, Rational, Ring, TruncSeries};
use kdvtau::tau_structure::{npoint_series, trace_correlator};
use kdvtau::wave_kernel::*;
use kdvtau::Error;
use proptest::prelude::*;

fn cp(coeffs: &[i64]) -> ParamPoly {
    kdvtau::exact_series::poly::univariate(0, &coeffs.iter().map(|&v| rat(v, 1)).collect::<Vec<_>>())
}

#[test]
fn beta_for_linear_data() {
    let bd = beta_coeffs(&wk_initial_data(12), 3).unwrap();
    assert_eq!(bd.dbeta[0], PowerSeries::x(12).neg());
    assert_eq!(bd.beta[0].coeff(2).unwrap(), rat(-1, 2));
    assert_eq!(bd.dbeta[1].coeff(0).unwrap(), rat(1, 2));
    assert_eq!(bd.dbeta[1].coeff(1).unwrap(), rat(0, 1));
    assert_eq!(bd.beta[1].coeff(1).unwrap(), rat(1, 2));
}

#[test]
fn beta_for_gbgw_data_gives_a1() {
    let c = c_symbol();
    let bd = beta_coeffs(&gbgw_initial_data(&c, 16), 2).unwrap();
    // β_1 = C/(x-1) - (-C) ⇒ β'_1(0) = -C = a_1.
    assert_eq!(bd.dbeta[0].coeff(0).unwrap(), a_k(&c, 1));
}

#[test]
fn beta_needs_enough_initial_data() {
    assert!(matches!(beta_coeffs(&wk_initial_data(3), 8), Err(Error::DepthExhausted { .. })));
}

#[test]
fn wk_pair_certificates() {
    let rep = pair_verify(&wk_pair(12).unwrap(), 6);
    assert!(rep.all_zero(), "{rep:?}");
}

#[test]
fn wk_closed_form_dual_is_reflection() {
    let p = wk_pair(12).unwrap();
    assert_eq!(p.psi_star, p.psi.reflect());
}

#[test]
fn gbgw_pair_certificates_symbolic() {
    let rep = pair_verify(&gbgw_pair(&c_symbol(), 10).unwrap(), 6);
    assert!(rep.all_zero(), "{rep:?}");
}

#[test]
fn beta_pair_certificates() {
    let p = WavePair::from_initial_data(&wk_initial_data(40), 12).unwrap();
    assert!(pair_verify(&p, 6).all_zero());
    let g = WavePair::from_initial_data(&gbgw_initial_data(&rat(1, 8), 40), 10).unwrap();
    assert!(pair_verify(&g, 6).all_zero());
}

#[test]
fn flat_data_pair_is_trivial() {
    let f = PowerSeries::new(0, vec![rat(0, 1); 20]);
    let p = WavePair::from_initial_data(&f, 6).unwrap();
    assert!(p.b.sub(&TruncSeries::constant(Z, rat(1, 1), p.b.tail())).is_zero());
    assert!(p.psi_star.sub(&TruncSeries::constant(Z, rat(1, 1), p.psi_star.tail())).is_zero());
}

#[test]
fn corrupted_pair_fails_wronskian() {
    let mut p = wk_pair(12).unwrap();
    let terms: Vec<(i64, Rational)> =
        p.psi_star.terms().map(|(e, c)| (e, if e == -3 { -c.clone() } else { c.clone() })).collect();
    p.psi_star = TruncSeries::from_terms(Z, p.psi_star.tail(), terms);
    assert!(!pair_verify(&p, 2).all_zero());
}

#[test]
fn wk_d_coefficients() {
    let d = kernel_d(&wk_pair(10).unwrap(), 10).unwrap();
    let want = [
        ((-1, -3), rat(5, 24)),
        ((-2, -2), rat(-7, 24)),
        ((-3, -1), rat(5, 24)),
        ((-2, -5), rat(-455, 1152)),
        ((-3, -4), rat(385, 1152)),
        ((-4, -3), rat(-385, 1152)),
        ((-5, -2), rat(455, 1152)),
    ];
    for ((i, j), v) in want {
        assert_eq!(d.regular.coeff(i, j).unwrap(), v, "z^{i} w^{j}");
    }
    assert!(d.regular.is_regular());
}

#[test]
fn wk_k_head() {
    let p = wk_pair(10).unwrap();
    let k = kernel_k(&p.b, &p.b_x, 10).unwrap();
    let sym = &kernel_k_forms(&k).unwrap()[2];
    let f = rat(5, 16);
    for t in 2..=7i64 {
        for i in 1..t {
            let j = t - i;
            let want = match (i, j) {
                (2, 2) => rat(-1, 2),
                _ if t == 7 => if i % 2 == 1 { f.clone() } else { -f.clone() },
                _ => rat(0, 1),
            };
            assert_eq!(sym.coeff(-i, -j).unwrap(), want, "z^-{i} w^-{j}");
        }
    }
}

#[test]
fn gbgw_k_head() {
    let c = c_symbol();
    let p = gbgw_pair(&c, 10).unwrap();
    let k = kernel_k(&p.b, &p.b_x, 10).unwrap();
    let sym = &kernel_k_forms(&k).unwrap()[2];
    let half_c = c.scale(&rat(1, 2));
    let block = cp(&[0, 3, 3]).scale(&rat(1, 4));
    for t in 2..=5i64 {
        for i in 1..t {
            let j = t - i;
            let want = match (i, j) {
                (1, 2) => half_c.clone(),
                (2, 1) => half_c.neg(),
                (2, 2) => c.neg(),
                _ if t == 5 => if i % 2 == 1 { block.clone() } else { block.neg() },
                _ => ParamPoly::zero(),
            };
            assert_eq!(sym.coeff(-i, -j).unwrap(), want, "z^-{i} w^-{j}");
        }
    }
}

#[test]
fn k_subtractions_are_regular() {
    let p = gbgw_pair(&c_symbol(), 8).unwrap();
    let k = kernel_k(&p.b, &p.b_x, 8).unwrap();
    for form in kernel_k_forms(&k).unwrap() {
        assert!(form.is_regular());
    }
}

#[test]
fn k_forms_need_k_kernel() {
    let d = kernel_d(&wk_pair(4).unwrap(), 4).unwrap();
    assert!(kernel_k_forms(&d).is_err());
}

#[test]
fn k_equals_psi_star_psi_d() {
    for depth in [8usize, 12] {
        let p = wk_pair(depth).unwrap();
        let d = kernel_d(&p, depth).unwrap();
        let k = kernel_k(&p.b, &p.b_x, depth).unwrap();
        assert!(kd_relation_holds(&p, &d, &k, -(depth as i64) + 2).unwrap());
    }
    let p = gbgw_pair(&c_symbol(), 8).unwrap();
    let d = kernel_d(&p, 8).unwrap();
    let k = kernel_k(&p.b, &p.b_x, 8).unwrap();
    assert!(kd_relation_holds(&p, &d, &k, -6).unwrap());
}

#[test]
fn wk_correlators_from_both_kernels() {
    let cases: [(&[usize], Rational); 4] =
        [(&[1, 1], rat(1, 24)), (&[0, 0, 0], rat(1, 1)), (&[2, 3], rat(29, 5760)), (&[1, 1, 1, 1], rat(1, 4))];
    for (ps, want) in cases {
        let kd = kernel_depth(ps);
        let p = wk_pair(kd).unwrap();
        let d = kernel_d(&p, kd).unwrap();
        let k = kernel_k(&p.b, &p.b_x, kd).unwrap();
        assert_eq!(correlator_from_d(&d, ps).unwrap(), want, "D {ps:?}");
        assert_eq!(correlator_from_k(&k, ps).unwrap(), want, "K {ps:?}");
    }
}

#[test]
fn gbgw_correlators_from_kernels() {
    let c = c_symbol();
    let ps = [1usize, 1];
    let kd = kernel_depth(&ps);
    let p = gbgw_pair(&c, kd).unwrap();
    let d = kernel_d(&p, kd).unwrap();
    let k = kernel_k(&p.b, &p.b_x, kd).unwrap();
    let want = cp(&[0, 1, 1]).mul(&cp(&[5, 2])).scale(&rat(1, 6));
    assert_eq!(correlator_from_d(&d, &ps).unwrap(), want);
    assert_eq!(correlator_from_k(&k, &ps).unwrap(), want);
    assert_eq!(correlator_from_k(&k, &[0, 0]).unwrap(), c);
}

#[test]
fn theta_correlators_from_kernels() {
    let c = rat(1, 8);
    for (ps, want) in [(vec![1usize, 1, 1], rat(7221, 2048)), (vec![1, 1, 1, 1], rat(4825971, 16384))] {
        let kd = kernel_depth(&ps);
        let p = gbgw_pair(&c, kd).unwrap();
        let d = kernel_d(&p, kd).unwrap();
        let k = kernel_k(&p.b, &p.b_x, kd).unwrap();
        assert_eq!(correlator_from_d(&d, &ps).unwrap(), want);
        assert_eq!(correlator_from_k(&k, &ps).unwrap(), want);
    }
}

#[test]
fn kernel_routes_match_trace_route_gbgw() {
    let c = c_symbol();
    let depth = 12;
    let p = gbgw_pair(&c, depth).unwrap();
    let d = kernel_d(&p, depth).unwrap();
    let k = kernel_k(&p.b, &p.b_x, depth).unwrap();
    for ps in [vec![0usize, 2], vec![1, 2], vec![0, 1, 1], vec![0, 0, 2]] {
        let r = gbgw_r(&c, kdvtau::tau_structure::trace_depth(&ps));
        let tr = trace_correlator(&r, &ps).unwrap();
        assert_eq!(correlator_from_d(&d, &ps).unwrap(), tr, "{ps:?}");
        assert_eq!(correlator_from_k(&k, &ps).unwrap(), tr, "{ps:?}");
    }
}

#[test]
fn npoint_coefficients_match_series() {
    let p = wk_pair(12).unwrap();
    let d = kernel_d(&p, 12).unwrap();
    let m = kdvtau::airy_model::wk_m(12);
    let s = npoint_series(&[&m, &m], 4).unwrap();
    for e in [[-2i64, -4], [-4, -4], [-2, -6], [-6, -4]] {
        let want = s.coeff(&[e[0] / 2, e[1] / 2]).unwrap();
        assert_eq!(npoint_from_d(&d, &e).unwrap(), want, "{e:?}");
        assert_eq!(npoint_from_d(&d, &[e[0] + 1, e[1] - 1]).unwrap(), rat(0, 1), "{e:?}");
    }
}

#[test]
fn kernel_depth_exhaustion_is_reported() {
    let p = wk_pair(4).unwrap();
    let d = kernel_d(&p, 4).unwrap();
    assert!(correlator_from_d(&d, &[3, 3]).is_err());
}

#[test]
fn d_output_is_gauge_invariant() {
    let p = WavePair::from_initial_data(&wk_initial_data(40), 12).unwrap();
    let g = TruncSeries::from_terms(Z, p.psi.tail(), vec![(0, rat(1, 1)), (-1, rat(2, 3)), (-2, rat(-5, 7)), (-4, rat(1, 11))]);
    let q = p.regauge(&g).unwrap();
    let d1 = kernel_d(&p, 12).unwrap();
    let d2 = kernel_d(&q, 12).unwrap();
    for ps in [vec![0usize, 0, 0], vec![1, 1], vec![0, 1, 1], vec![1, 3]] {
        assert_eq!(correlator_from_d(&d1, &ps).unwrap(), correlator_from_d(&d2, &ps).unwrap(), "{ps:?}");
    }
}

#[test]
fn amn_first_values() {
    let c = c_symbol();
    let t = amn_recursion(&c, 4, 4);
    for m in 0..=4 {
        assert!(t[m][0].is_zero());
        assert!(t[0][m].is_zero());
    }
    assert_eq!(t[1][1], c.neg());
    assert_eq!(a_k(&c, 2), cp(&[0, 1, 1]).scale(&rat(1, 2)));
    assert_eq!(amn_simple(&c, 1, 1).0, c.neg());
}

#[test]
fn amn_from_kernel_matches_recursion() {
    let c = c_symbol();
    let p = gbgw_pair(&c, 12).unwrap();
    let d = kernel_d(&p, 12).unwrap();
    let t = amn_recursion(&c, 6, 6);
    for m in 1..=6usize {
        for n in 1..=6usize {
            if m + n <= 12 {
                assert_eq!(amn_from_kernel(&d, m as i64, n as i64).unwrap(), t[m][n], "({m},{n})");
            }
        }
    }
}

#[test]
fn amn_simple_forms_agree_at_sample() {
    let c = c_from_alpha(&rat(7, 3));
    let (x, y) = amn_simple(&c, 3, 2);
    assert_eq!(x, y);
    assert_eq!(x, amn_recursion(&c, 3, 2)[3][2]);
}

#[test]
fn amn_closed_detects_poles() {
    assert!(matches!(amn_closed(&rat(1, 2), 2, 2), Err(Error::PoleCollision(_))));
}

#[test]
fn amn_over_am_has_degree_n_minus_one_in_alpha_squared() {
    let samples: Vec<Rational> = (1..=8).map(|k| rat(2 * k + 1, 3)).collect();
    for m in 1..=4usize {
        for n in 1..=4usize {
            let pts: Vec<(Rational, Rational)> = samples
                .iter()
                .map(|al| {
                    let c = c_from_alpha(al);
                    (al * al, amn_closed(al, m, n).unwrap() / a_k(&c, m))
                })
                .collect();
            let poly = interpolate(0, &pts);
            assert_eq!(poly.degree_in(0).unwrap_or(0) as usize, n - 1, "({m},{n})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn amn_closed_matches_recursion(num in -40i64..40, den in 1i64..9, m in 1usize..6, n in 1usize..6) {
        let al = rat(num, den);
        prop_assume!(&al + rat(1, 2) != rat(0, 1));
        let two_al = &al * rat(2, 1);
        prop_assume!(!two_al.is_integer() || two_al.to_integer() % 2 == 0.into());
        let c = c_from_alpha(&al);
        let rec = amn_recursion(&c, m, n)[m][n].clone();
        let (s1, s2) = amn_simple(&c, m, n);
        prop_assert_eq!(&s1, &rec);
        prop_assert_eq!(&s2, &rec);
        prop_assert_eq!(amn_closed(&al, m, n).unwrap(), rec);
    }

    #[test]
    fn gauge_invariance_random(a in -5i64..5, b in -5i64..5, d in 1i64..7) {
        let p = wk_pair(8).unwrap();
        let g = TruncSeries::from_terms(Z, p.psi.tail(), vec![(0, rat(1, 1)), (-1, rat(a, d)), (-3, rat(b, d))]);
        let q = p.regauge(&g).unwrap();
        let d1 = kernel_d(&p, 8).unwrap();
        let d2 = kernel_d(&q, 8).unwrap();
        for ps in [vec![0usize, 0, 0], vec![1, 1], vec![0, 1]] {
            prop_assert_eq!(correlator_from_d(&d1, &ps).unwrap(), correlator_from_d(&d2, &ps).unwrap());
        }
    }
}
