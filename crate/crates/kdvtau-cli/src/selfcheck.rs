use crate::{Format, Suite};
use kdvtau::airy_model::{wk_correlator, wk_pair};
use kdvtau::bessel_model::{
    c_symbol, gbgw_full_genera_residuals, gbgw_pair, onepoint_closed, onepoint_from_rho, rho_series, second_kind_ode_verify,
    theta_full_genera_residuals, theta_m,
};
use kdvtau::exact_series::{rat, u, Rational};
use kdvtau::lame_model::{lame_b10_residual, lame_homogeneity, spectral_check};
use kdvtau::matrix_resolvent::{lenard_magri_residuals, mr_b_coeffs, mr_verify, KdvFlows};
use kdvtau::tau_structure::{trace_correlator, TauStructure};
use kdvtau::wave_kernel::{kd_relation_holds, kernel_d, kernel_k, pair_verify};
use serde::Serialize;
use std::fmt::Write;

#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
}

fn item(suite: &'static str, name: &str, pass: bool) -> Item {
    Item { suite, name: name.to_string(), pass }
}

fn mr() -> Vec<Item> {
    let flows = KdvFlows::new(3);
    let commute = (0..=3).all(|k| (0..=3).all(|l| flows.apply(k, &flows.apply(l, &u(0))) == flows.apply(l, &flows.apply(k, &u(0)))));
    vec![
        item("mr", "resolvent identities to depth 10", mr_verify(10).all_zero()),
        item("mr", "Lenard-Magri recursion to depth 8", lenard_magri_residuals(&mr_b_coeffs(8)).iter().all(|r| r.is_zero())),
        item("mr", "flows commute on u0 for k,l <= 3", commute),
    ]
}

fn tau() -> Vec<Item> {
    let t = TauStructure::new(9, 3);
    let sym = (0..=4).all(|p| (0..=4).all(|q| t.omega_pq(p, q).ok() == t.omega_pq(q, p).ok()));
    let f = t.flows();
    let compat = (0..=3).all(|p| {
        (0..=3).all(|q| (0..=3).all(|r| f.apply(r, &t.omega_pq(p, q).unwrap()) == f.apply(q, &t.omega_pq(p, r).unwrap())))
    });
    vec![
        item("tau", "Omega symmetric for p,q <= 4", sym),
        item("tau", "Omega flow-compatible for p,q,r <= 3", compat),
        item("tau", "Omega_00 = u0", t.omega_pq(0, 0).ok() == Some(u(0))),
    ]
}

fn kernel() -> Vec<Item> {
    let wk = wk_pair(12).unwrap();
    let d = kernel_d(&wk, 10).unwrap();
    let want = [
        ((-1, -3), rat(5, 24)),
        ((-2, -2), rat(-7, 24)),
        ((-3, -1), rat(5, 24)),
        ((-2, -5), rat(-455, 1152)),
        ((-3, -4), rat(385, 1152)),
        ((-4, -3), rat(-385, 1152)),
        ((-5, -2), rat(455, 1152)),
    ];
    let dcoeff = want.iter().all(|((i, j), v)| d.regular.coeff(*i, *j).ok().as_ref() == Some(v));
    let k = kernel_k(&wk.b, &wk.b_x, 10).unwrap();
    let kd = kd_relation_holds(&wk, &kernel_d(&wk, 10).unwrap(), &k, -8).unwrap_or(false);
    vec![
        item("kernel", "WK D coefficients", dcoeff),
        item("kernel", "WK pair certificates to depth 12", pair_verify(&wk, 6).all_zero()),
        item("kernel", "gBGW symbolic pair certificates to depth 12", pair_verify(&gbgw_pair(&c_symbol(), 12).unwrap(), 6).all_zero()),
        item("kernel", "K = psi*(z) psi(w) D for WK", kd),
    ]
}

fn airy() -> Vec<Item> {
    let cases: [(&[usize], Rational); 5] = [
        (&[0, 0, 0], rat(1, 1)),
        (&[1, 1, 1], rat(1, 12)),
        (&[4, 1], rat(1, 384)),
        (&[5, 0], rat(1, 1152)),
        (&[2, 2, 0], rat(0, 1)),
    ];
    cases
        .iter()
        .map(|(ps, v)| item("airy", &format!("WK {ps:?} by three routes"), wk_correlator(ps).ok().as_ref() == Some(v)))
        .collect()
}

fn bessel() -> Vec<Item> {
    let m = theta_m(16);
    let table = [(1usize, rat(3, 128)), (2, rat(63, 512)), (3, rat(7221, 2048)), (4, rat(4825971, 16384))];
    let col = table.iter().all(|(n, v)| {
        let got = if *n == 1 { Ok(onepoint_closed(&rat(1, 8), 1)) } else { trace_correlator(&m, &vec![1; *n]) };
        got.ok().as_ref() == Some(v)
    });
    let c = c_symbol();
    let rho = rho_series(&c, 21);
    let onepoint = (0..=20).all(|p| onepoint_from_rho(&rho, p).ok() == Some(onepoint_closed(&c, p)));
    let genera = theta_full_genera_residuals(12).map(|v| v.iter().all(|(_, r)| r.is_zero())).unwrap_or(false)
        && gbgw_full_genera_residuals(&c, 12).map(|v| v.iter().all(|(_, r)| r.is_zero())).unwrap_or(false);
    vec![
        item("bessel", "Theta table column b=1, n <= 4", col),
        item("bessel", "closed 1-point formula vs rho for p <= 20", onepoint),
        item("bessel", "second-kind ODE and det M = -1 to depth 10", second_kind_ode_verify(&c, 10).all_zero()),
        item("bessel", "full-genera identities to depth 12", genera),
    ]
}

fn lame() -> Vec<Item> {
    vec![
        item("lame", "B10 residual vanishes to depth 8", lame_b10_residual(8).is_zero()),
        item("lame", "P_k homogeneous of weight 2k for k <= 8", lame_homogeneity(8)),
        item("lame", "spectral closed forms p = 1,2,3 to depth 8", (1..=3).all(|p| spectral_check(p, 8).map(|r| r.all_zero()).unwrap_or(false))),
    ]
}

pub fn run(suite: Suite) -> Vec<Item> {
    let all = suite == Suite::All;
    let mut out = Vec::new();
    let table: [(Suite, fn() -> Vec<Item>); 6] =
        [(Suite::Mr, mr), (Suite::Tau, tau), (Suite::Kernel, kernel), (Suite::Airy, airy), (Suite::Bessel, bessel), (Suite::Lame, lame)];
    for (s, f) in table {
        if all || s == suite {
            out.extend(f());
        }
    }
    out
}

pub fn render(items: &[Item], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(items).expect("items serialize") + "\n",
        Format::Csv => {
            let mut s = String::from("suite,name,pass\n");
            for i in items {
                let _ = writeln!(s, "{},\"{}\",{}", i.suite, i.name, i.pass);
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for i in items {
                let _ = writeln!(s, "{} {}: {}", if i.pass { "PASS" } else { "FAIL" }, i.suite, i.name);
            }
            let failed = items.iter().filter(|i| !i.pass).count();
            let _ = writeln!(s, "{} passed, {} failed", items.len() - failed, failed);
            s
        }
    }
}
