//! The differential polynomial ring Q[u_0, u_1, ...] with derivation u_i -> u_{i+1}.

use super::poly::{MPoly, Monomial};
use super::ring::{Arith, Rational, Ring};
use crate::error::{Error, Result};

/// Differential polynomial; variable `i` is the jet u_i.
pub type DiffPoly = MPoly<Rational>;

/// The generator u_i.
pub fn u(i: usize) -> DiffPoly {
    DiffPoly::var(i)
}

/// Image under the derivation, by the Leibniz rule.
pub fn dpoly_derive(p: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (m, c) in p.terms() {
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut v = m.exps().to_vec();
            v[i] -= 1;
            if v.len() <= i + 1 {
                v.resize(i + 2, 0);
            }
            v[i + 1] += 1;
            out.add_term(Monomial::new(v), &c.mul(&Rational::from_int(e as i64)));
        }
    }
    out
}

pub fn dpoly_derive_n(p: &DiffPoly, n: usize) -> DiffPoly {
    (0..n).fold(p.clone(), |acc, _| dpoly_derive(&acc))
}

/// Degree under deg u_i = i; `None` for the zero polynomial or when terms disagree.
pub fn homogeneous_degree(p: &DiffPoly) -> Option<i64> {
    let mut it = p.terms().map(|(m, _)| m.weight(|i| i as i64));
    let first = it.next()?;
    it.all(|d| d == first).then_some(first)
}

/// Evaluate `p` at u_i = jets[i].
pub fn substitute_jets<S: Ring>(p: &DiffPoly, jets: &[S]) -> Result<S> {
    if let Some(b) = p.max_var() {
        if b >= jets.len() {
            return Err(Error::MissingJet(b));
        }
    }
    Ok(p.eval_with(jets, |c| S::from_rational(c)))
}

/// Set u_i = 0 for all i >= 1, keeping the u_0 part.
pub fn degree_zero_part(p: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (m, c) in p.terms() {
        if m.exps().len() <= 1 {
            out.add_term(m.clone(), c);
        }
    }
    out
}
