use crate::{FamilyArgs, Mode};
use kdvtau::airy_model::wk_pair;
use kdvtau::bessel_model::{c_symbol, gbgw_pair};
use kdvtau::exact_series::ring::{parse_rational, rational_to_string};
use kdvtau::exact_series::{rat, ParamPoly, Rational, Ring};
use kdvtau::lame_model::{lame_partial_correlator, lame_partial_laurent, EllipticElem, VAR_C};
use kdvtau::tau_structure::{constant_value, correlator, trace_depth, CorrelatorRequest, Family};
use kdvtau::wave_kernel::{kernel_d, WavePair};
use rayon::prelude::*;

pub const DEFAULT_DEPTH: usize = 30;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Wk,
    Theta,
    Gbgw,
    Lame,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Wk => "wk",
            FamilyKind::Theta => "theta",
            FamilyKind::Gbgw => "gbgw",
            FamilyKind::Lame => "lame",
        }
    }

    /// Smallest n with a defined correlator.
    fn n_min(self) -> usize {
        match self {
            FamilyKind::Wk | FamilyKind::Lame => 2,
            FamilyKind::Theta | FamilyKind::Gbgw => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CParam {
    Value(Rational),
    Symbolic,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub family: FamilyKind,
    pub mode: Mode,
    pub indices: Vec<Vec<usize>>,
    pub c: Option<CParam>,
    pub depth: usize,
    pub laurent: Option<i64>,
    pub params: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Rational),
    Poly(ParamPoly),
    Elliptic(EllipticElem),
    Laurent(Vec<(i64, ParamPoly)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub indices: Vec<usize>,
    pub value: Value,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub family: &'static str,
    pub params: Vec<(String, String)>,
    pub depth: usize,
    pub variables: Vec<&'static str>,
    pub entries: Vec<Entry>,
}

fn parse_c(family: FamilyKind, raw: Option<&str>) -> Result<Option<CParam>, String> {
    match (family, raw) {
        (FamilyKind::Wk | FamilyKind::Theta, Some(_)) => Err(format!("--C is not accepted by the {} family", family.name())),
        (FamilyKind::Wk | FamilyKind::Theta, None) => Ok(None),
        (_, None) | (_, Some("symbolic")) => Ok(Some(CParam::Symbolic)),
        (_, Some(s)) => parse_rational(s).map(|q| Some(CParam::Value(q))).ok_or_else(|| format!("cannot read C = {s:?}; expected a rational or \"symbolic\"")),
    }
}

impl RunConfig {
    pub fn from_args(family: FamilyKind, a: &FamilyArgs) -> Result<Self, String> {
        let c = parse_c(family, a.c.as_deref())?;
        if a.laurent.is_some() && family != FamilyKind::Lame {
            return Err("--laurent applies to the lame family only".into());
        }
        let mut params = Vec::new();
        let indices: Vec<Vec<usize>> = match a.mode {
            Mode::Correlator => {
                if a.p.is_empty() {
                    return Err("correlator needs --p".into());
                }
                if a.p.len() < family.n_min() {
                    return Err(format!("{} correlators need at least {} indices", family.name(), family.n_min()));
                }
                params.push(("p".into(), join(&a.p)));
                vec![a.p.clone()]
            }
            Mode::Onepoint => {
                if matches!(family, FamilyKind::Wk | FamilyKind::Lame) {
                    return Err(format!("1-point values are not available for the {} family", family.name()));
                }
                if a.p.is_empty() {
                    return Err("onepoint needs --p".into());
                }
                params.push(("p".into(), join(&a.p)));
                a.p.iter().map(|p| vec![*p]).collect()
            }
            Mode::Table => {
                let (Some(b), Some(n_max)) = (a.b, a.n_max) else {
                    return Err("table needs --b and --n-max".into());
                };
                if n_max < family.n_min() {
                    return Err(format!("--n-max must be at least {}", family.n_min()));
                }
                params.push(("b".into(), b.to_string()));
                params.push(("n_max".into(), n_max.to_string()));
                (family.n_min()..=n_max).map(|n| vec![b; n]).collect()
            }
            Mode::Kernel => {
                if family == FamilyKind::Lame {
                    return Err("kernel dumps are available for wk, theta and gbgw".into());
                }
                params.push(("kernel".into(), "D(z,w)-1/(z-w); (i,j) is the coefficient of z^-i w^-j".into()));
                Vec::new()
            }
        };
        let minimal = match a.mode {
            Mode::Kernel => 1,
            Mode::Onepoint => 0,
            _ => indices.iter().map(|ps| trace_depth(ps)).max().unwrap_or(0),
        };
        let depth = match a.depth {
            Some(d) if d < minimal => return Err(format!("depth {d} is too small; at least {minimal} is required")),
            Some(d) => d,
            None => DEFAULT_DEPTH.max(minimal),
        };
        match &c {
            Some(CParam::Value(q)) => params.push(("C".into(), rational_to_string(q))),
            Some(CParam::Symbolic) => params.push(("C".into(), "symbolic".into())),
            None if family == FamilyKind::Theta => params.push(("C".into(), "1/8".into())),
            None => {}
        }
        if let Some(k) = a.laurent {
            params.push(("laurent".into(), k.to_string()));
        }
        params.sort();
        Ok(RunConfig { family, mode: a.mode, indices, c, depth, laurent: a.laurent, params })
    }

    fn c_poly(&self) -> ParamPoly {
        match &self.c {
            Some(CParam::Value(q)) => ParamPoly::constant(q.clone()),
            _ => c_symbol(),
        }
    }

    fn variables(&self) -> Vec<&'static str> {
        match (self.family, &self.c) {
            (FamilyKind::Lame, _) => kdvtau::lame_model::NAMES.to_vec(),
            (FamilyKind::Gbgw, Some(CParam::Symbolic)) => vec!["C"],
            _ => Vec::new(),
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn run(cfg: &RunConfig) -> Result<Report, String> {
    let entries = match cfg.mode {
        Mode::Kernel => kernel_entries(cfg)?,
        _ => cfg
            .indices
            .par_iter()
            .map(|ps| entry(cfg, ps).map(|value| Entry { indices: ps.clone(), value }))
            .collect::<Result<Vec<_>, String>>()?,
    };
    Ok(Report { family: cfg.family.name(), params: cfg.params.clone(), depth: cfg.depth, variables: cfg.variables(), entries })
}

fn err(e: kdvtau::Error) -> String {
    e.to_string()
}

fn entry(cfg: &RunConfig, ps: &[usize]) -> Result<Value, String> {
    let family = match cfg.family {
        FamilyKind::Wk => Family::Wk,
        FamilyKind::Theta => Family::Theta,
        FamilyKind::Gbgw => Family::Gbgw(cfg.c_poly()),
        FamilyKind::Lame => return lame_entry(cfg, ps),
    };
    let mut req = CorrelatorRequest::new(family, ps);
    req.depth = Some(cfg.depth);
    let v = correlator(&req).map_err(err)?;
    Ok(match constant_value(&v) {
        Some(q) if cfg.c != Some(CParam::Symbolic) => Value::Scalar(q),
        _ => Value::Poly(v),
    })
}

fn lame_entry(cfg: &RunConfig, ps: &[usize]) -> Result<Value, String> {
    let fix = |p: &ParamPoly| match &cfg.c {
        Some(CParam::Value(q)) => p.substitute(VAR_C, &ParamPoly::constant(q.clone())),
        _ => p.clone(),
    };
    match cfg.laurent {
        Some(k) => {
            let s = lame_partial_laurent(ps, k).map_err(err)?;
            let terms = (s.low()..s.order()).map(|e| (e, fix(&s.at(e)))).filter(|(_, c)| !c.is_zero()).collect();
            Ok(Value::Laurent(terms))
        }
        None => {
            let e = lame_partial_correlator(ps).map_err(err)?;
            Ok(Value::Elliptic(EllipticElem::new(fix(&e.poly0), fix(&e.poly1))))
        }
    }
}

/// Regular part of D(z,w) − 1/(z−w): entry (i, j) is the coefficient of z^{-i} w^{-j}.
fn kernel_entries(cfg: &RunConfig) -> Result<Vec<Entry>, String> {
    fn collect<R: Ring>(pair: WavePair<R>, depth: usize, wrap: impl Fn(&R) -> Value) -> Result<Vec<Entry>, String> {
        let d = kernel_d(&pair, depth).map_err(err)?;
        let mut out: Vec<Entry> = d
            .regular
            .terms()
            .map(|((i, j), c)| Entry { indices: vec![(-i) as usize, (-j) as usize], value: wrap(c) })
            .collect();
        out.sort_by_key(|e| (e.indices[0] + e.indices[1], e.indices[0]));
        Ok(out)
    }
    let depth = cfg.depth;
    match (cfg.family, &cfg.c) {
        (FamilyKind::Wk, _) => collect(wk_pair(depth).map_err(err)?, depth, |c| Value::Scalar(c.clone())),
        (FamilyKind::Theta, _) => collect(gbgw_pair(&rat(1, 8), depth).map_err(err)?, depth, |c| Value::Scalar(c.clone())),
        (_, Some(CParam::Value(q))) => collect(gbgw_pair(q, depth).map_err(err)?, depth, |c| Value::Scalar(c.clone())),
        _ => collect(gbgw_pair(&c_symbol(), depth).map_err(err)?, depth, |c| Value::Poly(c.clone())),
    }
}
