use crate::compute::{Report, Value};
use crate::Format;
use kdvtau::exact_series::ring::{rational_to_decimal, rational_to_string};
use kdvtau::exact_series::ParamPoly;
use serde::Serialize;
use serde_json::{json, Value as Json};
use std::collections::BTreeMap;
use std::fmt::Write;

#[derive(Serialize)]
struct JsonReport<'a> {
    family: &'a str,
    params: BTreeMap<&'a str, &'a str>,
    depth: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    variables: Vec<&'a str>,
    entries: Vec<JsonEntry>,
}

#[derive(Serialize)]
struct JsonEntry {
    indices: Vec<usize>,
    value: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal_approx: Option<String>,
}

#[derive(Serialize)]
struct Term {
    exponents: Vec<u32>,
    coeff: String,
}

fn poly_json(p: &ParamPoly, nvars: usize) -> Json {
    let terms: Vec<Term> = p.sorted_terms(nvars).into_iter().map(|(exponents, c)| Term { exponents, coeff: rational_to_string(&c) }).collect();
    serde_json::to_value(terms).expect("terms serialize")
}

fn value_json(v: &Value, nvars: usize) -> Json {
    match v {
        Value::Scalar(q) => Json::String(rational_to_string(q)),
        Value::Poly(p) => poly_json(p, nvars),
        Value::Elliptic(e) => json!({"even": poly_json(&e.poly0, nvars), "odd": poly_json(&e.poly1, nvars)}),
        Value::Laurent(t) => Json::Array(t.iter().map(|(e, c)| json!({"exponent": e, "coeff": poly_json(c, nvars)})).collect()),
    }
}

fn value_text(v: &Value, names: &[&str]) -> String {
    match v {
        Value::Scalar(q) => rational_to_string(q),
        Value::Poly(p) => p.to_text(names),
        Value::Elliptic(e) if e.poly1.is_zero() => e.poly0.to_text(names),
        Value::Elliptic(e) => format!("({}) + ({})*Y", e.poly0.to_text(names), e.poly1.to_text(names)),
        Value::Laurent(t) => {
            let parts: Vec<String> = t.iter().map(|(e, c)| format!("({})*x^{}", c.to_text(names), e)).collect();
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        }
    }
}

fn approx(v: &Value, digits: Option<usize>) -> Option<String> {
    match (v, digits) {
        (Value::Scalar(q), Some(k)) => Some(rational_to_decimal(q, k)),
        _ => None,
    }
}

fn join(ix: &[usize], sep: &str) -> String {
    ix.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', ' ']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(r: &Report, format: Format, digits: Option<usize>) -> String {
    let nvars = r.variables.len();
    match format {
        Format::Json => {
            let out = JsonReport {
                family: r.family,
                params: r.params.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect(),
                depth: r.depth,
                variables: r.variables.clone(),
                entries: r
                    .entries
                    .iter()
                    .map(|e| JsonEntry { indices: e.indices.clone(), value: value_json(&e.value, nvars), decimal_approx: approx(&e.value, digits) })
                    .collect(),
            };
            serde_json::to_string_pretty(&out).expect("report serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("indices,value");
            if digits.is_some() {
                s.push_str(",decimal_approx");
            }
            s.push('\n');
            for e in &r.entries {
                let _ = write!(s, "{},{}", join(&e.indices, ";"), csv_field(&value_text(&e.value, &r.variables)));
                if digits.is_some() {
                    let _ = write!(s, ",{}", approx(&e.value, digits).unwrap_or_default());
                }
                s.push('\n');
            }
            s
        }
        Format::Text => {
            let mut s = format!("# family {} depth {}", r.family, r.depth);
            for (k, v) in &r.params {
                let _ = write!(s, " {k}={v}");
            }
            s.push('\n');
            if r.variables.contains(&"X") {
                s.push_str("# X = wp(x), Y = wp'(x)\n");
            }
            if digits.is_some() {
                s.push_str("# values after '~' are rounded and not exact\n");
            }
            for e in &r.entries {
                let _ = write!(s, "({}) {}", join(&e.indices, ","), value_text(&e.value, &r.variables));
                if let Some(a) = approx(&e.value, digits) {
                    let _ = write!(s, "  ~{a}");
                }
                s.push('\n');
            }
            s
        }
    }
}
