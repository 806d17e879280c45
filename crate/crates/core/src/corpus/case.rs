use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::Value;

use super::oracle::{oracle_expand, OracleSeries};
use crate::error::{Error, Result};
use crate::literal::{exact_from_value, line_of, scalar_from_value, series_from_value, AnyScalar, AnySeries};
use crate::method::MethodSpec;
use crate::scalar::Scalar;
use crate::series::{PowerSeries, Prefactor, ReducedExpansion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    #[default]
    None,
    /// Series stored in powers of `sqrt g`; methods run in `x = sqrt g`.
    SquareVariable,
    /// Series stored in `x` with `rho/rho0 = x^6/(1+x^2)^3`.
    EosVariable,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    /// One or more quoted numbers; every one must be matched by a computed value.
    Values(Vec<f64>),
    /// The quoted outcome is that the approximant is complex.
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperValue {
    /// Quoted text, e.g. `0.440` or `1.993|2.049`.
    pub text: String,
    pub expected: Expected,
    pub tolerance: f64,
    /// Printed label when it differs from the tag, e.g. `B_{1/2}`.
    pub label: Option<String>,
}

impl PaperValue {
    pub fn parse(text: &str, tol: Option<f64>, label: Option<String>) -> Option<Self> {
        if text == "complex" {
            return Some(PaperValue { text: text.into(), expected: Expected::Complex, tolerance: 0.0, label });
        }
        let mut values = Vec::new();
        let mut tolerance: f64 = 0.0;
        for part in text.split('|') {
            values.push(part.trim().parse::<f64>().ok()?);
            tolerance = tolerance.max(last_digit_tolerance(part.trim()));
        }
        Some(PaperValue { text: text.into(), expected: Expected::Values(values), tolerance: tol.unwrap_or(tolerance), label })
    }
}

/// Two units in the last printed digit.
fn last_digit_tolerance(s: &str) -> f64 {
    let decimals = s.split_once('.').map(|(_, d)| d.len()).unwrap_or(0);
    2.0 * 10f64.powi(-(decimals as i32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkCase {
    pub id: String,
    /// Series as methods see it, after the variable transform and oracle extension.
    pub series: AnySeries,
    pub target_beta: Option<AnyScalar>,
    pub exact_amplitude: Option<f64>,
    pub exact_limit: Option<f64>,
    pub exact_exponent: Option<f64>,
    pub transform: Transform,
    pub provenance: String,
    /// Closed-form generator for the coefficients, if one exists.
    pub oracle: Option<String>,
    /// Number of coefficients `c_0..` present in the file, before any extension.
    pub printed_terms: usize,
    pub paper_values: BTreeMap<String, PaperValue>,
    pub notes: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPaperValue {
    Text(String),
    Full { value: String, tol: Option<f64>, label: Option<String> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    id: String,
    provenance: String,
    series: Value,
    target_beta: Option<Value>,
    exact_amplitude: Option<Value>,
    exact_limit: Option<Value>,
    exact_exponent: Option<Value>,
    #[serde(default)]
    transform: Transform,
    oracle: Option<String>,
    /// Extend the series with oracle coefficients up to this order.
    oracle_order: Option<usize>,
    /// Pad with zero coefficients up to this order.
    assume_zero_through: Option<usize>,
    #[serde(default)]
    paper_values: BTreeMap<String, RawPaperValue>,
    notes: Option<String>,
}

pub fn load_case(path: &Path) -> Result<BenchmarkCase> {
    let file = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::ParseError { file: file.clone(), line: 0, msg: e.to_string() })?;
    let case = parse_case(&text, &file)?;
    if path.file_stem().and_then(|s| s.to_str()) != Some(case.id.as_str()) {
        return Err(Error::InvariantViolation { id: case.id, msg: format!("file name {file} does not match the id") });
    }
    Ok(case)
}

pub fn parse_case(text: &str, file: &str) -> Result<BenchmarkCase> {
    let perr = |line: usize, msg: String| Error::ParseError { file: file.to_string(), line, msg };
    let raw: RawCase = serde_json::from_str(text).map_err(|e| perr(e.line(), e.to_string()))?;
    let id = raw.id.clone();
    let inv = |msg: String| Error::InvariantViolation { id: id.clone(), msg };
    let float = |v: &Option<Value>| -> Result<Option<f64>> {
        v.as_ref()
            .map(|v| scalar_from_value(v).map(|s| s.to_f64()).map_err(|t| perr(line_of(text, &t), format!("malformed scalar `{t}`"))))
            .transpose()
    };

    let mut series = series_from_value(&raw.series, text, file)?;
    let printed_terms = series.order() + 1;
    let mut target_beta = match &raw.target_beta {
        None => None,
        Some(v) => Some(match series {
            AnySeries::Exact(_) => AnyScalar::Exact(exact_from_value(v).map_err(|t| perr(line_of(text, &t), format!("malformed scalar `{t}`")))?),
            AnySeries::Float(_) => AnyScalar::Float(scalar_from_value(v).map_err(|t| perr(line_of(text, &t), format!("malformed scalar `{t}`")))?.to_f64()),
        }),
    };

    if let Some(order) = raw.oracle_order {
        let oracle = raw.oracle.as_deref().ok_or_else(|| inv("oracle_order without an oracle".into()))?;
        series = extend_with_oracle(series, oracle, order).map_err(|e| match e {
            Error::UnknownFunction(_) => e,
            other => inv(other.to_string()),
        })?;
    }
    if let Some(order) = raw.assume_zero_through {
        series = pad(series, order);
    }
    if raw.transform == Transform::SquareVariable {
        series = square_variable(series)?;
        target_beta = target_beta.map(|b| match b {
            AnyScalar::Exact(r) => AnyScalar::Exact(r * BigRational::from_int(2)),
            AnyScalar::Float(x) => AnyScalar::Float(2.0 * x),
        });
    }

    let mut paper_values = BTreeMap::new();
    for (tag, v) in raw.paper_values {
        tag.parse::<MethodSpec>().map_err(|e| inv(format!("quoted value tag: {e}")))?;
        let (t, tol, label) = match v {
            RawPaperValue::Text(t) => (t, None, None),
            RawPaperValue::Full { value, tol, label } => (value, tol, label),
        };
        let pv = PaperValue::parse(&t, tol, label).ok_or_else(|| inv(format!("quoted value `{t}` for {tag} is not a number")))?;
        paper_values.insert(tag, pv);
    }

    let case = BenchmarkCase {
        id: raw.id,
        series,
        target_beta,
        exact_amplitude: float(&raw.exact_amplitude)?,
        exact_limit: float(&raw.exact_limit)?,
        exact_exponent: float(&raw.exact_exponent)?,
        transform: raw.transform,
        provenance: raw.provenance,
        oracle: raw.oracle,
        printed_terms,
        paper_values,
        notes: raw.notes,
    };
    if case.exact_amplitude.is_none() && case.exact_limit.is_none() && case.exact_exponent.is_none() && case.paper_values.is_empty() {
        return Err(inv("needs an exact reference or at least one quoted value".into()));
    }
    if case.id.is_empty() || !case.id.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-') {
        return Err(inv("id must be lowercase kebab-case".into()));
    }
    Ok(case)
}

/// Appends oracle coefficients (normalized by `c_0`) beyond the stored ones.
fn extend_with_oracle(series: AnySeries, oracle: &str, order: usize) -> Result<AnySeries> {
    let have = series.order();
    if order <= have {
        return Ok(series);
    }
    let o = oracle_expand(oracle, order)?;
    Ok(match (series, o) {
        (AnySeries::Exact(f), OracleSeries::Exact(s)) => {
            let c0 = s.coeffs()[0].clone();
            let mut c = f.series.into_coeffs();
            c.extend(s.coeffs()[have + 1..].iter().map(|x| x.clone() / c0.clone()));
            AnySeries::Exact(ReducedExpansion::new(f.prefactor, PowerSeries::new(c))?)
        }
        (AnySeries::Exact(_), OracleSeries::Float(_)) => {
            return Err(Error::InvalidArgument(format!("oracle `{oracle}` is inexact but the case is exact")))
        }
        (AnySeries::Float(f), o) => {
            let s = o.to_f64();
            let c0 = s.coeffs()[0];
            let mut c = f.series.into_coeffs();
            c.extend(s.coeffs()[have + 1..].iter().map(|x| x / c0));
            AnySeries::Float(ReducedExpansion::new(f.prefactor, PowerSeries::new(c))?)
        }
    })
}

fn pad(series: AnySeries, order: usize) -> AnySeries {
    match series {
        AnySeries::Exact(f) => AnySeries::Exact(ReducedExpansion { series: f.series.pad_to(order), ..f }),
        AnySeries::Float(f) => AnySeries::Float(ReducedExpansion { series: f.series.pad_to(order), ..f }),
    }
}

/// `g^alpha sum c_n g^{n/2}` read in `x = sqrt g`: coefficients unchanged, exponent doubled.
fn square_variable(series: AnySeries) -> Result<AnySeries> {
    fn go<T: Scalar>(f: ReducedExpansion<T>) -> Result<ReducedExpansion<T>> {
        let alpha = f.prefactor.alpha.clone() * T::from_int(2);
        ReducedExpansion::new(Prefactor::new(f.prefactor.amplitude, alpha)?, f.series)
    }
    Ok(match series {
        AnySeries::Exact(f) => AnySeries::Exact(go(f)?),
        AnySeries::Float(f) => AnySeries::Float(go(f)?),
    })
}

/// Loads every `*.json` in `dir`, sorted by id.
pub fn load_corpus(dir: &Path) -> Result<Vec<BenchmarkCase>> {
    let file = dir.display().to_string();
    let entries = fs::read_dir(dir).map_err(|e| Error::ParseError { file: file.clone(), line: 0, msg: e.to_string() })?;
    let mut paths = Vec::new();
    for entry in entries {
        let p = entry.map_err(|e| Error::ParseError { file: file.clone(), line: 0, msg: e.to_string() })?.path();
        if p.extension().and_then(|e| e.to_str()) == Some("json") {
            paths.push(p);
        }
    }
    let mut cases = paths.iter().map(|p| load_case(p)).collect::<Result<Vec<_>>>()?;
    cases.sort_by(|a, b| a.id.cmp(&b.id));
    for w in cases.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::InvariantViolation { id: w[0].id.clone(), msg: "duplicate id".into() });
        }
    }
    Ok(cases)
}

impl BenchmarkCase {
    /// Reference the methods are compared against: limit, amplitude or exponent.
    pub fn reference(&self) -> Option<f64> {
        self.exact_amplitude.or(self.exact_limit)
    }

    pub fn has_zero_tail(&self) -> bool {
        match &self.series {
            AnySeries::Exact(f) => f.series.coeffs()[1..].iter().all(Zero::is_zero),
            AnySeries::Float(f) => f.series.coeffs()[1..].iter().all(|c| *c == 0.0),
        }
    }
}
