//! JSON series literal:
//! `{"prefactor": {"A": <num|"p/q">, "alpha": <num>}, "coeffs": [<num|"p/q">, ...]}`.
//!
//! String entries are read as exact rationals. The literal is exact when `A`
//! and every coefficient are strings; numeric entries elsewhere in an exact
//! literal are read from their decimal text.

use num_rational::BigRational;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Scalar};
use crate::series::{PowerSeries, Prefactor, ReducedExpansion, ScalarKind};

#[derive(Debug, Clone, PartialEq)]
pub enum AnyScalar {
    Exact(BigRational),
    Float(f64),
}

impl AnyScalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            AnyScalar::Exact(r) => r.to_f64(),
            AnyScalar::Float(x) => *x,
        }
    }

    pub fn to_exact(&self) -> BigRational {
        match self {
            AnyScalar::Exact(r) => r.clone(),
            AnyScalar::Float(x) => BigRational::from_f64(*x),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Exact(ReducedExpansion<BigRational>),
    Float(ReducedExpansion<f64>),
}

impl AnySeries {
    pub fn kind(&self) -> ScalarKind {
        match self {
            AnySeries::Exact(_) => ScalarKind::ExactRational,
            AnySeries::Float(_) => ScalarKind::Float,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            AnySeries::Exact(f) => f.order(),
            AnySeries::Float(f) => f.order(),
        }
    }

    pub fn to_f64(&self) -> ReducedExpansion<f64> {
        match self {
            AnySeries::Exact(f) => f.to_f64(),
            AnySeries::Float(f) => f.clone(),
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            AnySeries::Exact(f) => f.prefactor.alpha.to_f64(),
            AnySeries::Float(f) => f.prefactor.alpha,
        }
    }
}

/// Reads a JSON number or string as a scalar; `Err` carries the offending text.
pub fn scalar_from_value(v: &Value) -> std::result::Result<AnyScalar, String> {
    match v {
        Value::String(s) => parse_rational(s).map(AnyScalar::Exact).ok_or_else(|| s.clone()),
        Value::Number(n) => n.as_f64().map(AnyScalar::Float).ok_or_else(|| n.to_string()),
        other => Err(other.to_string()),
    }
}

/// Exact reading of a JSON number from its decimal text.
pub fn exact_from_value(v: &Value) -> std::result::Result<BigRational, String> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()).ok_or_else(|| n.to_string()),
        _ => match scalar_from_value(v)? {
            AnyScalar::Exact(r) => Ok(r),
            AnyScalar::Float(x) => Ok(BigRational::from_f64(x)),
        },
    }
}

/// 1-based line of the first occurrence of `needle` in `text`.
pub fn line_of(text: &str, needle: &str) -> usize {
    text.find(needle).map(|i| text[..i].matches('\n').count() + 1).unwrap_or(1)
}

pub fn parse_series_literal(text: &str, file: &str) -> Result<AnySeries> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::ParseError { file: file.to_string(), line: e.line(), msg: e.to_string() })?;
    series_from_value(&v, text, file)
}

/// Builds the series from a parsed literal; `text` locates errors by line.
pub fn series_from_value(v: &Value, text: &str, file: &str) -> Result<AnySeries> {
    let perr = |needle: &str, msg: String| Error::ParseError { file: file.to_string(), line: line_of(text, needle), msg };
    let pre = v.get("prefactor").ok_or_else(|| perr("{", "missing `prefactor`".into()))?;
    let a = pre.get("A").ok_or_else(|| perr("prefactor", "missing `prefactor.A`".into()))?;
    let alpha = pre.get("alpha").ok_or_else(|| perr("prefactor", "missing `prefactor.alpha`".into()))?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("coeffs", "missing or non-array `coeffs`".into()))?;
    if coeffs.is_empty() {
        return Err(perr("coeffs", "`coeffs` is empty".into()));
    }
    let bad = |t: String| perr(&t, format!("malformed scalar `{t}`"));
    let exact = a.is_string() && coeffs.iter().all(Value::is_string);
    if exact {
        let amp = exact_from_value(a).map_err(bad)?;
        let alpha = exact_from_value(alpha).map_err(bad)?;
        let c = coeffs.iter().map(exact_from_value).collect::<std::result::Result<Vec<_>, _>>().map_err(bad)?;
        Ok(AnySeries::Exact(ReducedExpansion::new(Prefactor::new(amp, alpha)?, PowerSeries::new(c))?))
    } else {
        let f = |v: &Value| scalar_from_value(v).map(|s| s.to_f64());
        let amp = f(a).map_err(bad)?;
        let alpha = f(alpha).map_err(bad)?;
        let c = coeffs.iter().map(f).collect::<std::result::Result<Vec<_>, _>>().map_err(bad)?;
        Ok(AnySeries::Float(ReducedExpansion::new(Prefactor::new(amp, alpha)?, PowerSeries::new(c))?))
    }
}
