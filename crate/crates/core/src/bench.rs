//! Corpus regression: every (case, method tag) pair with a quoted value.

use std::fmt::Write as _;

use serde::Serialize;

use crate::corpus::{BenchmarkCase, Expected, PaperValue};
use crate::error::Error;
use crate::method::{run_method, Family, MethodSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Complex,
    DomainError,
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Complex => "complex",
            Status::DomainError => "domain-error",
            Status::Skipped => "skipped",
        }
    }

    pub fn of(e: &Error) -> Status {
        match e {
            _ if e.is_complex() => Status::Complex,
            Error::InsufficientOrder { .. } | Error::InvalidArgument(_) => Status::Skipped,
            _ => Status::DomainError,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ReportValue {
    Values(Vec<f64>),
    /// Error tag of the failure mode.
    Error(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub case_id: String,
    pub method_tag: String,
    pub value: ReportValue,
    pub reference: Option<Vec<f64>>,
    pub abs_error: Option<f64>,
    pub status: Status,
    pub tolerance: f64,
    pub pass: bool,
    pub label: Option<String>,
}

pub const CSV_HEADER: &str = "case_id,method_tag,value,reference,abs_error,status";

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join("|")
}

impl RunReport {
    pub fn value_text(&self) -> String {
        match &self.value {
            ReportValue::Values(v) => join(v),
            ReportValue::Error(t) => t.clone(),
        }
    }

    pub fn reference_text(&self) -> String {
        self.reference.as_deref().map(join).unwrap_or_default()
    }

    pub fn abs_error_text(&self) -> String {
        self.abs_error.map(|e| format!("{e:.3e}")).unwrap_or_default()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.case_id,
            self.method_tag,
            self.value_text(),
            self.reference_text(),
            self.abs_error_text(),
            self.status.name()
        )
    }
}

/// Largest distance from a quoted value to its nearest computed value.
fn match_error(computed: &[f64], quoted: &[f64]) -> f64 {
    quoted
        .iter()
        .map(|q| computed.iter().map(|c| (c - q).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

pub fn run_one(case: &BenchmarkCase, tag: &str, pv: &PaperValue) -> RunReport {
    let reference = match &pv.expected {
        Expected::Values(v) => Some(v.clone()),
        Expected::Complex => None,
    };
    let result = tag.parse::<MethodSpec>().and_then(|spec| run_method(&case.series, case.target_beta.as_ref(), &spec));
    let (value, status) = match result {
        Ok(out) => (ReportValue::Values(out.values), Status::Ok),
        Err(e) => {
            log::debug!("{} {tag}: {e}", case.id);
            (ReportValue::Error(e.tag().to_string()), Status::of(&e))
        }
    };
    let abs_error = match (&value, &reference) {
        (ReportValue::Values(c), Some(q)) => Some(match_error(c, q)),
        _ => None,
    };
    let pass = match &pv.expected {
        Expected::Complex => status == Status::Complex,
        Expected::Values(_) => abs_error.is_some_and(|e| e <= pv.tolerance + 1e-12),
    };
    RunReport {
        case_id: case.id.clone(),
        method_tag: tag.to_string(),
        value,
        reference,
        abs_error,
        status,
        tolerance: pv.tolerance,
        pass,
        label: pv.label.clone(),
    }
}

/// Runs all quoted values whose family is in `families` (all when empty),
/// one thread per case; rows are sorted by case id then tag.
pub fn run_bench(cases: &[BenchmarkCase], families: &[Family]) -> Vec<RunReport> {
    let wanted = |tag: &str| {
        families.is_empty()
            || tag.split(':').next().and_then(|f| f.parse::<Family>().ok()).is_some_and(|f| families.contains(&f))
    };
    let mut rows: Vec<RunReport> = std::thread::scope(|s| {
        let handles: Vec<_> = cases
            .iter()
            .map(|case| {
                s.spawn(move || {
                    case.paper_values
                        .iter()
                        .filter(|(tag, _)| wanted(tag))
                        .map(|(tag, pv)| run_one(case, tag, pv))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("bench worker panicked")).collect()
    });
    rows.sort_by(|a, b| (&a.case_id, &a.method_tag).cmp(&(&b.case_id, &b.method_tag)));
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub comparisons: usize,
    pub pass: usize,
    pub fail: usize,
}

pub fn summarize(rows: &[RunReport]) -> Summary {
    let pass = rows.iter().filter(|r| r.pass).count();
    Summary { comparisons: rows.len(), pass, fail: rows.len() - pass }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} comparisons: {} pass, {} fail", self.comparisons, self.pass, self.fail)
    }
}

pub fn to_csv(rows: &[RunReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}
