//! Method tags `<family>:<order-spec>:<mode>` and their execution on a series.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::{estimate_exponent, ExponentFamily};
use crate::factor::{build_factor, FactorApproximant, FactorMode};
use crate::literal::{AnyScalar, AnySeries};
use crate::pade::{build_pade, pade_amplitude, pade_orders, PadeApproximant};
use crate::roots::{build_corrected, build_corrected_root, build_iterated_root, CorrectedApproximant, CorrectedBase, IteratedRoot};
use crate::scalar::Scalar;
use crate::series::{series_pow, Prefactor, ReducedExpansion};
use crate::transform::{
    double_renorm_amplitude, power_transform_extrapolate, DoubleRenormOptions, ScanOptions, TransformFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Factor,
    Root,
    CorrectedRoot,
    CorrectedFactor,
    PowerFactor,
    PowerRoot,
    Double,
    Pade,
    ExponentFactor,
    ExponentRoot,
    ExponentCorrected,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Factor,
        Family::Root,
        Family::CorrectedRoot,
        Family::CorrectedFactor,
        Family::PowerFactor,
        Family::PowerRoot,
        Family::Double,
        Family::Pade,
        Family::ExponentFactor,
        Family::ExponentRoot,
        Family::ExponentCorrected,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Factor => "factor",
            Family::Root => "root",
            Family::CorrectedRoot => "corrected-root",
            Family::CorrectedFactor => "corrected-factor",
            Family::PowerFactor => "power-factor",
            Family::PowerRoot => "power-root",
            Family::Double => "double",
            Family::Pade => "pade",
            Family::ExponentFactor => "exponent-factor",
            Family::ExponentRoot => "exponent-root",
            Family::ExponentCorrected => "exponent-corrected",
        }
    }

    fn takes_p(self) -> bool {
        matches!(self, Family::CorrectedRoot | Family::CorrectedFactor | Family::ExponentCorrected)
    }

    fn modes(self) -> &'static [Mode] {
        match self {
            Family::Factor => &[Mode::Constrained, Mode::Free, Mode::ScaleFixed, Mode::Variational],
            Family::CorrectedFactor | Family::ExponentFactor => &[Mode::Constrained, Mode::ScaleFixed],
            _ => &[Mode::Default],
        }
    }

    pub fn is_exponent(self) -> bool {
        matches!(self, Family::ExponentFactor | Family::ExponentRoot | Family::ExponentCorrected)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method family `{s}`")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Default,
    Constrained,
    Free,
    ScaleFixed,
    Variational,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Default => "default",
            Mode::Constrained => "constrained",
            Mode::Free => "free",
            Mode::ScaleFixed => "scale-fixed",
            Mode::Variational => "variational",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Mode::Default, Mode::Constrained, Mode::Free, Mode::ScaleFixed, Mode::Variational]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown mode `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MethodSpec {
    pub family: Family,
    pub k: usize,
    pub p: Option<usize>,
    pub mode: Mode,
}

impl MethodSpec {
    pub fn new(family: Family, k: usize, p: Option<usize>, mode: Mode) -> Result<Self> {
        if k == 0 && !family.takes_p() {
            return Err(Error::InvalidArgument("order k must be at least 1".into()));
        }
        if family.takes_p() != p.is_some() {
            return Err(Error::InvalidArgument(format!(
                "family `{family}` {} a correction order p",
                if family.takes_p() { "needs" } else { "does not take" }
            )));
        }
        let mode = if mode == Mode::Default { family.modes()[0] } else { mode };
        if !family.modes().contains(&mode) {
            return Err(Error::InvalidArgument(format!("family `{family}` has no mode `{}`", mode.name())));
        }
        Ok(MethodSpec { family, k, p, mode })
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    /// Parses `factor:k4:constrained`, `corrected-root:k2p2`, ...; a missing mode is `default`.
    fn from_str(tag: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed method tag `{tag}`"));
        let parts: Vec<&str> = tag.split(':').collect();
        let (family, order, mode) = match parts[..] {
            [f, o] => (f, o, "default"),
            [f, o, m] => (f, o, m),
            _ => return Err(bad()),
        };
        let order = order.strip_prefix('k').ok_or_else(bad)?;
        let (k, p) = match order.split_once('p') {
            Some((k, p)) => (k, Some(p.parse::<usize>().map_err(|_| bad())?)),
            None => (order, None),
        };
        let k = k.parse::<usize>().map_err(|_| bad())?;
        MethodSpec::new(family.parse()?, k, p, mode.parse()?)
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:k{}", self.family, self.k)?;
        if let Some(p) = self.p {
            write!(f, "p{p}")?;
        }
        write!(f, ":{}", self.mode.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodOutcome {
    /// Amplitude (or exponent for exponent families); several for power transforms.
    pub values: Vec<f64>,
    /// Large-x exponent of the approximant, when it is an output rather than an input.
    pub exponent: Option<f64>,
    /// Free-form diagnostics, e.g. quadrature error.
    pub diagnostics: Option<String>,
}

impl MethodOutcome {
    fn single(v: f64) -> Self {
        MethodOutcome { values: vec![v], exponent: None, diagnostics: None }
    }
}

/// Runs `spec` on `series` with target exponent `beta` (ignored by free factor
/// mode and exponent families).
pub fn run_method(series: &AnySeries, beta: Option<&AnyScalar>, spec: &MethodSpec) -> Result<MethodOutcome> {
    let needs_beta = !(spec.family.is_exponent() || spec.mode == Mode::Free);
    if needs_beta && beta.is_none() {
        return Err(Error::InvalidArgument(format!("method `{spec}` needs a target exponent beta")));
    }
    match spec.family {
        Family::PowerFactor | Family::PowerRoot | Family::Double => {
            let f = series.to_f64();
            let beta = beta.map(AnyScalar::to_f64).unwrap_or_default();
            run_float_only(&f, beta, spec)
        }
        _ => match series {
            AnySeries::Exact(f) => run_generic(f, beta.map(AnyScalar::to_exact), spec),
            AnySeries::Float(f) => run_generic(f, beta.map(AnyScalar::to_f64), spec),
        },
    }
}

fn run_float_only(f: &ReducedExpansion<f64>, beta: f64, spec: &MethodSpec) -> Result<MethodOutcome> {
    let k = spec.k;
    let family = match spec.family {
        Family::PowerFactor => TransformFamily::Factor,
        Family::PowerRoot => TransformFamily::IteratedRoot,
        _ => {
            let r = double_renorm_amplitude(f, k, beta, &DoubleRenormOptions::default())?;
            return Ok(MethodOutcome {
                values: vec![r.amplitude_b_star],
                exponent: None,
                diagnostics: Some(format!("quad_error={:.3e} x_eval={:.0e}", r.quad_error, r.x_eval)),
            });
        }
    };
    let sols = power_transform_extrapolate(f, k, beta, family, &ScanOptions::default())?;
    if sols.is_empty() {
        return Err(Error::NoRealSolution("no stationary point of the transformed amplitude".into()));
    }
    let diag = sols.iter().map(|s| format!("m={:.4}:{:?}", s.m, s.stationary_kind)).collect::<Vec<_>>().join(" ");
    Ok(MethodOutcome {
        values: sols.iter().map(|s| s.amplitude.amplitude).collect(),
        exponent: None,
        diagnostics: Some(diag),
    })
}

fn run_generic<T: Scalar>(f: &ReducedExpansion<T>, beta: Option<T>, spec: &MethodSpec) -> Result<MethodOutcome> {
    let k = spec.k;
    let b = || beta.clone().expect("checked by run_method");
    let factor_mode = |beta: T| match spec.mode {
        Mode::ScaleFixed => FactorMode::ScaleFixed { a1: T::one(), beta: Some(beta) },
        Mode::Variational => FactorMode::Variational { beta: Some(beta) },
        _ => FactorMode::Constrained { beta },
    };
    let amp = match spec.family {
        Family::Factor => {
            let mode = if spec.mode == Mode::Free { FactorMode::Free } else { factor_mode(b()) };
            let fa = build_factor(f, k, &mode)?;
            let a = fa.amplitude()?;
            return Ok(MethodOutcome {
                values: vec![a.amplitude],
                exponent: (spec.mode == Mode::Free).then_some(a.beta),
                diagnostics: None,
            });
        }
        Family::Root => build_iterated_root(f, k, &b())?.amplitude()?,
        Family::CorrectedRoot => build_corrected_root(f, k, spec.p.unwrap_or(1), &b())?.amplitude()?,
        Family::CorrectedFactor => {
            let fa = build_factor(f, k, &factor_mode(b()))?;
            build_corrected(CorrectedBase::Factor(fa), &f.series, spec.p.unwrap_or(1))?.amplitude()?
        }
        Family::Pade => pade_amplitude(f, k, &b())?,
        Family::ExponentFactor => {
            let fam = if spec.mode == Mode::ScaleFixed { ExponentFamily::FactorScaleFixed } else { ExponentFamily::Factor };
            return Ok(MethodOutcome::single(estimate_exponent(f, k, fam)?));
        }
        Family::ExponentRoot => return Ok(MethodOutcome::single(estimate_exponent(f, k, ExponentFamily::IteratedRoot)?)),
        Family::ExponentCorrected => {
            let fam = ExponentFamily::CorrectedRoot { p: spec.p.unwrap_or(1) };
            return Ok(MethodOutcome::single(estimate_exponent(f, k, fam)?));
        }
        Family::PowerFactor | Family::PowerRoot | Family::Double => unreachable!("dispatched to run_float_only"),
    };
    Ok(MethodOutcome::single(amp.amplitude))
}

/// An approximant that can be evaluated pointwise, for curve output.
#[derive(Debug, Clone, PartialEq)]
pub enum Approximant {
    Factor(FactorApproximant),
    Root(IteratedRoot<f64>),
    Corrected(CorrectedApproximant<f64>),
    /// `f0(x) [P/Q](x)^gamma` on the `1/gamma` power of the reduced series.
    Pade { prefactor: Prefactor<f64>, pade: PadeApproximant<f64>, gamma: f64 },
}

impl Approximant {
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Approximant::Factor(a) => a.eval(x),
            Approximant::Root(a) => a.eval(x),
            Approximant::Corrected(a) => a.eval(x),
            Approximant::Pade { prefactor, pade, gamma } => {
                let v = pade.eval(&x);
                let g = if *gamma == 0.0 {
                    v
                } else if v > 0.0 || (gamma.fract() == 0.0 && v != 0.0) {
                    v.powf(*gamma)
                } else {
                    return Err(Error::DomainError { x, level: None });
                };
                Ok(prefactor.eval(x) * g)
            }
        }
    }
}

/// Builds the pointwise approximant for `spec`; power transforms and double
/// renormalization only produce amplitudes and are rejected.
pub fn build_approximant(f: &ReducedExpansion<f64>, beta: Option<f64>, spec: &MethodSpec) -> Result<Approximant> {
    let k = spec.k;
    let b = || beta.ok_or_else(|| Error::InvalidArgument(format!("method `{spec}` needs a target exponent beta")));
    let factor_mode = |beta: f64| match spec.mode {
        Mode::ScaleFixed => FactorMode::ScaleFixed { a1: 1.0, beta: Some(beta) },
        Mode::Variational => FactorMode::Variational { beta: Some(beta) },
        _ => FactorMode::Constrained { beta },
    };
    Ok(match spec.family {
        Family::Factor => {
            let mode = if spec.mode == Mode::Free { FactorMode::Free } else { factor_mode(b()?) };
            Approximant::Factor(build_factor(f, k, &mode)?)
        }
        Family::Root => Approximant::Root(build_iterated_root(f, k, &b()?)?),
        Family::CorrectedRoot => Approximant::Corrected(build_corrected_root(f, k, spec.p.unwrap_or(1), &b()?)?),
        Family::CorrectedFactor => {
            let fa = build_factor(f, k, &factor_mode(b()?))?;
            Approximant::Corrected(build_corrected(CorrectedBase::Factor(fa), &f.series, spec.p.unwrap_or(1))?)
        }
        Family::Pade => {
            f.require_order(k)?;
            let gamma = f.gamma(&b()?);
            let series = f.series.truncate(k);
            let (pade, gamma) = if gamma.is_negligible(1.0) {
                let (m, n) = pade_orders(k, true);
                (build_pade(&series, m, n)?, 0.0)
            } else {
                let (m, n) = pade_orders(k, false);
                (build_pade(&series_pow(&series, &(1.0 / gamma))?, m, n)?, gamma)
            };
            Approximant::Pade { prefactor: f.prefactor.clone(), pade, gamma }
        }
        other => {
            return Err(Error::InvalidArgument(format!("family `{other}` has no pointwise form")));
        }
    })
}
