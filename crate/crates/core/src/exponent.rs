//! Critical-exponent estimation from the log-derivative series
//! `beta_k(x) = x d/dx ln f_k(x) = sum b_n x^n`, whose large-x limit is finite.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{build_factor, FactorMode};
use crate::roots::{build_corrected_root, build_iterated_root};
use crate::scalar::Scalar;
use crate::series::{series_xdlog, PowerSeries, Prefactor, ReducedExpansion};

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSeries<T> {
    pub b: Vec<T>,
    pub source_order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentFamily {
    /// Factor approximant with `sum n_i` fixed so the limit is finite.
    Factor,
    /// Factor approximant with one node pinned at `A_1 = 1`.
    FactorScaleFixed,
    IteratedRoot,
    CorrectedRoot { p: usize },
}

/// `b_0 = alpha`, `b_n = n [ln fbar]_n`.
pub fn exponent_series<T: Scalar>(f: &ReducedExpansion<T>, k: usize) -> Result<ExponentSeries<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("exponent series order must be at least 1".into()));
    }
    f.require_order(k)?;
    let t = series_xdlog(&f.series.truncate(k))?;
    let mut b = t.into_coeffs();
    b[0] = f.prefactor.alpha.clone();
    Ok(ExponentSeries { b, source_order: k })
}

/// Series orders of `f` consumed by [`estimate_exponent`] at family order `k`.
pub fn required_order(k: usize, family: ExponentFamily, dressed: bool) -> usize {
    let extra = match family {
        ExponentFamily::CorrectedRoot { p } => p,
        _ => 0,
    };
    k + extra + usize::from(dressed)
}

/// Finite large-x limit of a self-similar approximant built on the b-series.
///
/// With `b_0 != 0` the series `b_0 (1 + sum (b_n/b_0) x^n)` is extrapolated to a
/// finite limit directly (iterated roots are undefined there; corrected roots
/// use the prefactor as their zero-order base). With `b_0 = 0` the series is
/// dressed as `b_1 x (1 + sum (b_{n+1}/b_1) x^n)` with target exponent `-1` for
/// the dressed part, so `k` counts orders of the dressed series.
pub fn estimate_exponent<T: Scalar>(f: &ReducedExpansion<T>, k: usize, family: ExponentFamily) -> Result<f64> {
    let alpha_zero = f.prefactor.alpha.is_zero();
    let n = required_order(k, family, alpha_zero);
    let es = exponent_series(f, n)?;
    let b = &es.b;
    if b[1..].iter().all(|c| c.is_zero()) {
        return Ok(b[0].to_f64());
    }
    let (lead, alpha, tail): (T, T, &[T]) = if alpha_zero {
        if b[1].is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        (b[1].clone(), T::one(), &b[1..])
    } else {
        (b[0].clone(), T::zero(), &b[..])
    };
    let coeffs: Vec<T> = tail.iter().map(|c| c.clone() / lead.clone()).collect();
    let g = ReducedExpansion::new(Prefactor::new(lead, alpha)?, PowerSeries::new(coeffs))?;
    let zero = T::zero();
    let amp = match family {
        ExponentFamily::Factor => build_factor(&g, k, &FactorMode::Constrained { beta: zero })?.amplitude()?,
        ExponentFamily::FactorScaleFixed => {
            build_factor(&g, k, &FactorMode::ScaleFixed { a1: T::one(), beta: Some(zero) })?.amplitude()?
        }
        ExponentFamily::IteratedRoot => build_iterated_root(&g, k, &zero)?.amplitude()?,
        ExponentFamily::CorrectedRoot { p } => build_corrected_root(&g, k, p, &zero)?.amplitude()?,
    };
    Ok(amp.amplitude)
}
