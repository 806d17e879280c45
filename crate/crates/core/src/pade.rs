//! One-point Padé approximants and the amplitude baseline built on them.

use crate::error::{Error, Result};
use crate::linalg::solve;
use crate::scalar::Scalar;
use crate::series::{series_pow, AsymptoticForm, PowerSeries, ReducedExpansion};

/// `P(x)/Q(x)` with `deg P = m`, `deg Q = n`, `Q(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant<T> {
    pub numerator: Vec<T>,
    pub denominator: Vec<T>,
    pub m: usize,
    pub n: usize,
}

impl<T: Scalar> PadeApproximant<T> {
    pub fn eval(&self, x: &T) -> T {
        let horner = |c: &[T]| c.iter().rev().fold(T::zero(), |acc, a| acc * x.clone() + a.clone());
        horner(&self.numerator) / horner(&self.denominator)
    }

    /// Taylor coefficients of `P/Q` through `order`.
    pub fn reexpand(&self, order: usize) -> PowerSeries<T> {
        let q = PowerSeries::new(self.denominator.clone()).pad_to(order).truncate(order);
        let inv = series_pow(&q, &-T::one()).expect("Q(0) = 1");
        PowerSeries::new(self.numerator.clone()).pad_to(order).truncate(order).mul(&inv)
    }
}

/// Standard linear-system construction matching `s` through order `m + n`.
pub fn build_pade<T: Scalar>(s: &PowerSeries<T>, m: usize, n: usize) -> Result<PadeApproximant<T>> {
    if s.order() < m + n {
        return Err(Error::InsufficientOrder { need: m + n, have: s.order() });
    }
    let c = |i: isize| -> T { if i < 0 { T::zero() } else { s.coeffs()[i as usize].clone() } };
    let mut denominator = vec![T::one()];
    if n > 0 {
        let a: Vec<Vec<T>> = (0..n)
            .map(|r| (1..=n).map(|j| c((m + 1 + r) as isize - j as isize)).collect())
            .collect();
        let b: Vec<T> = (0..n).map(|r| -c((m + 1 + r) as isize)).collect();
        denominator.extend(solve(a, b).ok_or(Error::SingularPadeSystem)?);
    }
    let numerator = (0..=m)
        .map(|i| (0..=i.min(n)).fold(T::zero(), |acc, j| acc + denominator[j].clone() * c((i - j) as isize)))
        .collect();
    Ok(PadeApproximant { numerator, denominator, m, n })
}

/// Orders `(M, N)` used by [`pade_amplitude`] at series order `k`.
pub fn pade_orders(k: usize, finite_limit: bool) -> (usize, usize) {
    if finite_limit {
        (k / 2, k / 2)
    } else {
        let n = (k.max(1) - 1) / 2;
        (n + 1, n)
    }
}

/// `q_N`, which sets the large-x behaviour; a value at rounding level means the
/// true degree is lower and the limit is undefined.
fn leading_denominator<T: Scalar>(p: &PadeApproximant<T>) -> Result<f64> {
    let scale = p.denominator.iter().map(|q| q.to_f64().abs()).fold(0.0, f64::max);
    let qn = &p.denominator[p.n];
    if qn.is_negligible(scale) {
        return Err(Error::SingularPadeSystem);
    }
    Ok(qn.to_f64())
}

/// Padé baseline for the large-x amplitude.
///
/// For `gamma != 0` the reduced series is raised to `1/gamma` so its limit grows
/// like `x`, then `P_{N+1/N}` with `2N + 1 <= k` gives the slope `r = p_M/q_N`
/// and the amplitude `A r^gamma`. For `gamma = 0` the diagonal `P_{N/N}` value
/// at infinity is used directly.
pub fn pade_amplitude<T: Scalar>(f: &ReducedExpansion<T>, k: usize, beta: &T) -> Result<AsymptoticForm> {
    f.require_order(k)?;
    let gamma = f.gamma(beta);
    let pre = f.prefactor.to_f64();
    let series = f.series.truncate(k);
    if gamma.is_negligible(1.0) {
        let (m, n) = pade_orders(k, true);
        let p = build_pade(&series, m, n)?;
        let qn = leading_denominator(&p)?;
        return Ok(AsymptoticForm { amplitude: pre.amplitude * p.numerator[m].to_f64() / qn, beta: pre.alpha });
    }
    let s = series_pow(&series, &(T::one() / gamma.clone()))?;
    let (m, n) = pade_orders(k, false);
    let p = build_pade(&s, m, n)?;
    let qn = leading_denominator(&p)?;
    let pscale = p.numerator.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
    if p.numerator[m].is_negligible(pscale) {
        return Err(Error::NegativeRatio(0.0));
    }
    let r = p.numerator[m].to_f64() / qn;
    let g = gamma.to_f64();
    let amp = if r > 0.0 {
        r.powf(g)
    } else if g.fract() == 0.0 && r != 0.0 {
        r.powi(g as i32)
    } else {
        return Err(Error::NegativeRatio(r));
    };
    Ok(AsymptoticForm { amplitude: pre.amplitude * amp, beta: pre.alpha + g })
}
