//! Truncated power series and the reduced-expansion normal form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarKind {
    ExactRational,
    Float,
}

/// Coefficients `c_0..c_k` of a series truncated at order `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> PowerSeries<T> {
    /// An empty coefficient list is treated as the zero series of order 0.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![T::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&T> {
        self.coeffs.get(n)
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        if T::EXACT {
            ScalarKind::ExactRational
        } else {
            ScalarKind::Float
        }
    }

    /// Keeps orders `0..=k` (or everything if the series is shorter).
    pub fn truncate(&self, k: usize) -> Self {
        let n = (k + 1).min(self.coeffs.len());
        PowerSeries { coeffs: self.coeffs[..n].to_vec() }
    }

    /// Pads with zeros up to order `k`. Only for series known to be exact
    /// polynomials; never used to invent coefficients of an expansion.
    pub fn pad_to(&self, k: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(coeffs.len().max(k + 1), T::zero());
        PowerSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        PowerSeries {
            coeffs: (0..n).map(|i| self.coeffs[i].clone() + other.coeffs[i].clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        PowerSeries {
            coeffs: (0..n).map(|i| self.coeffs[i].clone() - other.coeffs[i].clone()).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Cauchy product truncated to the shorter order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len().min(other.coeffs.len());
        let coeffs = (0..n)
            .map(|j| {
                (0..=j).fold(T::zero(), |acc, i| {
                    acc + self.coeffs[i].clone() * other.coeffs[j - i].clone()
                })
            })
            .collect();
        PowerSeries { coeffs }
    }

    /// Adds `c` to the coefficient of `x^n` if it is within the order.
    pub fn add_monomial(&self, n: usize, c: &T) -> Self {
        let mut out = self.clone();
        if let Some(slot) = out.coeffs.get_mut(n) {
            *slot = slot.clone() + c.clone();
        }
        out
    }

    /// Horner evaluation of the partial sum.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Substitutes `x -> lambda x`.
    pub fn rescale(&self, lambda: &T) -> Self {
        let mut p = T::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.clone() * p.clone());
            p = p * lambda.clone();
        }
        PowerSeries { coeffs }
    }

    pub fn to_f64(&self) -> PowerSeries<f64> {
        PowerSeries { coeffs: self.coeffs.iter().map(Scalar::to_f64).collect() }
    }

    fn require_unit(&self) -> Result<()> {
        if self.coeffs[0] == T::one() {
            Ok(())
        } else {
            Err(Error::NonUnitConstant)
        }
    }
}

/// Leading factor `f0(x) ~ A x^alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct Prefactor<T> {
    pub amplitude: T,
    pub alpha: T,
}

impl<T: Scalar> Prefactor<T> {
    pub fn new(amplitude: T, alpha: T) -> Result<Self> {
        if amplitude.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(Prefactor { amplitude, alpha })
    }

    pub fn unit() -> Self {
        Prefactor { amplitude: T::one(), alpha: T::zero() }
    }

    pub fn to_f64(&self) -> Prefactor<f64> {
        Prefactor { amplitude: self.amplitude.to_f64(), alpha: self.alpha.to_f64() }
    }

    /// `A x^alpha` at `x > 0`.
    pub fn eval(&self, x: f64) -> f64 {
        self.amplitude.to_f64() * x.powf(self.alpha.to_f64())
    }
}

/// `f_k(x) = f0(x) (1 + a_1 x + ... + a_k x^k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedExpansion<T> {
    pub prefactor: Prefactor<T>,
    pub series: PowerSeries<T>,
}

impl<T: Scalar> ReducedExpansion<T> {
    pub fn new(prefactor: Prefactor<T>, series: PowerSeries<T>) -> Result<Self> {
        series.require_unit()?;
        Ok(ReducedExpansion { prefactor, series })
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn gamma(&self, beta: &T) -> T {
        beta.clone() - self.prefactor.alpha.clone()
    }

    pub fn truncate(&self, k: usize) -> Self {
        ReducedExpansion { prefactor: self.prefactor.clone(), series: self.series.truncate(k) }
    }

    pub fn require_order(&self, k: usize) -> Result<()> {
        if self.order() < k {
            Err(Error::InsufficientOrder { need: k, have: self.order() })
        } else {
            Ok(())
        }
    }

    pub fn to_f64(&self) -> ReducedExpansion<f64> {
        ReducedExpansion { prefactor: self.prefactor.to_f64(), series: self.series.to_f64() }
    }

    /// Partial sum `f0(x) * fbar_k(x)` at `x > 0`.
    pub fn eval(&self, x: f64) -> f64 {
        self.prefactor.eval(x) * self.series.to_f64().eval(&x)
    }
}

/// Large-variable form `B x^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticForm {
    pub amplitude: f64,
    pub beta: f64,
}

/// Splits `raw` (whose first entry multiplies `x^leading_power`) into prefactor
/// and unit-constant series.
pub fn normalize<T: Scalar>(raw: &PowerSeries<T>, leading_power: i64) -> Result<ReducedExpansion<T>> {
    let lead = raw.coeffs[0].clone();
    if lead.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let coeffs = raw.coeffs.iter().map(|c| c.clone() / lead.clone()).collect();
    Ok(ReducedExpansion {
        prefactor: Prefactor { amplitude: lead, alpha: T::from_int(leading_power) },
        series: PowerSeries { coeffs },
    })
}

/// `ln s` for a unit-constant series.
pub fn series_log<T: Scalar>(s: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    s.require_unit()?;
    let a = &s.coeffs;
    let mut l = vec![T::zero(); a.len()];
    for k in 1..a.len() {
        let mut acc = T::zero();
        for j in 1..k {
            acc = acc + T::from_int(j as i64) * l[j].clone() * a[k - j].clone();
        }
        l[k] = a[k].clone() - acc / T::from_int(k as i64);
    }
    Ok(PowerSeries { coeffs: l })
}

/// `exp l` for a series with zero constant term.
pub fn series_exp<T: Scalar>(l: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    if !l.coeffs[0].is_zero() {
        return Err(Error::InvalidArgument("series_exp needs a zero constant term".into()));
    }
    let mut s = vec![T::zero(); l.coeffs.len()];
    s[0] = T::one();
    for k in 1..s.len() {
        let mut acc = T::zero();
        for j in 1..=k {
            acc = acc + T::from_int(j as i64) * l.coeffs[j].clone() * s[k - j].clone();
        }
        s[k] = acc / T::from_int(k as i64);
    }
    Ok(PowerSeries { coeffs: s })
}

/// `s^m` by the J.C.P. Miller recurrence; exact for rational `m`.
pub fn series_pow<T: Scalar>(s: &PowerSeries<T>, m: &T) -> Result<PowerSeries<T>> {
    s.require_unit()?;
    let a = &s.coeffs;
    let mut c = vec![T::zero(); a.len()];
    c[0] = T::one();
    for n in 1..a.len() {
        let mut acc = T::zero();
        for j in 1..=n {
            if a[j].is_zero() {
                continue;
            }
            let w = (m.clone() + T::one()) * T::from_int(j as i64) - T::from_int(n as i64);
            acc = acc + w * a[j].clone() * c[n - j].clone();
        }
        c[n] = acc / T::from_int(n as i64);
    }
    Ok(PowerSeries { coeffs: c })
}

/// `x d/dx ln s`.
pub fn series_xdlog<T: Scalar>(s: &PowerSeries<T>) -> Result<PowerSeries<T>> {
    let l = series_log(s)?;
    Ok(PowerSeries {
        coeffs: l.coeffs.into_iter().enumerate().map(|(n, c)| T::from_int(n as i64) * c).collect(),
    })
}

/// Substitutes `t = x^p`: the coefficient of `t^n` moves to `x^{p n}`.
pub fn change_variable_power<T: Scalar>(s: &PowerSeries<T>, p: usize) -> PowerSeries<T> {
    assert!(p >= 1, "change_variable_power needs p >= 1");
    let mut coeffs = vec![T::zero(); s.order() * p + 1];
    for (n, c) in s.coeffs.iter().enumerate() {
        coeffs[n * p] = c.clone();
    }
    PowerSeries { coeffs }
}

/// Inverse of [`change_variable_power`] for a series supported on multiples of `p`.
pub fn collapse_variable_power<T: Scalar>(s: &PowerSeries<T>, p: usize) -> Result<PowerSeries<T>> {
    assert!(p >= 1, "collapse_variable_power needs p >= 1");
    if s.coeffs.iter().enumerate().any(|(n, c)| n % p != 0 && !c.is_zero()) {
        return Err(Error::InvalidArgument(format!("series has powers off the multiples of {p}")));
    }
    Ok(PowerSeries { coeffs: s.coeffs.iter().step_by(p).cloned().collect() })
}
