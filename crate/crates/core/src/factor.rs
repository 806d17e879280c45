//! Self-similar factor approximants `f0(x) * prod (1 + A_i x)^{n_i}`.
//!
//! Parameters come from the log-derivative moments
//! `s_m = sum_i n_i (-A_i)^m = -[x d/dx ln fbar]_m`: nodes `-A_i` are roots of
//! the Prony polynomial from a Hankel system, weights `n_i` solve a
//! Vandermonde system.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{monic_roots, solve, solve_complex};
use crate::scalar::Scalar;
use crate::series::{series_exp, series_xdlog, AsymptoticForm, PowerSeries, Prefactor, ReducedExpansion};

const REAL_NODE_TOL: f64 = 1e-8;
const CONFLUENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum FactorMode<T> {
    /// Even order only: all `k` coefficients matched, exponent free.
    Free,
    /// `alpha + sum n_i = beta` imposed; `ceil(k/2)` factors.
    Constrained { beta: T },
    /// One node pinned at `A_1 = a1`; optional exponent constraint.
    ScaleFixed { a1: T, beta: Option<T> },
    /// `A_1` chosen where the amplitude is stationary in `A_1`.
    Variational { beta: Option<T> },
}

impl<T: Scalar> FactorMode<T> {
    fn to_f64(&self) -> FactorMode<f64> {
        match self {
            FactorMode::Free => FactorMode::Free,
            FactorMode::Constrained { beta } => FactorMode::Constrained { beta: beta.to_f64() },
            FactorMode::ScaleFixed { a1, beta } => {
                FactorMode::ScaleFixed { a1: a1.to_f64(), beta: beta.as_ref().map(Scalar::to_f64) }
            }
            FactorMode::Variational { beta } => {
                FactorMode::Variational { beta: beta.as_ref().map(Scalar::to_f64) }
            }
        }
    }

    fn beta(&self) -> Option<&T> {
        match self {
            FactorMode::Free => None,
            FactorMode::Constrained { beta } => Some(beta),
            FactorMode::ScaleFixed { beta, .. } | FactorMode::Variational { beta } => beta.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorApproximant {
    /// `(A_i, n_i)`; complex entries come in conjugate pairs.
    pub pairs: Vec<(Complex64, Complex64)>,
    pub prefactor: Prefactor<f64>,
    pub order_k: usize,
    /// Highest series order reproduced by construction.
    pub matched_order: usize,
    pub mode: FactorMode<f64>,
}

impl FactorApproximant {
    pub fn n_factors(&self) -> usize {
        self.pairs.len()
    }

    pub fn has_complex_pairs(&self) -> bool {
        self.pairs.iter().any(|(a, _)| a.im != 0.0)
    }

    /// Taylor coefficients of `prod (1 + A_i x)^{n_i}` through `order`.
    pub fn reexpand(&self, order: usize) -> PowerSeries<f64> {
        let mut log = vec![0.0; order + 1];
        for &(a, n) in &self.pairs {
            let mut p = Complex64::new(1.0, 0.0);
            for (m, slot) in log.iter_mut().enumerate().skip(1) {
                p *= -a;
                *slot -= (n * p / m as f64).re;
            }
        }
        series_exp(&PowerSeries::new(log)).expect("zero constant term")
    }

    /// `f0(x) * prod (1 + A_i x)^{n_i}` for `x >= 0`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.prefactor.eval(x) * self.eval_reduced(x)?)
    }

    pub fn eval_reduced(&self, x: f64) -> Result<f64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(a, n) in &self.pairs {
            let base = Complex64::new(1.0, 0.0) + a * x;
            if a.im == 0.0 && base.re <= 0.0 {
                let integer = n.im == 0.0 && n.re.fract() == 0.0;
                if !integer || base.re == 0.0 {
                    return Err(Error::DomainError { x: -1.0 / a.re, level: None });
                }
            }
            acc += n * base.ln();
        }
        Ok(acc.exp().re)
    }

    /// Large-x form `A prod A_i^{n_i} x^{alpha + sum n_i}`.
    pub fn amplitude(&self) -> Result<AsymptoticForm> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut beta = self.prefactor.alpha;
        let scale = self.pairs.iter().map(|(a, _)| a.norm()).fold(0.0, f64::max);
        for &(a, n) in &self.pairs {
            // A node at rounding level is a constant factor: no large-x power.
            if a.norm() <= 1e-10 * scale {
                return Err(Error::DegenerateMoments);
            }
            if a.im == 0.0 && a.re <= 0.0 {
                return Err(Error::NegativeBase(a.re));
            }
            acc += n * a.ln();
            beta += n.re;
        }
        let amplitude = self.prefactor.amplitude * acc.exp().re;
        if !amplitude.is_finite() {
            return Err(Error::DegenerateMoments);
        }
        Ok(AsymptoticForm { amplitude, beta })
    }

    /// Real singular points `-1/A_i` on the positive axis (diagnostics only).
    pub fn singularities(&self) -> Vec<f64> {
        self.pairs.iter().filter(|(a, _)| a.im == 0.0 && a.re < 0.0).map(|(a, _)| -1.0 / a.re).collect()
    }
}

/// Builds the order-`k` factor approximant of `f` in the given mode.
pub fn build_factor<T: Scalar>(f: &ReducedExpansion<T>, k: usize, mode: &FactorMode<T>) -> Result<FactorApproximant> {
    if k == 0 {
        return Err(Error::InvalidArgument("factor order must be at least 1".into()));
    }
    f.require_order(k)?;
    if let FactorMode::Variational { beta } = mode {
        return build_variational(f, k, beta.as_ref());
    }
    let t = series_xdlog(&f.series.truncate(k))?;
    let s: Vec<T> = t.coeffs().iter().map(|c| -c.clone()).collect();
    let gamma = mode.beta().map(|b| f.gamma(b));
    let (samples, off) = match &gamma {
        Some(g) => {
            let mut u = vec![g.clone()];
            u.extend(s[1..].iter().cloned());
            (u, 0)
        }
        None => (s[1..].to_vec(), 1),
    };
    let c = samples.len();
    let (n, fixed) = match mode {
        FactorMode::Free => {
            if k % 2 == 1 {
                return Err(Error::InvalidArgument(
                    "free mode needs an even order; use scale-fixed or variational for odd orders".into(),
                ));
            }
            (k / 2, None)
        }
        FactorMode::Constrained { .. } => (k.div_ceil(2), None),
        FactorMode::ScaleFixed { a1, .. } => {
            if c % 2 == 0 {
                return Err(Error::InvalidArgument(format!(
                    "scale-fixed mode needs an odd number of conditions, got {c}"
                )));
            }
            (c.div_ceil(2), Some(-a1.clone()))
        }
        FactorMode::Variational { .. } => unreachable!(),
    };
    let (nodes, used) = solve_nodes(&samples, n, fixed.as_ref())?;
    reject_confluent(&nodes)?;
    let weights = solve_weights(&samples, &nodes, off)?;
    let pairs = classify(&nodes, &weights)?;
    let mut fa = FactorApproximant {
        pairs,
        prefactor: f.prefactor.to_f64(),
        order_k: k,
        matched_order: used - 1 + off,
        mode: mode.to_f64(),
    };
    // After a rank reduction the smaller product may still fit every requested order.
    let nominal = (2 * n - usize::from(fixed.is_some())).min(c) - 1 + off;
    if fa.matched_order < nominal {
        let target = f.series.truncate(nominal).to_f64();
        let re = fa.reexpand(nominal);
        let fits = re.coeffs().iter().zip(target.coeffs()).take_while(|(a, b)| (*a - *b).abs() <= 1e-10 * (1.0 + b.abs()));
        fa.matched_order = fa.matched_order.max(fits.count().saturating_sub(1));
    }
    check_reproduction(&fa, &f.series.to_f64())?;
    Ok(fa)
}

/// Ill-conditioned Vandermonde solves (typically a far-out spurious node with a
/// tiny weight) can leave a product that no longer reproduces its own input.
fn check_reproduction(fa: &FactorApproximant, target: &PowerSeries<f64>) -> Result<()> {
    let m = fa.matched_order;
    let mut log = vec![0.0; m + 1];
    for (a, n) in &fa.pairs {
        for (j, slot) in log.iter_mut().enumerate().skip(1) {
            *slot += n.norm() * a.norm().powi(j as i32) / j as f64;
        }
    }
    let scale = series_exp(&PowerSeries::new(log))?;
    let re = fa.reexpand(m);
    for j in 0..=m {
        let (got, want) = (re.coeffs()[j], target.coeffs()[j]);
        let err = (got - want).abs() / (1.0 + want.abs() + scale.coeffs()[j]);
        if !(err <= 1e-9) {
            return Err(Error::PrecisionLoss(format!(
                "factor approximant reproduces c_{j} = {want} as {got}"
            )));
        }
    }
    Ok(())
}

/// Prony step: returns the nodes `z_i = -A_i` and the number of samples consumed.
/// A singular Hankel matrix lowers the factor count by one.
fn solve_nodes<T: Scalar>(u: &[T], mut n: usize, fixed: Option<&T>) -> Result<(Vec<Complex64>, usize)> {
    loop {
        if n == 0 {
            return Err(Error::DegenerateMoments);
        }
        let result = match fixed {
            None => prony(&u[..2 * n], n).map(|roots| (roots, 2 * n)),
            Some(z1) => {
                let reduced: Vec<T> =
                    (0..2 * n - 2).map(|j| u[j + 1].clone() - z1.clone() * u[j].clone()).collect();
                prony(&reduced, n - 1).map(|mut roots| {
                    roots.insert(0, Complex64::new(z1.to_f64(), 0.0));
                    (roots, 2 * n - 1)
                })
            }
        };
        match result {
            Some(r) => return Ok(r),
            None => {
                log::warn!("rank-deficient moment system; reducing factor count from {n} to {}", n - 1);
                if fixed.is_some() && n == 1 {
                    return Err(Error::DegenerateMoments);
                }
                n -= 1;
            }
        }
    }
}

/// Repeated nodes make the Vandermonde system singular: the weights diverge
/// and the product form cannot represent the series.
fn reject_confluent(nodes: &[Complex64]) -> Result<()> {
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            if (a - b).norm() <= CONFLUENT_TOL * a.norm().max(b.norm()) {
                log::debug!("confluent Prony nodes {a} and {b}");
                return Err(Error::DegenerateMoments);
            }
        }
    }
    Ok(())
}

/// Roots of the Prony polynomial for samples `u_j = sum w_i z_i^j`.
fn prony<T: Scalar>(u: &[T], n: usize) -> Option<Vec<Complex64>> {
    if n == 0 {
        return Some(Vec::new());
    }
    let h: Vec<Vec<T>> = (0..n).map(|i| (0..n).map(|j| u[i + j].clone()).collect()).collect();
    let rhs: Vec<T> = (0..n).map(|i| -u[i + n].clone()).collect();
    let c = solve(h, rhs)?;
    let c: Vec<f64> = c.iter().map(Scalar::to_f64).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    Some(monic_roots(&c))
}

fn solve_weights<T: Scalar>(u: &[T], nodes: &[Complex64], off: usize) -> Result<Vec<Complex64>> {
    let n = nodes.len();
    let v: Vec<Vec<Complex64>> =
        (0..n).map(|i| nodes.iter().map(|z| z.powu((i + off) as u32)).collect()).collect();
    let rhs: Vec<Complex64> = (0..n).map(|i| Complex64::new(u[i].to_f64(), 0.0)).collect();
    solve_complex(v, rhs).ok_or(Error::DegenerateMoments)
}

fn classify(nodes: &[Complex64], weights: &[Complex64]) -> Result<Vec<(Complex64, Complex64)>> {
    let mut pairs = Vec::with_capacity(nodes.len());
    let mut used = vec![false; nodes.len()];
    for i in 0..nodes.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let a = -nodes[i];
        let n = weights[i];
        if !a.is_finite() || !n.is_finite() {
            return Err(Error::DegenerateMoments);
        }
        if a.im.abs() <= REAL_NODE_TOL * a.norm() {
            if n.im.abs() > REAL_NODE_TOL * n.norm().max(1.0) {
                return Err(Error::ComplexBranch(format!("real node A = {} with complex power {n}", a.re)));
            }
            let n = n.re;
            if a.re < 0.0 && n.fract() != 0.0 {
                return Err(Error::ComplexBranch(format!(
                    "base 1 + ({})x turns negative at x = {} under power {n}",
                    a.re,
                    -1.0 / a.re
                )));
            }
            pairs.push((Complex64::new(a.re, 0.0), Complex64::new(n, 0.0)));
            continue;
        }
        let partner = (i + 1..nodes.len())
            .filter(|&j| !used[j])
            .min_by(|&p, &q| (nodes[p] - nodes[i].conj()).norm().total_cmp(&(nodes[q] - nodes[i].conj()).norm()));
        let j = match partner {
            Some(j) if (nodes[j] - nodes[i].conj()).norm() <= 1e-6 * nodes[i].norm() => j,
            _ => return Err(Error::ComplexBranch(format!("unpaired complex node A = {a}"))),
        };
        used[j] = true;
        // Symmetrize so the product is exactly real.
        let w = (n + weights[j].conj()) * 0.5;
        let a = Complex64::new(a.re, 0.5 * (a.im - (-nodes[j]).im));
        pairs.push((a, w));
        pairs.push((a.conj(), w.conj()));
    }
    Ok(pairs)
}

fn build_variational<T: Scalar>(f: &ReducedExpansion<T>, k: usize, beta: Option<&T>) -> Result<FactorApproximant> {
    let amp = |ln_a1: f64| -> Option<f64> {
        let mode = FactorMode::ScaleFixed { a1: T::from_f64(ln_a1.exp()), beta: beta.cloned() };
        build_factor(f, k, &mode).ok()?.amplitude().ok().map(|a| a.amplitude)
    };
    let h = 1e-4;
    let deriv = |l: f64| -> Option<f64> { Some((amp(l + h)? - amp(l - h)?) / (2.0 * h)) };
    let grid: Vec<f64> = (0..=240).map(|i| (-6.0 + 12.0 * i as f64 / 240.0) * std::f64::consts::LN_10 / 2.0).collect();
    let d: Vec<Option<f64>> = grid.iter().map(|&l| deriv(l)).collect();
    for w in 0..grid.len() - 1 {
        let (Some(d0), Some(d1)) = (d[w], d[w + 1]) else { continue };
        if d0 == 0.0 || d0.signum() != d1.signum() {
            let (mut lo, mut hi, mut dlo) = (grid[w], grid[w + 1], d0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let Some(dm) = deriv(mid) else { break };
                if dm.signum() == dlo.signum() {
                    lo = mid;
                    dlo = dm;
                } else {
                    hi = mid;
                }
            }
            let a1 = (0.5 * (lo + hi)).exp();
            let mut fa = build_factor(f, k, &FactorMode::ScaleFixed { a1: T::from_f64(a1), beta: beta.cloned() })?;
            fa.mode = FactorMode::Variational { beta: beta.map(Scalar::to_f64) };
            return Ok(fa);
        }
    }
    Err(Error::NoRealSolution("amplitude has no stationary point in A1 over [1e-3, 1e3]".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn red(c: &[f64]) -> ReducedExpansion<f64> {
        ReducedExpansion::new(Prefactor::unit(), PowerSeries::new(c.to_vec())).unwrap()
    }

    #[test]
    fn sqrt_one_plus_x_free() {
        let fa = build_factor(&red(&[1.0, 0.5, -0.125]), 2, &FactorMode::Free).unwrap();
        assert_eq!(fa.pairs.len(), 1);
        assert!((fa.pairs[0].0.re - 1.0).abs() < 1e-12);
        assert!((fa.pairs[0].1.re - 0.5).abs() < 1e-12);
        let b = fa.amplitude().unwrap();
        assert!((b.amplitude - 1.0).abs() < 1e-12 && (b.beta - 0.5).abs() < 1e-12);
    }

    #[test]
    fn trivial_amplitude_and_eval() {
        let fa = FactorApproximant {
            pairs: vec![(Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0))],
            prefactor: Prefactor::unit(),
            order_k: 2,
            matched_order: 2,
            mode: FactorMode::Free,
        };
        assert!((fa.eval(1.0).unwrap() - 4.0).abs() < 1e-14);
        assert!((fa.eval(0.0).unwrap() - 1.0).abs() < 1e-14);
        let half = FactorApproximant {
            pairs: vec![(Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0))],
            ..fa.clone()
        };
        let b = half.amplitude().unwrap();
        assert_eq!((b.amplitude, b.beta), (1.0, 0.5));
    }

    #[test]
    fn negative_base_and_domain() {
        let fa = FactorApproximant {
            pairs: vec![(Complex64::new(-0.5, 0.0), Complex64::new(-1.0, 0.0))],
            prefactor: Prefactor::unit(),
            order_k: 2,
            matched_order: 2,
            mode: FactorMode::Free,
        };
        assert_eq!(fa.amplitude(), Err(Error::NegativeBase(-0.5)));
        assert!(matches!(fa.eval(2.0), Err(Error::DomainError { .. })));
        assert!((fa.eval(1.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn odd_free_is_rejected() {
        assert!(matches!(
            build_factor(&red(&[1.0, 1.0, 1.0, 1.0]), 3, &FactorMode::Free),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn scale_fixed_odd_matches_three_orders() {
        let f = red(&[1.0, 0.7, -0.2, 0.1]);
        let fa = build_factor(&f, 3, &FactorMode::ScaleFixed { a1: 1.0, beta: None }).unwrap();
        assert_eq!(fa.matched_order, 3);
        let re = fa.reexpand(3);
        for n in 0..=3 {
            assert!((re.coeffs()[n] - f.series.coeffs()[n]).abs() < 1e-10);
        }
        assert!(fa.pairs.iter().any(|(a, _)| (a.re - 1.0).abs() < 1e-14));
    }
}
