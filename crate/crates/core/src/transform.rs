//! Power-transformed approximants with a scan over the transform exponent `m`,
//! and doubly renormalized iterated roots via the evolution integral.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{build_factor, FactorMode};
use crate::quad::{bisect, integrate};
use crate::roots::build_iterated_root;
use crate::series::{series_pow, AsymptoticForm, Prefactor, ReducedExpansion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformFamily {
    Factor,
    IteratedRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StationaryKind {
    LocalMin,
    LocalMax,
    SaddleFlat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerTransformSolution {
    pub m: f64,
    pub amplitude: AsymptoticForm,
    pub family: TransformFamily,
    pub stationary_kind: StationaryKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub m_min: f64,
    pub m_max: f64,
    /// Excluded half-width around `m = 0`.
    pub eps: f64,
    pub points: usize,
    /// Central-difference step for `dB/dm`.
    pub h: f64,
    /// Relative spread below which the amplitude profile counts as flat.
    pub flat_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { m_min: -5.0, m_max: 5.0, eps: 0.05, points: 400, h: 1e-4, flat_tol: 1e-9 }
    }
}

/// Amplitude of the family built on `fbar^m` with target exponent `m gamma`,
/// mapped back through the `1/m` power.
pub fn transformed_amplitude(
    f: &ReducedExpansion<f64>,
    k: usize,
    beta: f64,
    family: TransformFamily,
    m: f64,
) -> Result<f64> {
    if m == 0.0 {
        return Err(Error::InvalidArgument("transform exponent m must be nonzero".into()));
    }
    let gamma = beta - f.prefactor.alpha;
    let p = ReducedExpansion::new(Prefactor::unit(), series_pow(&f.series.truncate(k), &m)?)?;
    let bp = match family {
        TransformFamily::Factor => {
            build_factor(&p, k, &FactorMode::Constrained { beta: m * gamma })?.amplitude()?.amplitude
        }
        TransformFamily::IteratedRoot => build_iterated_root(&p, k, &(m * gamma))?.amplitude()?.amplitude,
    };
    if bp <= 0.0 {
        return Err(Error::NegativeBase(bp));
    }
    Ok(f.prefactor.amplitude * bp.powf(1.0 / m))
}

/// All stationary points of the transformed amplitude over the scanned `m` range.
/// A profile that is flat to `flat_tol` yields one `SaddleFlat` solution at `m = 1`.
pub fn power_transform_extrapolate(
    f: &ReducedExpansion<f64>,
    k: usize,
    beta: f64,
    family: TransformFamily,
    opts: &ScanOptions,
) -> Result<Vec<PowerTransformSolution>> {
    if k < 2 {
        return Err(Error::InvalidArgument("power transforms need order k >= 2".into()));
    }
    f.require_order(k)?;
    let amp = |m: f64| transformed_amplitude(f, k, beta, family, m).ok();
    let deriv = |m: f64| -> Option<f64> { Some((amp(m + opts.h)? - amp(m - opts.h)?) / (2.0 * opts.h)) };
    let half = opts.points / 2;
    let side = |lo: f64, hi: f64| -> Vec<f64> {
        (0..half).map(|i| lo + (hi - lo) * i as f64 / (half - 1).max(1) as f64).collect()
    };
    let sides = [side(opts.m_min, -opts.eps), side(opts.eps, opts.m_max)];
    let solution = |m: f64, kind| -> Option<PowerTransformSolution> {
        Some(PowerTransformSolution {
            m,
            amplitude: AsymptoticForm { amplitude: amp(m)?, beta },
            family,
            stationary_kind: kind,
        })
    };

    let values: Vec<f64> = sides.iter().flatten().filter_map(|&m| amp(m)).collect();
    if values.is_empty() {
        log::debug!("power transform: no m in range gives a real approximant");
        return Ok(Vec::new());
    }
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    if hi - lo <= opts.flat_tol * hi.abs().max(lo.abs()) {
        let m = if amp(1.0).is_some() { 1.0 } else { sides.iter().flatten().copied().find(|&m| amp(m).is_some()).unwrap() };
        return Ok(solution(m, StationaryKind::SaddleFlat).into_iter().collect());
    }

    let mut out = Vec::new();
    for grid in &sides {
        let d: Vec<Option<f64>> = grid.iter().map(|&m| deriv(m)).collect();
        for w in 0..grid.len().saturating_sub(1) {
            let (Some(d0), Some(d1)) = (d[w], d[w + 1]) else { continue };
            if d0 == 0.0 || d0.signum() == d1.signum() {
                continue;
            }
            let g = |m: f64| deriv(m).ok_or_else(|| Error::NoRealSolution(format!("m = {m}")));
            let Ok(m) = bisect(g, grid[w], grid[w + 1], 1e-12) else { continue };
            let kind = if d0 < 0.0 { StationaryKind::LocalMin } else { StationaryKind::LocalMax };
            out.extend(solution(m, kind));
        }
    }
    out.sort_by(|a, b| a.m.total_cmp(&b.m));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleRenormOptions {
    /// Evolution time; 1 reaches the quasi-fixed point in one step.
    pub tau: f64,
    /// Geometric ladder of evaluation abscissas.
    pub ladder: Vec<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for DoubleRenormOptions {
    fn default() -> Self {
        DoubleRenormOptions {
            tau: 1.0,
            ladder: (2..=8).map(|e| 10f64.powi(e)).collect(),
            abs_tol: 1e-9,
            rel_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DoubleRenormResult {
    pub amplitude_b_star: f64,
    pub beta: f64,
    /// Largest abscissa used.
    pub x_eval: f64,
    pub quad_error: f64,
    pub family: TransformFamily,
    /// `(x, B*(x))` along the ladder.
    pub ladder: Vec<(f64, f64)>,
}

/// Doubly renormalized amplitude on an order-`k` iterated-root base.
///
/// At each `x` the upper limit `y` of `int_{R_k(x)}^{y} dphi / v(phi) = tau`
/// is found, with `v(phi) = R_k(x(phi)) - phi` and `x(phi) = (phi^{1/gamma} - 1)/A_1`
/// inverting the first-order root. `B*(x) = A y x^{-gamma}` is then
/// Richardson-extrapolated over the ladder.
pub fn double_renorm_amplitude(
    f: &ReducedExpansion<f64>,
    k: usize,
    beta: f64,
    opts: &DoubleRenormOptions,
) -> Result<DoubleRenormResult> {
    let gamma = beta - f.prefactor.alpha;
    let first = build_iterated_root(f, 1, &beta)?;
    let a1 = first.a[0];
    if a1 <= 0.0 {
        return Err(Error::InversionDomain { phi: 1.0 });
    }
    if k == 1 {
        let b = first.amplitude()?;
        return Ok(DoubleRenormResult {
            amplitude_b_star: b.amplitude,
            beta: b.beta,
            x_eval: 0.0,
            quad_error: 0.0,
            family: TransformFamily::IteratedRoot,
            ladder: Vec::new(),
        });
    }
    let root = build_iterated_root(f, k, &beta)?;
    let inv = |phi: f64| -> Result<f64> {
        let w = phi.powf(1.0 / gamma);
        if !(w >= 1.0) {
            return Err(Error::InversionDomain { phi });
        }
        Ok((w - 1.0) / a1)
    };
    let velocity = |phi: f64| -> Result<f64> { Ok(root.eval_reduced(inv(phi)?)? - phi) };

    let mut ladder = Vec::with_capacity(opts.ladder.len());
    let mut worst_quad: f64 = 0.0;
    for &x in &opts.ladder {
        let y0 = root.eval_reduced(x)?;
        let (y, qerr) = evolve(&velocity, y0, opts)?;
        worst_quad = worst_quad.max(qerr);
        ladder.push((x, f.prefactor.amplitude * y * x.powf(-gamma)));
    }
    let n = ladder.len();
    let (b_star, extra_err) = match n {
        0 => return Err(Error::InvalidArgument("empty abscissa ladder".into())),
        1 | 2 => (ladder[n - 1].1, if n == 2 { (ladder[1].1 - ladder[0].1).abs() } else { 0.0 }),
        _ => richardson(ladder[n - 3].1, ladder[n - 2].1, ladder[n - 1].1),
    };
    Ok(DoubleRenormResult {
        amplitude_b_star: b_star,
        beta,
        x_eval: ladder[n - 1].0,
        quad_error: extra_err.max(worst_quad * b_star.abs()),
        family: TransformFamily::IteratedRoot,
        ladder,
    })
}

/// Extrapolates `b_i = B + c q^{-i delta}` from three consecutive ladder values.
fn richardson(b1: f64, b2: f64, b3: f64) -> (f64, f64) {
    let (d1, d2) = (b2 - b1, b3 - b2);
    if d1 != 0.0 {
        let r = d2 / d1;
        if r > 0.0 && r < 1.0 {
            let b = b3 + d2 * r / (1.0 - r);
            return (b, d2.abs().max((b - b3).abs()));
        }
    }
    (b3, d2.abs())
}

/// Solves `int_{y0}^{y} dphi / v(phi) = tau` for `y` by bracket-and-bisect.
/// Returns `y` and the relative quadrature error at the solution.
fn evolve(velocity: &impl Fn(f64) -> Result<f64>, y0: f64, opts: &DoubleRenormOptions) -> Result<(f64, f64)> {
    let v0 = velocity(y0)?;
    if v0 == 0.0 {
        return Err(Error::VelocityZeroCrossing { at: y0 });
    }
    let dir = v0.signum();
    let integral = |y: f64| -> Result<(f64, f64)> {
        let mut failure = None;
        let (val, err) = integrate(
            |phi| match velocity(phi) {
                Ok(v) => 1.0 / v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            y0,
            y,
            opts.abs_tol,
            opts.rel_tol,
        )
        .map_err(|e| failure.clone().unwrap_or(e))?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok((val, err))
    };

    // Bracket: grow the step until the integral passes tau or the velocity
    // changes sign (the integral diverges before a zero of v).
    let mut step = 0.25 * v0.abs() * opts.tau;
    let mut lo = y0;
    let mut hi = None;
    for _ in 0..200 {
        let cand = y0 + dir * step;
        match velocity(cand) {
            Ok(v) if v.signum() == dir => {
                let (val, _) = integral(cand)?;
                if val >= opts.tau {
                    hi = Some(cand);
                    break;
                }
                lo = cand;
                step *= 2.0;
            }
            Ok(_) => {
                let zero = bisect(velocity, lo, cand, 1e-15)?;
                let (val, _) = integral(zero - dir * 1e-12 * zero.abs().max(1.0))?;
                if val < opts.tau {
                    return Err(Error::VelocityZeroCrossing { at: zero });
                }
                hi = Some(zero);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let hi = hi.ok_or_else(|| Error::QuadratureFailure("could not bracket the upper limit".into()))?;
    let y = bisect(|y| Ok(integral(y)?.0 - opts.tau), lo, hi, 1e-14)?;
    let (_, err) = integral(y)?;
    Ok((y, err / opts.tau))
}
