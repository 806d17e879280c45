use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::roots::{build_iterated_root, IteratedRoot};
use crate::series::{Prefactor, PowerSeries, ReducedExpansion};

/// Hard-sphere gas in units `m = a_s = 1`, so the close-packed density is `sqrt 2`.
pub const RHO0: f64 = SQRT_2;

/// Close-packed amplitude of `E/N` in the variable `x`.
pub const CLOSE_PACKED_AMPLITUDE: f64 = PI * PI;

/// Low-density expansion of `E/N` in `x`, where `rho/rho0 = x^6/(1+x^2)^3`.
pub fn eos_expansion() -> ReducedExpansion<f64> {
    let s = RHO0.sqrt();
    let c3 = 128.0 / (15.0 * PI.sqrt()) * s;
    let c5 = -192.0 / 5.0 * s;
    ReducedExpansion::new(
        Prefactor::new(2.0 * PI * RHO0, 6.0).expect("nonzero amplitude"),
        PowerSeries::new(vec![1.0, 0.0, -3.0, c3, 6.0, c5]),
    )
    .expect("unit constant")
}

#[derive(Debug, Clone, PartialEq)]
pub struct EosRecord {
    pub a2: f64,
    pub b: f64,
    pub root: IteratedRoot<f64>,
}

impl EosRecord {
    /// `E/N` at density ratio `rho/rho0` in `[0, 1)`.
    pub fn energy(&self, ratio: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&ratio) {
            return Err(Error::DomainError { x: ratio, level: None });
        }
        self.energy_at_x(x_of_ratio(ratio))
    }

    pub fn energy_at_x(&self, x: f64) -> Result<f64> {
        self.root.eval(x)
    }

    /// The modified London form `2 pi rho (1 - u)^{-2} (1 + b u)^{-1}`, `u = (rho/rho0)^{1/3}`.
    pub fn energy_closed_form(&self, ratio: f64) -> f64 {
        let u = ratio.cbrt();
        2.0 * PI * RHO0 * ratio / ((1.0 - u).powi(2) * (1.0 + self.b * u))
    }
}

pub fn x_of_ratio(ratio: f64) -> f64 {
    let u = ratio.cbrt();
    (u / (1.0 - u)).sqrt()
}

pub fn ratio_of_x(x: f64) -> f64 {
    let t = x * x / (1.0 + x * x);
    t * t * t
}

/// Second-order iterated root for `E/N` with `A_1` from matching and `A_2` fixed
/// by the close-packed limit `E/N ~ pi^2 x^4`.
pub fn eos_equation_of_state() -> EosRecord {
    let f = eos_expansion();
    let beta = 4.0;
    let gamma = f.gamma(&beta);
    let first = build_iterated_root(&f, 1, &beta).expect("first level is real");
    let a1 = first.a[0];
    let ratio = CLOSE_PACKED_AMPLITUDE / f.prefactor.amplitude;
    let a2 = ratio.powf(2.0 / gamma) - a1 * a1;
    let root = IteratedRoot { a: vec![a1, a2], gamma, prefactor: f.prefactor, order_k: 2 };
    EosRecord { a2, b: a2 - 1.0, root }
}
