//! Root approximants: the generic nested root, iterated roots with fixed
//! internal powers `(j+1)/j`, and corrected approximants carrying a
//! finite-limit correction factor.

use crate::error::{Error, Result};
use crate::factor::FactorApproximant;
use crate::scalar::Scalar;
use crate::series::{series_pow, AsymptoticForm, PowerSeries, Prefactor, ReducedExpansion};

/// Expansion through `order` of `((1 + c_1 x)^2 + c_2 x^2)^{3/2} ... + c_m x^m)^{outer}`.
pub fn tower_series<T: Scalar>(c: &[T], outer: &T, order: usize) -> PowerSeries<T> {
    let m = c.len();
    let mut p = PowerSeries::one(order);
    for (idx, cj) in c.iter().enumerate() {
        let j = idx + 1;
        let e = if j < m { T::ratio(j as i64 + 1, j as i64) } else { outer.clone() };
        p = series_pow(&p.add_monomial(j, cj), &e).expect("unit constant term");
    }
    p
}

/// Large-x value of the inner tower `((c_1^2 + c_2)^{3/2} + ... ) + c_m`, i.e.
/// without the outer power. Fails with the first non-positive level.
pub fn tower_limit_base(c: &[f64]) -> Result<f64> {
    let m = c.len();
    let mut v = c[0];
    if m == 1 {
        return Ok(v);
    }
    v *= v;
    for j in 2..=m {
        let scale = v.abs().max(c[j - 1].abs());
        v += c[j - 1];
        // Cancellation to rounding level counts as a zero base.
        if v <= 1e-12 * scale {
            return Err(Error::NegativeTower { level: j });
        }
        if j < m {
            v = v.powf((j as f64 + 1.0) / j as f64);
        }
    }
    Ok(v)
}

/// Direct evaluation of the tower at `x >= 0`.
fn tower_eval(c: &[f64], outer: f64, x: f64) -> Result<f64> {
    let m = c.len();
    let mut p = 1.0;
    for (idx, cj) in c.iter().enumerate() {
        let j = idx + 1;
        let base = p + cj * x.powi(j as i32);
        let e = if j < m { (j as f64 + 1.0) / j as f64 } else { outer };
        if base < 0.0 && e.fract() != 0.0 || base == 0.0 && e < 0.0 {
            return Err(Error::DomainError { x, level: Some(j) });
        }
        p = base.powf(e);
    }
    Ok(p)
}

/// Nested root with free powers, `(((1 + A_1 x)^{n_1} + A_2 x^2)^{n_2} ... + A_k x^k)^{n_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootApproximant {
    pub a: Vec<f64>,
    pub n: Vec<f64>,
    pub prefactor: Prefactor<f64>,
}

impl RootApproximant {
    pub fn eval(&self, x: f64) -> Result<f64> {
        let mut p = 1.0;
        for (j, (aj, nj)) in self.a.iter().zip(&self.n).enumerate() {
            let base = p + aj * x.powi(j as i32 + 1);
            if base < 0.0 && nj.fract() != 0.0 {
                return Err(Error::DomainError { x, level: Some(j + 1) });
            }
            p = base.powf(*nj);
        }
        Ok(self.prefactor.eval(x) * p)
    }

    /// `B_k = A A_k^{n_k}`, `beta = alpha + k n_k`.
    pub fn amplitude(&self) -> Result<AsymptoticForm> {
        let k = self.a.len();
        let (ak, nk) = (self.a[k - 1], self.n[k - 1]);
        if ak <= 0.0 {
            return Err(Error::NegativeTower { level: k });
        }
        Ok(AsymptoticForm {
            amplitude: self.prefactor.amplitude * ak.powf(nk),
            beta: self.prefactor.alpha + k as f64 * nk,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IteratedRoot<T> {
    pub a: Vec<T>,
    pub gamma: T,
    pub prefactor: Prefactor<T>,
    pub order_k: usize,
}

impl<T: Scalar> IteratedRoot<T> {
    pub fn outer_power(&self) -> T {
        self.gamma.clone() / T::from_int(self.order_k as i64)
    }

    /// Taylor coefficients of `R_k` through `order`.
    pub fn reexpand(&self, order: usize) -> PowerSeries<T> {
        tower_series(&self.a, &self.outer_power(), order)
    }

    pub fn eval_reduced(&self, x: f64) -> Result<f64> {
        let a: Vec<f64> = self.a.iter().map(Scalar::to_f64).collect();
        tower_eval(&a, self.outer_power().to_f64(), x)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.prefactor.eval(x) * self.eval_reduced(x)?)
    }

    /// `B_k = A (((A_1^2 + A_2)^{3/2} + A_3)^{4/3} ... + A_k)^{gamma/k}`.
    pub fn amplitude(&self) -> Result<AsymptoticForm> {
        let a: Vec<f64> = self.a.iter().map(Scalar::to_f64).collect();
        let gamma = self.gamma.to_f64();
        let base = tower_limit_base(&a)?;
        if base <= 0.0 {
            return Err(Error::NegativeTower { level: self.order_k });
        }
        let pre = self.prefactor.to_f64();
        Ok(AsymptoticForm {
            amplitude: pre.amplitude * base.powf(gamma / self.order_k as f64),
            beta: pre.alpha + gamma,
        })
    }
}

/// Solves `A_1..A_k` order by order: the order-`j` coefficient is linear in `A_j`.
pub fn build_iterated_root<T: Scalar>(f: &ReducedExpansion<T>, k: usize, beta: &T) -> Result<IteratedRoot<T>> {
    if k == 0 {
        return Err(Error::InvalidArgument("iterated root order must be at least 1".into()));
    }
    f.require_order(k)?;
    let gamma = f.gamma(beta);
    if gamma.is_negligible(1.0) {
        return Err(Error::ZeroGamma);
    }
    let a = solve_tower(f.series.coeffs(), k, |j| gamma.clone() / T::from_int(j as i64))?;
    let root = IteratedRoot { a, gamma, prefactor: f.prefactor.clone(), order_k: k };
    check_branch(&root)?;
    Ok(root)
}

/// Sequential linear solve. With `A_{j+1..k} = 0` the order-`k` tower collapses
/// to a `j`-level tower with outer power `outer(j)`.
fn solve_tower<T: Scalar>(target: &[T], k: usize, outer: impl Fn(usize) -> T) -> Result<Vec<T>> {
    let mut a: Vec<T> = Vec::with_capacity(k);
    for j in 1..=k {
        let e = outer(j);
        let mut trial = a.clone();
        trial.push(T::zero());
        let c0 = tower_series(&trial, &e, j).coeffs()[j].clone();
        trial[j - 1] = T::one();
        let c1 = tower_series(&trial, &e, j).coeffs()[j].clone();
        let lin = c1 - c0.clone();
        if lin.is_negligible(1.0) {
            return Err(Error::DegenerateMoments);
        }
        a.push((target[j].clone() - c0) / lin);
    }
    Ok(a)
}

fn check_branch<T: Scalar>(root: &IteratedRoot<T>) -> Result<()> {
    let a: Vec<f64> = root.a.iter().map(Scalar::to_f64).collect();
    let gamma = root.gamma.to_f64();
    if root.order_k == 1 {
        let integer = gamma.fract() == 0.0;
        if a[0] < 0.0 && !integer {
            return Err(Error::ComplexBranch(format!(
                "base 1 + ({})x turns negative at x = {} under power {gamma}",
                a[0],
                -1.0 / a[0]
            )));
        }
        return Ok(());
    }
    match tower_limit_base(&a) {
        Err(Error::NegativeTower { level }) => Err(Error::ComplexBranch(format!(
            "level {level} of the order-{} root turns negative at large x",
            root.order_k
        ))),
        Err(e) => Err(e),
        Ok(v) if v <= 0.0 => Err(Error::ComplexBranch(format!(
            "outer base of the order-{} root turns negative at large x",
            root.order_k
        ))),
        Ok(_) => Ok(()),
    }
}

/// Base of a corrected approximant.
#[derive(Debug, Clone, PartialEq)]
pub enum CorrectedBase<T> {
    /// `f0(x)` alone (order 0), used when the target limit is finite.
    Identity(Prefactor<T>),
    Iterated(IteratedRoot<T>),
    Factor(FactorApproximant),
}

impl<T: Scalar> CorrectedBase<T> {
    /// Highest series order the base reproduces.
    pub fn matched_order(&self) -> usize {
        match self {
            CorrectedBase::Identity(_) => 0,
            CorrectedBase::Iterated(r) => r.order_k,
            CorrectedBase::Factor(fa) => fa.matched_order,
        }
    }

    pub fn reexpand(&self, order: usize) -> PowerSeries<T> {
        match self {
            CorrectedBase::Identity(_) => PowerSeries::one(order),
            CorrectedBase::Iterated(r) => r.reexpand(order),
            CorrectedBase::Factor(fa) => {
                PowerSeries::new(fa.reexpand(order).coeffs().iter().map(|&c| T::from_f64(c)).collect())
            }
        }
    }

    pub fn amplitude(&self) -> Result<AsymptoticForm> {
        match self {
            CorrectedBase::Identity(pre) => {
                let pre = pre.to_f64();
                Ok(AsymptoticForm { amplitude: pre.amplitude, beta: pre.alpha })
            }
            CorrectedBase::Iterated(r) => r.amplitude(),
            CorrectedBase::Factor(fa) => fa.amplitude(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            CorrectedBase::Identity(pre) => Ok(pre.to_f64().eval(x)),
            CorrectedBase::Iterated(r) => r.eval(x),
            CorrectedBase::Factor(fa) => fa.eval(x),
        }
    }
}

/// `base(x) * C(x)`, `C = 1 + d x^{k+1} (((1 + b_1 x)^2 + b_2 x^2)^{3/2} ... + b_{p-1} x^{p-1})^{-(k+1)/(p-1)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectedApproximant<T> {
    pub base: CorrectedBase<T>,
    pub d: T,
    pub b: Vec<T>,
    pub p: usize,
    /// Base order `k` entering the correction exponent.
    pub k: usize,
}

impl<T: Scalar> CorrectedApproximant<T> {
    fn outer(&self) -> T {
        correction_outer(self.k, self.p)
    }

    /// Taylor coefficients of the correction function through `order`.
    pub fn correction_series(&self, order: usize) -> PowerSeries<T> {
        correction_series(&self.d, &self.b, self.k, self.p, order)
    }

    pub fn reexpand(&self, order: usize) -> PowerSeries<T> {
        self.base.reexpand(order).mul(&self.correction_series(order))
    }

    /// `C(inf) = 1 + d T^{-(k+1)/(p-1)}` with `T` the inner tower limit of the `b_j`.
    pub fn correction_limit(&self) -> Result<f64> {
        let d = self.d.to_f64();
        if d == 0.0 {
            return Ok(1.0);
        }
        if self.b.is_empty() {
            return Err(Error::NoFiniteLimit);
        }
        let b: Vec<f64> = self.b.iter().map(Scalar::to_f64).collect();
        let t = tower_limit_base(&b)?;
        if t <= 0.0 {
            return Err(Error::NegativeTower { level: 1 });
        }
        Ok(1.0 + d * t.powf(self.outer().to_f64()))
    }

    pub fn amplitude(&self) -> Result<AsymptoticForm> {
        let base = self.base.amplitude()?;
        let c = self.correction_limit()?;
        Ok(AsymptoticForm { amplitude: base.amplitude * c, beta: base.beta })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let base = self.base.eval(x)?;
        let d = self.d.to_f64();
        if d == 0.0 {
            return Ok(base);
        }
        let b: Vec<f64> = self.b.iter().map(Scalar::to_f64).collect();
        let q = if b.is_empty() { 1.0 } else { tower_eval(&b, self.outer().to_f64(), x)? };
        Ok(base * (1.0 + d * x.powi(self.k as i32 + 1) * q))
    }
}

fn correction_outer<T: Scalar>(k: usize, p: usize) -> T {
    -T::ratio(k as i64 + 1, (p - 1).max(1) as i64)
}

fn correction_series<T: Scalar>(d: &T, b: &[T], k: usize, p: usize, order: usize) -> PowerSeries<T> {
    let q = if b.is_empty() { PowerSeries::one(order) } else { tower_series(b, &correction_outer(k, p), order) };
    let mut c = vec![T::zero(); order + 1];
    c[0] = T::one();
    for i in 0..=order {
        if i + k + 1 > order {
            break;
        }
        c[i + k + 1] = c[i + k + 1].clone() + d.clone() * q.coeffs()[i].clone();
    }
    PowerSeries::new(c)
}

/// Solves `d` and `b_1..b_{p-1}` so that base times correction reproduces
/// `target` through order `k + p`, where `k` is the base's matched order.
pub fn build_corrected<T: Scalar>(
    base: CorrectedBase<T>,
    target: &PowerSeries<T>,
    p: usize,
) -> Result<CorrectedApproximant<T>> {
    if p == 0 {
        return Err(Error::InvalidArgument("correction order p must be at least 1".into()));
    }
    let k = base.matched_order();
    let n = k + p;
    if target.order() < n {
        return Err(Error::InsufficientOrder { need: n, have: target.order() });
    }
    let bs = base.reexpand(n);
    let t = target.coeffs();
    let d = t[k + 1].clone() - bs.coeffs()[k + 1].clone();
    if d.is_negligible(t[k + 1].to_f64().abs().max(1.0)) {
        // With d = 0 the correction is identically 1; it only fits when the
        // base already reproduces every remaining order.
        let matched = (k + 2..=n).all(|j| (t[j].clone() - bs.coeffs()[j].clone()).is_negligible(t[j].to_f64().abs().max(1.0)));
        if !matched {
            return Err(Error::DegenerateMoments);
        }
        return Ok(CorrectedApproximant { base, d: T::zero(), b: vec![T::zero(); p - 1], p, k });
    }
    if p == 1 {
        return Err(Error::NoFiniteLimit);
    }
    let mut b: Vec<T> = Vec::with_capacity(p - 1);
    for j in 1..p {
        let coef = |bj: T| {
            let mut trial = b.clone();
            trial.push(bj);
            trial.resize(p - 1, T::zero());
            let c = correction_series(&d, &trial, k, p, n);
            bs.mul(&c).coeffs()[k + 1 + j].clone()
        };
        let c0 = coef(T::zero());
        let c1 = coef(T::one());
        let lin = c1 - c0.clone();
        if lin.is_negligible(c0.to_f64().abs().max(1.0)) {
            return Err(Error::DegenerateMoments);
        }
        let num = t[k + 1 + j].clone() - c0.clone();
        if num.is_negligible(t[k + 1 + j].to_f64().abs().max(c0.to_f64().abs())) {
            b.push(T::zero());
        } else {
            b.push(num / lin);
        }
    }
    let c = CorrectedApproximant { base, d, b, p, k };
    c.correction_limit()?;
    Ok(c)
}

/// Iterated root of order `k` corrected with `p` further coefficients. With
/// `k = 0` the base is the prefactor alone and `beta` must equal `alpha`.
pub fn build_corrected_root<T: Scalar>(
    f: &ReducedExpansion<T>,
    k: usize,
    p: usize,
    beta: &T,
) -> Result<CorrectedApproximant<T>> {
    f.require_order(k + p)?;
    let base = if k == 0 {
        if !f.gamma(beta).is_negligible(1.0) {
            return Err(Error::InvalidArgument("a zero-order base needs beta = alpha".into()));
        }
        CorrectedBase::Identity(f.prefactor.clone())
    } else {
        CorrectedBase::Iterated(build_iterated_root(f, k, beta)?)
    };
    build_corrected(base, &f.series, p)
}
