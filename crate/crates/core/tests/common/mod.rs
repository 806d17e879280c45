//! Property checks shared by the proptest suite and the acceptance harness.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use ssx_core::bench::{run_bench, to_csv};
use ssx_core::corpus::load_corpus;
use ssx_core::factor::{build_factor, FactorApproximant, FactorMode};
use ssx_core::method::Family;
use ssx_core::pade::build_pade;
use ssx_core::roots::{build_corrected, build_corrected_root, build_iterated_root, CorrectedBase};
use ssx_core::series::{series_exp, series_log, series_pow, series_xdlog, PowerSeries, Prefactor, ReducedExpansion};
use ssx_core::transform::{transformed_amplitude, TransformFamily};
use ssx_core::Error;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(n.into(), d.into())
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Random exact series: `A`, `alpha`, `gamma != 0` and `c_1..c_6` small rationals.
#[derive(Debug, Clone)]
pub struct ExactCase {
    pub f: ReducedExpansion<Q>,
    pub beta: Q,
}

impl ExactCase {
    pub fn gamma(&self) -> Q {
        self.f.gamma(&self.beta)
    }
}

fn small_rational(num: std::ops::RangeInclusive<i64>, den: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Q> {
    (num, den).prop_map(|(n, d)| q(n, d))
}

pub fn exact_case() -> impl Strategy<Value = ExactCase> {
    (
        proptest::collection::vec(small_rational(-9..=9, 1..=6), 6),
        small_rational(1..=5, 1..=3),
        small_rational(-4..=4, 1..=3),
        small_rational(1..=6, 1..=4),
        any::<bool>(),
    )
        .prop_map(|(c, a, alpha, g, neg)| {
            let mut coeffs = vec![Q::one()];
            coeffs.extend(c);
            let gamma = if neg { -g } else { g };
            let beta = alpha.clone() + gamma;
            let f = ReducedExpansion::new(Prefactor::new(a, alpha).unwrap(), PowerSeries::new(coeffs)).unwrap();
            ExactCase { f, beta }
        })
}

/// Tally of how many family constructions actually succeeded, so a suite
/// cannot pass vacuously.
#[derive(Default)]
pub struct Tally {
    pub built: AtomicUsize,
    pub refused: AtomicUsize,
}

impl Tally {
    fn record<T>(&self, r: &Result<T, Error>) {
        let c = if r.is_ok() { &self.built } else { &self.refused };
        c.fetch_add(1, Ordering::Relaxed);
    }

    pub fn built(&self) -> usize {
        self.built.load(Ordering::Relaxed)
    }

    pub fn refused(&self) -> usize {
        self.refused.load(Ordering::Relaxed)
    }
}

fn allowed_refusal(e: &Error) -> bool {
    e.is_complex()
        || matches!(
            e,
            Error::DegenerateMoments
                | Error::NoFiniteLimit
                | Error::NoRealSolution(_)
                | Error::SingularPadeSystem
                | Error::PrecisionLoss(_)
        )
}

fn refusal_ok<T>(r: &Result<T, Error>, what: &str) -> Result<(), TestCaseError> {
    match r {
        Err(e) if !allowed_refusal(e) => Err(TestCaseError::fail(format!("{what}: unexpected {e:?}"))),
        _ => Ok(()),
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

/// Agreement to float accuracy, measured against `scale`, the size of the terms
/// that cancel in each coefficient.
fn float_prefix_matches(got: &PowerSeries<f64>, want: &PowerSeries<Q>, scale: &[f64], order: usize) -> bool {
    (0..=order).all(|n| {
        let w = ssx_core::scalar::Scalar::to_f64(&want.coeffs()[n]);
        (got.coeffs()[n] - w).abs() <= 1e-9 * (1.0 + w.abs() + scale[n])
    })
}

/// Coefficients of `exp(sum |n_i| |A_i|^m x^m / m)`, which bound the terms
/// summed in the re-expansion of a factor approximant.
fn factor_magnitude(fa: &FactorApproximant, order: usize) -> Vec<f64> {
    let mut log = vec![0.0; order + 1];
    for (a, n) in &fa.pairs {
        for (m, slot) in log.iter_mut().enumerate().skip(1) {
            *slot += n.norm() * a.norm().powi(m as i32) / m as f64;
        }
    }
    series_exp(&PowerSeries::new(log)).unwrap().into_coeffs()
}

fn abs_convolution(a: &[f64], b: &[f64]) -> Vec<f64> {
    (0..a.len().min(b.len())).map(|n| (0..=n).map(|j| a[j].abs() * b[n - j].abs()).sum()).collect()
}

/// Every family reproduces the input through its matched order: exactly for
/// the rational constructions, to float accuracy for factor-based ones. Power
/// transforms at `m = 1` coincide with the untransformed family.
pub fn reexpansion(case: &ExactCase, tally: &Tally) -> Result<(), TestCaseError> {
    let f = &case.f;
    let s = &f.series;
    let beta = &case.beta;

    for k in 1..=4 {
        let r = build_iterated_root(f, k, beta);
        tally.record(&r);
        refusal_ok(&r, "root")?;
        if let Ok(r) = r {
            prop_assert_eq!(r.reexpand(k), s.truncate(k), "root k={}", k);
        }
    }
    for (k, p) in [(1, 2), (2, 2), (1, 3), (3, 3)] {
        let c = build_corrected_root(f, k, p, beta);
        tally.record(&c);
        refusal_ok(&c, "corrected-root")?;
        if let Ok(c) = c {
            prop_assert_eq!(c.reexpand(k + p), s.truncate(k + p), "corrected-root k={} p={}", k, p);
        }
    }
    for m in 0..=6usize {
        for n in 0..=(6 - m) {
            let p = build_pade(s, m, n);
            tally.record(&p);
            refusal_ok(&p, "pade")?;
            if let Ok(p) = p {
                prop_assert_eq!(p.reexpand(m + n), s.truncate(m + n), "pade {}/{}", m, n);
            }
        }
    }
    let mut modes: Vec<(usize, FactorMode<Q>)> = (1..=5).map(|k| (k, FactorMode::Constrained { beta: beta.clone() })).collect();
    modes.extend([2, 4, 6].map(|k| (k, FactorMode::Free)));
    modes.push((4, FactorMode::ScaleFixed { a1: Q::one(), beta: Some(beta.clone()) }));
    for (k, mode) in &modes {
        let fa = build_factor(f, *k, mode);
        tally.record(&fa);
        refusal_ok(&fa, "factor")?;
        if let Ok(fa) = fa {
            let m = fa.matched_order;
            prop_assert!(m >= 1);
            let scale = factor_magnitude(&fa, m + 2);
            prop_assert!(float_prefix_matches(&fa.reexpand(m), s, &scale, m), "factor k={} {:?}: {:?}", k, mode, fa.pairs);
            let corrected = build_corrected(CorrectedBase::Factor(fa.clone()), &s.to_f64(), 2);
            tally.record(&corrected);
            if let Ok(c) = corrected {
                let scale = abs_convolution(&scale, c.correction_series(m + 2).coeffs());
                prop_assert!(float_prefix_matches(&c.reexpand(m + 2), s, &scale, m + 2), "corrected-factor k={}", k);
            }
        }
    }

    let ff = f.to_f64();
    let bf = ssx_core::scalar::Scalar::to_f64(beta);
    for (family, k) in [(TransformFamily::Factor, 3), (TransformFamily::IteratedRoot, 3)] {
        let t = transformed_amplitude(&ff, k, bf, family, 1.0);
        let plain = match family {
            TransformFamily::Factor => build_factor(&ff, k, &FactorMode::Constrained { beta: bf }).and_then(|a| a.amplitude()),
            TransformFamily::IteratedRoot => build_iterated_root(&ff, k, &bf).and_then(|a| a.amplitude()),
        };
        tally.record(&t);
        if let (Ok(t), Ok(p)) = (&t, &plain) {
            prop_assert!(close(*t, p.amplitude, 1e-9), "power {:?}: {} vs {}", family, t, p.amplitude);
        }
    }

    // Exponent families: the b-series integrates back to ln fbar.
    let es = ssx_core::exponent::exponent_series(f, 6).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mut logf = vec![Q::zero(); 7];
    for (n, b) in es.b.iter().enumerate().skip(1) {
        logf[n] = b.clone() / q(n as i64, 1);
    }
    prop_assert_eq!(series_exp(&PowerSeries::new(logf)).unwrap(), s.truncate(6));
    Ok(())
}

/// `prod (1 + A_i x)^{n_i}` with well separated positive nodes.
#[derive(Debug, Clone)]
pub struct FactorModel {
    pub a: Vec<f64>,
    pub n: Vec<f64>,
}

pub fn factor_model() -> impl Strategy<Value = FactorModel> {
    (1usize..=3).prop_flat_map(|count| {
        (
            proptest::collection::vec(0.3f64..3.0, count),
            proptest::collection::vec((0.2f64..2.0, any::<bool>()), count),
        )
            .prop_filter("separated nodes", |(a, _)| {
                a.iter().enumerate().all(|(i, x)| a.iter().skip(i + 1).all(|y| (x / y).ln().abs() > 0.3))
            })
            .prop_map(|(a, n)| FactorModel { a, n: n.into_iter().map(|(v, neg)| if neg { -v } else { v }).collect() })
    })
}

impl FactorModel {
    pub fn series(&self, order: usize) -> PowerSeries<f64> {
        let mut s = PowerSeries::one(order);
        for (a, n) in self.a.iter().zip(&self.n) {
            let mut lin = vec![0.0; order + 1];
            lin[0] = 1.0;
            lin[1] = *a;
            s = s.mul(&series_pow(&PowerSeries::new(lin), n).unwrap());
        }
        s
    }
}

/// Factor approximants with as many factors as the model recover its nodes,
/// powers and amplitude.
pub fn factor_recovery(model: &FactorModel) -> Result<(), TestCaseError> {
    let count = model.a.len();
    let beta: f64 = model.n.iter().sum();
    let amplitude: f64 = model.a.iter().zip(&model.n).map(|(a, n)| a.powf(*n)).product();
    let f = ReducedExpansion::new(Prefactor::unit(), model.series(2 * count)).unwrap();
    for (k, mode) in [(2 * count, FactorMode::Free), (2 * count - 1, FactorMode::Constrained { beta })] {
        let fa = build_factor(&f, k, &mode).map_err(|e| TestCaseError::fail(format!("k={k}: {e}")))?;
        let mut got: Vec<(f64, f64)> = fa.pairs.iter().map(|(a, n)| (a.re, n.re)).collect();
        got.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut want: Vec<(f64, f64)> = model.a.iter().copied().zip(model.n.iter().copied()).collect();
        want.sort_by(|x, y| x.0.total_cmp(&y.0));
        prop_assert_eq!(got.len(), want.len());
        for ((ga, gn), (wa, wn)) in got.iter().zip(&want) {
            prop_assert!(close(*ga, *wa, 1e-6) && close(*gn, *wn, 1e-6), "k={} got {:?} want {:?}", k, got, want);
        }
        let b = fa.amplitude().map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(close(b.amplitude, amplitude, 1e-6), "amplitude {} vs {}", b.amplitude, amplitude);
        prop_assert!(close(b.beta, beta, 1e-6));
    }
    Ok(())
}

/// `A_j` depends only on `c_1..c_j`: raising the order or perturbing later
/// coefficients leaves earlier parameters unchanged, and `A_1 = c_1 / gamma`.
pub fn root_triangularity(case: &ExactCase, tally: &Tally) -> Result<(), TestCaseError> {
    let f = &case.f;
    let beta = &case.beta;
    let r1 = build_iterated_root(f, 1, beta);
    if let Ok(r) = &r1 {
        prop_assert_eq!(&r.a[0], &(f.series.coeffs()[1].clone() / case.gamma()));
    }
    let mut prev = r1.ok();
    for k in 2..=5 {
        let r = build_iterated_root(f, k, beta);
        tally.record(&r);
        refusal_ok(&r, "root")?;
        if let (Some(p), Ok(r)) = (&prev, &r) {
            prop_assert_eq!(&r.a[..k - 1], &p.a[..], "k={}", k);
        }
        if let Ok(r) = &r {
            let mut c = f.series.coeffs().to_vec();
            c[k] = c[k].clone() + q(7, 3);
            let g = ReducedExpansion::new(f.prefactor.clone(), PowerSeries::new(c)).unwrap();
            if let Ok(rg) = build_iterated_root(&g, k, beta) {
                prop_assert_eq!(&rg.a[..k - 1], &r.a[..k - 1]);
                prop_assert_ne!(&rg.a[k - 1], &r.a[k - 1]);
            }
        }
        prev = r.ok();
    }
    Ok(())
}

/// `f(x) -> f(lambda x)` multiplies every amplitude by `lambda^beta`.
pub fn scaling_covariance(case: &ExactCase, lambda: f64, tally: &Tally) -> Result<(), TestCaseError> {
    let f = case.f.to_f64();
    let beta = ssx_core::scalar::Scalar::to_f64(&case.beta);
    let pre = &f.prefactor;
    let g = ReducedExpansion::new(
        Prefactor::new(pre.amplitude * lambda.powf(pre.alpha), pre.alpha).unwrap(),
        f.series.rescale(&lambda),
    )
    .unwrap();
    type Amp = fn(&ReducedExpansion<f64>, f64) -> ssx_core::Result<f64>;
    let families: [(&str, Amp); 4] = [
        ("factor", |f, b| build_factor(f, 4, &FactorMode::Constrained { beta: b })?.amplitude().map(|a| a.amplitude)),
        ("root", |f, b| build_iterated_root(f, 3, &b)?.amplitude().map(|a| a.amplitude)),
        ("corrected-root", |f, b| build_corrected_root(f, 1, 2, &b)?.amplitude().map(|a| a.amplitude)),
        ("pade", |f, b| ssx_core::pade::pade_amplitude(f, 5, &b).map(|a| a.amplitude)),
    ];
    for (name, amp) in families {
        let (a, b) = (amp(&f, beta), amp(&g, beta));
        tally.record(&a);
        if let (Ok(a), Ok(b)) = (a, b) {
            let want = a * lambda.powf(beta);
            prop_assert!(close(b, want, 1e-6), "{}: {} vs {}", name, b, want);
        }
    }
    Ok(())
}

/// `exp(log s) = s`, `s^a s^b = s^{a+b}`, `(s^a)^{1/a} = s`, `s * xdlog(s) = x s'`.
pub fn series_identities(case: &ExactCase, a: &Q, b: &Q) -> Result<(), TestCaseError> {
    let s = &case.f.series;
    let log = series_log(s).unwrap();
    prop_assert_eq!(&series_exp(&log).unwrap(), s);
    prop_assert_eq!(&series_log(&series_exp(&log).unwrap()).unwrap(), &log);
    let sa = series_pow(s, a).unwrap();
    let sb = series_pow(s, b).unwrap();
    prop_assert_eq!(sa.mul(&sb), series_pow(s, &(a.clone() + b.clone())).unwrap());
    if !a.is_zero() {
        prop_assert_eq!(&series_pow(&sa, &(Q::one() / a.clone())).unwrap(), s);
    }
    let xd: Vec<Q> = s.coeffs().iter().enumerate().map(|(n, c)| c.clone() * q(n as i64, 1)).collect();
    prop_assert_eq!(s.mul(&series_xdlog(s).unwrap()), PowerSeries::new(xd));
    Ok(())
}

pub fn exponent_pair() -> impl Strategy<Value = (Q, Q)> {
    (small_rational(-7..=7, 1..=5), small_rational(-7..=7, 1..=5))
}

/// Padé `[m/n]` reproduces the series through `m + n` and its value near the
/// origin agrees with the truncated sum.
pub fn pade_reexpansion(case: &ExactCase, tally: &Tally) -> Result<(), TestCaseError> {
    let s = &case.f.series;
    for m in 0..=6usize {
        for n in 0..=(6 - m) {
            let p = build_pade(s, m, n);
            tally.record(&p);
            match p {
                Ok(p) => {
                    prop_assert_eq!(p.reexpand(m + n), s.truncate(m + n));
                    prop_assert_eq!(p.denominator[0].clone(), Q::one());
                    let x = q(1, 1000);
                    let diff = p.eval(&x) - s.truncate(m + n).eval(&x);
                    let bound = q(1, 1000).pow((m + n + 1) as i32) * q(10_000_000, 1);
                    prop_assert!(diff.abs() <= bound, "pade {}/{} differs near 0", m, n);
                }
                Err(Error::SingularPadeSystem) => {}
                Err(e) => return Err(TestCaseError::fail(format!("pade {m}/{n}: {e}"))),
            }
        }
    }
    Ok(())
}

/// Bench output is a pure function of the corpus: two runs, and a run over a
/// reversed case list, give byte-identical CSV.
pub fn bench_determinism(families: &[Family]) -> Result<usize, String> {
    let cases = load_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    let first = to_csv(&run_bench(&cases, families));
    let second = to_csv(&run_bench(&cases, families));
    let mut reversed = cases.clone();
    reversed.reverse();
    let third = to_csv(&run_bench(&reversed, families));
    if first != second || first != third {
        return Err("bench CSV differs between runs".into());
    }
    Ok(first.lines().count() - 1)
}

/// Families that stay fast enough for repeated determinism runs.
pub const FAST_FAMILIES: [Family; 7] = [
    Family::Factor,
    Family::Root,
    Family::CorrectedRoot,
    Family::CorrectedFactor,
    Family::Pade,
    Family::ExponentFactor,
    Family::ExponentRoot,
];

pub fn runner(cases: u32, deterministic: bool) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    if deterministic {
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    } else {
        TestRunner::new(config)
    }
}

/// Runs one property suite; returns a one-line description of the outcome.
pub fn run_suite<S: Strategy>(
    cases: u32,
    deterministic: bool,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases, deterministic).run(&strategy, test).map_err(|e| e.to_string())
}

/// All property suites at the given case count, as `(name, outcome)`.
pub fn all_suites(cases: u32, deterministic: bool) -> Vec<(&'static str, Result<String, String>)> {
    let mut out = Vec::new();
    let with_tally = |name: &'static str, tally: &Tally, r: Result<(), String>, min_built: usize| {
        let built = tally.built();
        let r = r.and_then(|_| {
            if built < min_built {
                Err(format!("only {built} constructions succeeded"))
            } else {
                Ok(format!("{built} built, {} refused", tally.refused()))
            }
        });
        (name, r)
    };

    let t = Tally::default();
    let r = run_suite(cases, deterministic, exact_case(), |c| reexpansion(&c, &t));
    out.push(with_tally("re-expansion, every family", &t, r, cases as usize));

    let r = run_suite(cases, deterministic, factor_model(), |m| factor_recovery(&m));
    out.push(("factor model-class recovery", r.map(|_| format!("{cases} models"))));

    let t = Tally::default();
    let r = run_suite(cases, deterministic, exact_case(), |c| root_triangularity(&c, &t));
    out.push(with_tally("iterated-root triangularity", &t, r, cases as usize / 4));

    let t = Tally::default();
    let r = run_suite(cases, deterministic, (exact_case(), 0.25f64..4.0), |(c, l)| scaling_covariance(&c, l, &t));
    out.push(with_tally("scaling covariance", &t, r, cases as usize));

    let r = run_suite(cases, deterministic, (exact_case(), exponent_pair()), |(c, (a, b))| series_identities(&c, &a, &b));
    out.push(("exp/log/pow identities", r.map(|_| format!("{cases} series"))));

    let t = Tally::default();
    let r = run_suite(cases, deterministic, exact_case(), |c| pade_reexpansion(&c, &t));
    out.push(with_tally("pade re-expansion", &t, r, cases as usize * 20));

    let r = bench_determinism(&FAST_FAMILIES).map(|n| format!("{n} rows identical over 3 runs"));
    out.push(("bench determinism", r));
    out
}
