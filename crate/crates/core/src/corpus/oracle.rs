//! Independent coefficient generators for the explicitly defined functions.
//!
//! Each oracle returns the coefficient list in the form the expansion is
//! usually printed: raw `c_n` for functions with a constant leading term, the
//! bracketed reduced series `1 + a_1 x + ...` for those with a power prefactor
//! (`stirling`, `scalar-field`, `string`).

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{series_exp, series_log, series_pow, PowerSeries};

#[derive(Debug, Clone, PartialEq)]
pub enum OracleSeries {
    Exact(PowerSeries<BigRational>),
    Float(PowerSeries<f64>),
}

impl OracleSeries {
    pub fn to_f64(&self) -> PowerSeries<f64> {
        match self {
            OracleSeries::Exact(s) => s.to_f64(),
            OracleSeries::Float(s) => s.clone(),
        }
    }
}

pub const ORACLE_IDS: &[&str] = &[
    "function-1",
    "function-2",
    "function-3",
    "debye-huckel",
    "stirling",
    "integral-1",
    "erfc",
    "integral-2",
    "mittag-leffler",
    "partition-phi4",
    "oscillator",
    "scalar-field",
    "branched-polymer",
    "string",
];

pub fn oracle_expand(function_id: &str, order: usize) -> Result<OracleSeries> {
    let n = order + 1;
    Ok(match function_id {
        "function-1" => OracleSeries::Exact(function_one(n)),
        "function-2" => OracleSeries::Float(function_two(n)),
        "function-3" => OracleSeries::Float(function_three(n)),
        "debye-huckel" => OracleSeries::Exact(PowerSeries::new(
            (0..n).map(|k| q(2 * sign(k), 1) / fact(k + 2)).collect(),
        )),
        "stirling" => OracleSeries::Exact(stirling(n)),
        "integral-1" => OracleSeries::Exact(PowerSeries::new(
            (0..n)
                .map(|k| {
                    let m = k / 2;
                    let c = q(sign(m), 1) * fact(2 * m);
                    if k % 2 == 0 { c } else { c * q(2, 1) }
                })
                .collect(),
        )),
        "erfc" => OracleSeries::Float(erfc_minus(n)),
        "integral-2" => {
            let e = erfc_minus(n);
            OracleSeries::Float(e.mul(&inv_one_plus_exp_minus(n)))
        }
        "mittag-leffler" => OracleSeries::Float(PowerSeries::new(
            (0..n).map(|k| sign(k) as f64 / gamma_half_plus_one(k)).collect(),
        )),
        "partition-phi4" => OracleSeries::Exact(PowerSeries::new(
            (0..n)
                .map(|k| {
                    q(sign(k), 1) * fact(4 * k) / (pow_int(16, k) * fact(2 * k) * fact(k))
                })
                .collect(),
        )),
        "oscillator" => OracleSeries::Exact(bender_wu(n)),
        "scalar-field" => OracleSeries::Exact(scalar_field(n)),
        "branched-polymer" => {
            let mut c = Vec::with_capacity(n);
            let mut term = q(1, 1);
            for k in 0..n {
                c.push(term.clone());
                // (-3/2)^{k+1} / (3/2)_{k+1}
                term = term * q(-3, 2) / (q(3, 2) + q(k as i64, 1));
            }
            OracleSeries::Exact(PowerSeries::new(c))
        }
        "string" => OracleSeries::Exact(string(n)),
        other => return Err(Error::UnknownFunction(other.to_string())),
    })
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) { 1 } else { -1 }
}

fn fact(k: usize) -> BigRational {
    BigRational::from_integer((1..=k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)))
}

fn pow_int(b: i64, e: usize) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(b), e))
}

fn binomial_half(n: usize) -> Vec<BigRational> {
    // coefficients of (1 + u)^{1/2}
    let mut c = Vec::with_capacity(n);
    let mut term = q(1, 1);
    for k in 0..n {
        c.push(term.clone());
        term = term * (q(1, 2) - q(k as i64, 1)) / q(k as i64 + 1, 1);
    }
    c
}

/// `(sqrt(4 + x) - 1)/2 = (1 + x/4)^{1/2} - 1/2`.
fn function_one(n: usize) -> PowerSeries<BigRational> {
    let b = binomial_half(n);
    PowerSeries::new(
        b.into_iter()
            .enumerate()
            .map(|(k, c)| if k == 0 { c - q(1, 2) } else { c / pow_int(4, k) })
            .collect(),
    )
}

fn arctan(n: usize) -> PowerSeries<f64> {
    PowerSeries::new((0..n).map(|k| if k % 2 == 1 { sign(k / 2) as f64 / k as f64 } else { 0.0 }).collect())
}

/// `(2/pi) arccot(-x) exp(1 - 1/(1+x))` with `arccot(-x) = pi/2 + arctan x`.
fn function_two(n: usize) -> PowerSeries<f64> {
    let lead = arctan(n).scale(&(2.0 / PI)).add(&PowerSeries::one(n - 1));
    // x/(1+x) = x - x^2 + ...
    let u = PowerSeries::new((0..n).map(|k| if k == 0 { 0.0 } else { -(sign(k) as f64) }).collect());
    lead.mul(&series_exp(&u).expect("zero constant"))
}

/// `1/(1 + e^{-x})`.
fn inv_one_plus_exp_minus(n: usize) -> PowerSeries<f64> {
    let mut d: Vec<f64> = Vec::with_capacity(n);
    let mut f = 1.0;
    for k in 0..n {
        if k > 0 {
            f *= k as f64;
        }
        d.push(sign(k) as f64 / f);
    }
    d[0] += 1.0;
    let half = PowerSeries::new(d.iter().map(|c| c / 2.0).collect());
    series_pow(&half, &-1.0).expect("unit constant").scale(&0.5)
}

/// `arccot(-x)/(1 + e^{-x})`.
fn function_three(n: usize) -> PowerSeries<f64> {
    let lead = arctan(n).add(&PowerSeries::one(n - 1).scale(&(PI / 2.0)));
    lead.mul(&inv_one_plus_exp_minus(n))
}

/// `erfc(-x) = 1 + (2/sqrt pi) sum (-1)^m x^{2m+1} / (m! (2m+1))`.
fn erfc_minus(n: usize) -> PowerSeries<f64> {
    let c = 2.0 / PI.sqrt();
    PowerSeries::new(
        (0..n)
            .map(|k| match k {
                0 => 1.0,
                _ if k % 2 == 1 => {
                    let m = k / 2;
                    c * sign(m) as f64 / (fact(m).to_f64() * k as f64)
                }
                _ => 0.0,
            })
            .collect(),
    )
}

/// `Gamma(k/2 + 1)`.
fn gamma_half_plus_one(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        fact(k / 2).to_f64()
    } else {
        // Gamma(m + 3/2) = sqrt(pi) (2m+2)! / (4^{m+1} (m+1)!)
        let m = k / 2;
        PI.sqrt() * (fact(2 * m + 2) / (pow_int(4, m + 1) * fact(m + 1))).to_f64()
    }
}

fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![q(1, 1)];
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigRational::one();
        for j in 0..m {
            acc += binom.clone() * b[j].clone();
            binom *= q((m + 1 - j) as i64, (j + 1) as i64);
        }
        b.push(-acc / q(m as i64 + 1, 1));
    }
    b
}

/// Reduced Stirling series `exp(sum_j B_{2j}/(2j(2j-1)) x^{2j-1})`.
fn stirling(n: usize) -> PowerSeries<BigRational> {
    let b = bernoulli(n + 1);
    let mut l = vec![BigRational::zero(); n];
    for (k, slot) in l.iter_mut().enumerate() {
        if k % 2 == 1 {
            let two_j = k + 1;
            *slot = b[two_j].clone() / q((two_j * (two_j - 1)) as i64, 1);
        }
    }
    series_exp(&PowerSeries::new(l)).expect("zero constant")
}

/// Ground-state energy series of `-1/2 d^2 + x^2/2 + g x^4` by the Bender-Wu
/// recursion on `psi = e^{-x^2/2} sum g^n P_n(x)`, `P_n = sum_i p[n][i] x^{2i}`.
fn bender_wu(n: usize) -> PowerSeries<BigRational> {
    let mut p: Vec<Vec<BigRational>> = vec![vec![q(1, 1)]];
    let mut e = vec![q(1, 2)];
    for order in 1..n {
        let top = 2 * order;
        let mut row = vec![BigRational::zero(); top + 2];
        let get = |p: &Vec<Vec<BigRational>>, m: usize, i: usize| -> BigRational {
            p.get(m).and_then(|r| r.get(i)).cloned().unwrap_or_else(BigRational::zero)
        };
        for i in (1..=top).rev() {
            let mut acc = BigRational::zero();
            for j in 1..order {
                acc += e[j].clone() * get(&p, order - j, i);
            }
            if i >= 2 {
                acc -= get(&p, order - 1, i - 2);
            }
            acc += q(((i + 1) * (2 * i + 1)) as i64, 1) * row[i + 1].clone();
            row[i] = acc / q(2 * i as i64, 1);
        }
        e.push(-row[1].clone());
        row.truncate(top + 1);
        p.push(row);
    }
    PowerSeries::new(e)
}

/// Reduced free-energy series `exp(2 sum_n l_n n! x^n)`, where `l` is the
/// log-series of `e^{-u} I_0(u)` integrated term-wise against `e^{-t}`.
fn scalar_field(n: usize) -> PowerSeries<BigRational> {
    let i0: Vec<BigRational> = (0..n)
        .map(|k| if k % 2 == 0 { q(1, 1) / (pow_int(4, k / 2) * fact(k / 2) * fact(k / 2)) } else { BigRational::zero() })
        .collect();
    let em: Vec<BigRational> = (0..n).map(|k| q(sign(k), 1) / fact(k)).collect();
    let prod = PowerSeries::new(em).mul(&PowerSeries::new(i0));
    let l = series_log(&prod).expect("unit constant");
    let g: Vec<BigRational> = l.coeffs().iter().enumerate().map(|(k, c)| q(2, 1) * c.clone() * fact(k)).collect();
    series_exp(&PowerSeries::new(g)).expect("zero constant")
}

/// Bracket of `1 + g^2/32 + (g/4) sqrt(1 + g^2/64)`.
fn string(n: usize) -> PowerSeries<BigRational> {
    let b = binomial_half(n);
    let mut c = vec![BigRational::zero(); n];
    c[0] = q(1, 1);
    if n > 2 {
        c[2] += q(1, 32);
    }
    for (j, bj) in b.iter().enumerate() {
        let k = 2 * j + 1;
        if k < n {
            c[k] += bj.clone() / pow_int(64, j) / q(4, 1);
        }
    }
    PowerSeries::new(c)
}
