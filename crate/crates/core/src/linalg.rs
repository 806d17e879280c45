//! Small dense solvers and polynomial roots.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalar::Scalar;

/// Gaussian elimination with partial pivoting. Returns `None` when a pivot is
/// negligible (exactly zero for rationals).
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|x| x.to_f64().abs()))
        .fold(0.0_f64, f64::max);
    for col in 0..n {
        let pivot = if T::EXACT {
            (col..n).find(|&r| !a[r][col].is_zero())?
        } else {
            (col..n).max_by(|&r, &s| {
                a[r][col].to_f64().abs().total_cmp(&a[s][col].to_f64().abs())
            })?
        };
        if a[pivot][col].is_negligible(scale) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..n {
                let v = a[col][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - v;
            }
            b[r] = b[r].clone() - b[col].clone() * f;
        }
    }
    let mut x = vec![T::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Some(x)
}

pub fn solve_complex(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    let scale = a.iter().flat_map(|row| row.iter().map(|x| x.norm())).fold(0.0_f64, f64::max);
    for col in 0..n {
        let pivot = (col..n).max_by(|&r, &s| a[r][col].norm().total_cmp(&a[s][col].norm()))?;
        if a[pivot][col].norm() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c] * f;
                a[r][c] -= v;
            }
            let v = b[col] * f;
            b[r] -= v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in r + 1..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

/// Roots of the monic polynomial `z^N + c[N-1] z^{N-1} + ... + c[0]`, from the
/// companion-matrix eigenvalues followed by Newton polishing.
pub fn monic_roots(c: &[f64]) -> Vec<Complex64> {
    let n = c.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![Complex64::new(-c[0], 0.0)],
        _ => {}
    }
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i];
    }
    let eig = m.complex_eigenvalues();
    eig.iter()
        .map(|&z| {
            let mut z = Complex64::new(z.re, z.im);
            for _ in 0..3 {
                let (p, dp) = horner_with_derivative(c, z);
                let next = z - p / dp;
                // Near multiple roots the step is noise over a vanishing derivative.
                if !next.is_finite() || horner_with_derivative(c, next).0.norm() >= p.norm() {
                    break;
                }
                z = next;
            }
            z
        })
        .collect()
}

fn horner_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}
