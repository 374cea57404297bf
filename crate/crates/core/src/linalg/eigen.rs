//! Eigenvectors for a known simple real eigenvalue, by inverse iteration.

use super::matrix::BigMatrix;
use crate::error::{Error, Result};

/// Relative residual accepted for an eigenvector.
pub const EIGEN_TOLERANCE: f64 = 1e-9;

/// How to fix the global sign of an eigenvector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignRule {
    /// Make the largest-magnitude entry positive.
    Dominant,
    /// Every entry must come out positive.
    Positive,
    /// Entry `i` must be negative.
    NegativeAt(usize),
}

/// A unit-norm eigenvector with its relative residual `|Mx - theta x| / |x|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvector {
    pub vector: Vec<f64>,
    pub residual: f64,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Solves `a y = b` by Gaussian elimination with partial pivoting. A zero
/// pivot is replaced by a tiny multiple of the matrix scale, which is the
/// expected outcome when `a` is singular at working precision.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
            .expect("nonempty");
        a.swap(k, p);
        b.swap(k, p);
        if a[k][k].abs() < f64::EPSILON * scale {
            a[k][k] = f64::EPSILON * scale;
        }
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f != 0.0 {
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
    }
    let mut y = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * y[j]).sum();
        y[k] = (b[k] - s) / a[k][k];
    }
    y
}

/// Eigenvector of `m` for the simple real eigenvalue `theta`.
pub fn eigenvector(m: &BigMatrix, theta: f64, rule: SignRule) -> Result<Eigenvector> {
    let a = m.to_f64();
    let n = a.len();
    let shifted: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, &v)| if i == j { v - theta } else { v }).collect())
        .collect();
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64 / n as f64).collect();
    let mut residual = f64::INFINITY;
    for _ in 0..8 {
        let y = solve(shifted.clone(), x.clone());
        let ny = norm(&y);
        if !ny.is_finite() || ny == 0.0 {
            return Err(Error::IllConditioned(theta, f64::INFINITY));
        }
        x = y.into_iter().map(|v| v / ny).collect();
        let mx = mat_vec(&a, &x);
        residual = mx.iter().zip(&x).map(|(u, v)| (u - theta * v).powi(2)).sum::<f64>().sqrt();
        if residual <= 1e-14 * theta.abs().max(1.0) {
            break;
        }
    }
    if residual > EIGEN_TOLERANCE {
        return Err(Error::IllConditioned(theta, residual));
    }
    let flip = match rule {
        SignRule::Dominant | SignRule::Positive => {
            let k = (0..n).max_by(|&i, &j| x[i].abs().total_cmp(&x[j].abs())).expect("nonempty");
            x[k] < 0.0
        }
        SignRule::NegativeAt(i) => x[i] > 0.0,
    };
    if flip {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    if rule == SignRule::Positive && x.iter().any(|&v| v <= 0.0) {
        return Err(Error::CertificationFailed(format!(
            "eigenvector for {theta} is not positive: {x:?}"
        )));
    }
    Ok(Eigenvector { vector: x, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_closed_form() {
        let m = BigMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let theta = (3.0 + 5f64.sqrt()) / 2.0;
        let e = eigenvector(&m, theta, SignRule::Positive).unwrap();
        assert!(e.residual < 1e-12);
        let ratio = e.vector[0] / e.vector[1];
        assert!((ratio - (theta - 1.0)).abs() < 1e-12);
        let low = eigenvector(&m, 1.0 / theta, SignRule::NegativeAt(1)).unwrap();
        assert!(low.vector[1] < 0.0 && low.vector[0] > 0.0);
    }

    #[test]
    fn not_an_eigenvalue() {
        let m = BigMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert!(matches!(eigenvector(&m, 1.7, SignRule::Dominant), Err(Error::IllConditioned(..))));
    }
}
