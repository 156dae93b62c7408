//! Cyclic Jacobi eigenvalue iteration for real symmetric matrices.
//!
//! Each sweep visits every off-diagonal position `(p, q)`, `p < q`, in row
//! order and applies the plane rotation that zeroes it. Off-diagonal mass
//! decreases monotonically and convergence is quadratic once it is small.
//! The visiting order is fixed, so results are deterministic.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of the symmetric matrix `a`, ascending.
///
/// Only the upper triangle is read. Iteration stops once the off-diagonal
/// Frobenius norm falls below `1e-14` times the norm of the whole matrix,
/// which puts every eigenvalue well inside `1e-10` of exact for the
/// Laplacians handled here.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    assert!(a.is_square(), "eigenvalues of a non-square matrix");
    let n = a.nrows();
    let mut m = a.clone();
    for p in 0..n {
        for q in p + 1..n {
            m[(q, p)] = m[(p, q)];
        }
    }
    let scale = m.norm();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let target = 1e-14 * scale;

    let mut previous = f64::INFINITY;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        // a sweep that fails to reduce the residue has hit rounding level
        if off <= target || (off >= previous && off <= 1e-12 * scale) {
            let mut values: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
            values.sort_by(f64::total_cmp);
            return Ok(values);
        }
        previous = off;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, p, q);
            }
        }
    }
    Err(Error::NoConvergence(MAX_SWEEPS))
}

fn off_diagonal_norm(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            sum += 2.0 * m[(p, q)] * m[(p, q)];
        }
    }
    sum.sqrt()
}

/// Two-sided rotation in the `(p, q)` plane that annihilates `m[(p, q)]`.
fn rotate(m: &mut DMatrix<f64>, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = m[(p, p)];
    let aqq = m[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    // smaller root of t² + 2θt - 1 = 0
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = m.nrows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        m[(k, p)] = new_kp;
        m[(p, k)] = new_kp;
        m[(k, q)] = new_kq;
        m[(q, k)] = new_kq;
    }
    m[(p, p)] = app - t * apq;
    m[(q, q)] = aqq + t * apq;
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn diagonal_input() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, -1.0, 2.0]));
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        close(&symmetric_eigenvalues(&m).unwrap(), &[0.0, 2.0], 1e-14);
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        close(&symmetric_eigenvalues(&m).unwrap(), &[1.0, 3.0], 1e-14);
    }

    #[test]
    fn cycle_laplacian_spectrum() {
        // C_n eigenvalues are 2 - 2cos(2πk/n)
        for n in [4usize, 5, 9, 16] {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                let j = (i + 1) % n;
                m[(i, i)] += 1.0;
                m[(j, j)] += 1.0;
                m[(i, j)] -= 1.0;
                m[(j, i)] -= 1.0;
            }
            let mut expect: Vec<f64> = (0..n)
                .map(|k| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
                .collect();
            expect.sort_by(f64::total_cmp);
            close(&symmetric_eigenvalues(&m).unwrap(), &expect, 1e-12);
        }
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(symmetric_eigenvalues(&DMatrix::zeros(3, 3)).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn agrees_with_nalgebra() {
        let mut stream = crate::rng::Stream::new(11);
        for n in 1..=12 {
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = stream.uniform(-5.0, 5.0);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            let mut reference: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            close(&symmetric_eigenvalues(&m).unwrap(), &reference, 1e-10);
        }
    }
}
