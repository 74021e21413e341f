use alloc::vec::Vec;

use num_complex::Complex64;

use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Full singular value decomposition `A = U diag(sigma) W*`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Descending singular values, `min(rows, cols)` of them.
    pub sigma: Vec<f64>,
    /// Left singular vectors as columns (`rows x k`).
    pub u: Matrix,
    /// Right singular vectors as columns (`cols x k`).
    pub w: Matrix,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &Matrix) -> Result<Svd> {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd { sigma: t.sigma, u: t.w, w: t.u });
    }
    let (rows, cols) = (a.rows(), a.cols());
    let mut b = a.clone();
    let mut w = Matrix::identity(cols);
    let scale = a.frobenius();
    let tol = f64::EPSILON * rows as f64;
    let floor = (f64::EPSILON * scale) * (f64::EPSILON * scale);
    let mut sweeps = 0;
    if scale > 0.0 {
        loop {
            if sweeps == MAX_SWEEPS {
                return Err(Error::NoConvergence { sweeps });
            }
            sweeps += 1;
            let mut rotated = false;
            for p in 0..cols {
                for q in p + 1..cols {
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = Complex64::new(0.0, 0.0);
                    for k in 0..rows {
                        let x = b[(k, p)];
                        let y = b[(k, q)];
                        alpha += x.norm_sqr();
                        beta += y.norm_sqr();
                        gamma += x.conj() * y;
                    }
                    let gn = gamma.norm();
                    if gn <= tol * libm::sqrt(alpha * beta) || gn <= floor {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma / gn;
                    let zeta = (beta - alpha) / (2.0 * gn);
                    let t = if zeta >= 0.0 { 1.0 } else { -1.0 } / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                    let c = 1.0 / libm::sqrt(1.0 + t * t);
                    let s = t * c;
                    let gqp = -phase.conj() * s;
                    let gqq = phase.conj() * c;
                    for k in 0..rows {
                        let x = b[(k, p)];
                        let y = b[(k, q)];
                        b[(k, p)] = x * c + y * gqp;
                        b[(k, q)] = x * s + y * gqq;
                    }
                    for k in 0..cols {
                        let x = w[(k, p)];
                        let y = w[(k, q)];
                        w[(k, p)] = x * c + y * gqp;
                        w[(k, q)] = x * s + y * gqq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }
    let norms: Vec<f64> = (0..cols)
        .map(|j| libm::sqrt((0..rows).map(|k| b[(k, j)].norm_sqr()).sum::<f64>()))
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = Matrix::from_fn(rows, cols, |i, j| {
        let c = order[j];
        if norms[c] > 0.0 {
            b[(i, c)] / norms[c]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let w = Matrix::from_fn(cols, cols, |i, j| w[(i, order[j])]);
    Ok(Svd { sigma, u, w })
}

/// Singular values in descending order.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangular_reconstruction() {
        let a = Matrix::from_fn(2, 3, |i, j| Complex64::new((i + 2 * j) as f64, (i as f64) - 0.5 * j as f64));
        let s = svd(&a).unwrap();
        let rec = &(&s.u * &Matrix::diag_real(&s.sigma)) * &s.w.adjoint();
        assert!((&rec - &a).max_abs() < 1e-13);
        assert!(s.sigma[0] >= s.sigma[1]);
    }

    #[test]
    fn diagonal_values() {
        let s = singular_values(&Matrix::diag_real(&[3.0, -4.0])).unwrap();
        assert_eq!(s, alloc::vec![4.0, 3.0]);
    }
}
