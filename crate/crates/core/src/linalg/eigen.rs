use alloc::vec::Vec;

use num_complex::Complex64;

use super::Matrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// Column `k` is the unit eigenvector for `values[k]`.
    pub vectors: Matrix,
}

/// Cyclic complex Jacobi eigensolver. Only the Hermitian part of `a` is used.
pub fn hermitian_eigen(a: &Matrix) -> Result<EigenSystem> {
    let n = a.rows();
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let h = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = h;
            m[(j, i)] = h.conj();
        }
    }
    let mut v = Matrix::identity(n);
    let scale = m.frobenius();
    let trivial = n <= 1 || scale == 0.0;
    let mut sweeps = 0;
    while !trivial {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[(i, j)].norm_sqr();
            }
        }
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let b = m[(p, q)];
                let bn = b.norm();
                if bn == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                if bn <= 1e-17 * scale {
                    m[(p, q)] = Complex64::new(0.0, 0.0);
                    m[(q, p)] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let phase = b / bn;
                let tau = (aqq - app) / (2.0 * bn);
                let t = if tau >= 0.0 { 1.0 } else { -1.0 } / (libm::fabs(tau) + libm::sqrt(1.0 + tau * tau));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                let gpp = Complex64::new(c, 0.0);
                let gpq = Complex64::new(s, 0.0);
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                for k in 0..n {
                    let xp = m[(k, p)];
                    let xq = m[(k, q)];
                    m[(k, p)] = xp * gpp + xq * gqp;
                    m[(k, q)] = xp * gpq + xq * gqq;
                }
                for k in 0..n {
                    let xp = m[(p, k)];
                    let xq = m[(q, k)];
                    m[(p, k)] = gpp.conj() * xp + gqp.conj() * xq;
                    m[(q, k)] = gpq.conj() * xp + gqq.conj() * xq;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let xp = v[(k, p)];
                    let xq = v[(k, q)];
                    v[(k, p)] = xp * gpp + xq * gqp;
                    v[(k, q)] = xp * gpq + xq * gqq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenSystem { values, vectors })
}
