use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::density::{remainder_trace, Construction, SpectralShiftDensity};
use crate::error::Result;
use crate::functions::{merge_nodes, PiecewisePolynomial, TestFunction};
use crate::linalg::{check_dims, svd, HermitianOperator, Matrix};
use crate::quadrature::{gauss_legendre, integrate_gl};

/// Minimum number of bump functions used by [`ssf_reconstruct`].
pub const RECONSTRUCTION_BUMPS: usize = 50;
/// Relative singular value cutoff of the least-squares solve.
pub const SVD_CUTOFF: f64 = 1e-11;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Bumps `(1 - t^2)^{m+2}` on three width levels, centered inside `[lo, hi]`.
pub fn reconstruction_family(lo: f64, hi: f64, m: usize, count: usize) -> Result<Vec<TestFunction>> {
    let len = hi - lo;
    let levels = [0.3, 0.17, 0.09];
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let level = k % levels.len();
        let per = (count - level).div_ceil(levels.len());
        let slot = k / levels.len();
        let w = levels[level] * len;
        let frac = if per > 1 { slot as f64 / (per - 1) as f64 } else { 0.5 };
        // a small level-dependent offset keeps centers of different levels apart
        let c = lo + w + (len - 2.0 * w) * frac + 0.013 * len * level as f64 * (1.0 - 2.0 * frac);
        out.push(TestFunction::poly_bump(c - w, c + w, m as u32 + 2)?);
    }
    Ok(out)
}

/// `eta_m` recovered from traces alone: the least-squares piecewise polynomial of degree `< m`
/// on the spectral hull widened by one on each side, matched to `Tr R_m(f)` on a bump family.
///
/// The result agrees with the B-spline density only up to a polynomial of degree `< m`.
pub fn ssf_reconstruct(h: &HermitianOperator, v: &HermitianOperator, m: usize) -> Result<SpectralShiftDensity> {
    check_dims(h.dim(), v.dim())?;
    if m == 0 {
        return crate::error::invalid("spectral shift order must be at least 1");
    }
    let hv = h.add(v)?;
    let mut spec: Vec<f64> = h.eigenvalues().iter().chain(hv.eigenvalues()).copied().collect();
    spec.sort_by(f64::total_cmp);
    let mut knots: Vec<f64> = merge_nodes(&spec).into_iter().map(|(x, _)| x).collect();
    let (lo, hi) = (knots[0] - 1.0, knots[knots.len() - 1] + 1.0);
    knots.insert(0, lo);
    knots.push(hi);
    let pieces = knots.len() - 1;
    let unknowns = pieces * m;
    let count = RECONSTRUCTION_BUMPS.max(2 * unknowns);
    let family = reconstruction_family(lo, hi, m, count)?;
    let rule = gauss_legendre(m + 12);

    let mut a = Matrix::zeros(count, unknowns);
    let mut rhs = vec![0.0; count];
    for (k, f) in family.iter().enumerate() {
        rhs[k] = remainder_trace(f, h, v, m)?.re;
        let (fa, fb) = f.support().unwrap_or((lo, hi));
        for i in 0..pieces {
            let (x0, x1) = (knots[i].max(fa), knots[i + 1].min(fb));
            if !(x1 > x0) {
                continue;
            }
            let mid = 0.5 * (knots[i] + knots[i + 1]);
            let half = 0.5 * (knots[i + 1] - knots[i]);
            for r in 0..m {
                let val = integrate_gl(
                    |x| f.derivative(x, m).unwrap_or(ZERO) * libm::pow((x - mid) / half, r as f64),
                    x0,
                    x1,
                    &rule,
                );
                a[(k, i * m + r)] = Complex64::new(val.re, 0.0);
            }
        }
    }
    let norms: Vec<f64> =
        (0..unknowns).map(|j| libm::sqrt((0..count).map(|k| a[(k, j)].norm_sqr()).sum::<f64>())).collect();
    for k in 0..count {
        for (j, &s) in norms.iter().enumerate() {
            if s > 0.0 {
                a[(k, j)] /= s;
            }
        }
    }
    let dec = svd(&a)?;
    let smax = dec.sigma.first().copied().unwrap_or(0.0);
    let mut x = vec![0.0; unknowns];
    for (l, &s) in dec.sigma.iter().enumerate() {
        if !(s > SVD_CUTOFF * smax) {
            break;
        }
        let c = (0..count).map(|k| dec.u[(k, l)].conj() * rhs[k]).sum::<Complex64>() / s;
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += (dec.w[(j, l)] * c).re;
        }
    }
    let mut coeffs = Vec::with_capacity(pieces);
    for i in 0..pieces {
        let half = 0.5 * (knots[i + 1] - knots[i]);
        coeffs.push(
            (0..m)
                .map(|r| {
                    let j = i * m + r;
                    let c = if norms[j] > 0.0 { x[j] / norms[j] } else { 0.0 };
                    Complex64::new(c / libm::pow(half, r as f64), 0.0)
                })
                .collect(),
        );
    }
    let density = PiecewisePolynomial::new(knots, coeffs, Vec::new())?;
    let scale = 1.0 + density.max_coeff();
    Ok(SpectralShiftDensity { order: m, density, construction: Construction::Reconstruction, imag_residue: 0.0, scale, atomic_mass: 0.0 })
}

/// Polynomial fitted to `eta_b - eta_a` and the `L^1` size of what it misses.
#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessFit {
    /// Ascending powers of `x`, degree `< m`.
    pub coeffs: Vec<f64>,
    /// `|| eta_b - eta_a - p ||_1` on the joint support, atoms included.
    pub residual: f64,
    /// `1 + ||eta_a||_1`.
    pub scale: f64,
}

impl UniquenessFit {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

/// Continuous least-squares fit of `eta_b - eta_a` by a polynomial of degree `< m` on the joint support.
pub fn uniqueness_fit(eta_a: &SpectralShiftDensity, eta_b: &SpectralShiftDensity, m: usize) -> Result<UniquenessFit> {
    if m == 0 {
        return crate::error::invalid("polynomial degree bound needs m >= 1");
    }
    let one = Complex64::new(1.0, 0.0);
    let diff = PiecewisePolynomial::linear_combination(&[(one, &eta_b.density), (-one, &eta_a.density)]);
    let scale = 1.0 + eta_a.l1_norm();
    let support = match (eta_a.density.support(), eta_b.density.support()) {
        (Some(p), Some(q)) => Some((p.0.min(q.0), p.1.max(q.1))),
        (p, q) => p.or(q),
    };
    let (lo, hi) = match support {
        Some((lo, hi)) if hi > lo => (lo, hi),
        _ => return Ok(UniquenessFit { coeffs: vec![0.0; m], residual: diff.l1_norm(), scale }),
    };
    let diff_smooth = diff.without_atoms();
    let alpha = 2.0 / (hi - lo);
    let beta = -(hi + lo) / (hi - lo);
    // Legendre polynomials in s = alpha x + beta, as monomials in s
    let mut legendre: Vec<Vec<f64>> = vec![vec![1.0], vec![0.0, 1.0]];
    for r in 2..m {
        let mut p = vec![0.0; r + 1];
        for (i, c) in legendre[r - 1].iter().enumerate() {
            p[i + 1] += (2 * r - 1) as f64 * c / r as f64;
        }
        for (i, c) in legendre[r - 2].iter().enumerate() {
            p[i] -= (r - 1) as f64 * c / r as f64;
        }
        legendre.push(p);
    }
    let mut in_s = vec![0.0; m];
    for (r, leg) in legendre.iter().take(m).enumerate() {
        let proj = diff_smooth.integrate_against(
            |x| Complex64::new(crate::poly::eval_real(leg, alpha * x + beta), 0.0),
            &[],
            1e-15,
        );
        let a_r = (2 * r + 1) as f64 / (hi - lo) * proj.re;
        for (i, c) in leg.iter().enumerate() {
            in_s[i] += a_r * c;
        }
    }
    // substitute s = alpha x + beta
    let mut coeffs = vec![0.0; m];
    let mut power = vec![1.0];
    for c in &in_s {
        for (i, p) in power.iter().enumerate() {
            coeffs[i] += c * p;
        }
        power = crate::poly::mul_real(&power, &[beta, alpha]);
    }
    let fit = PiecewisePolynomial::single(lo, hi, &crate::poly::to_complex(&coeffs))?;
    let miss = PiecewisePolynomial::linear_combination(&[(one, &diff), (-one, &fit)]);
    Ok(UniquenessFit { coeffs, residual: miss.l1_norm(), scale })
}
