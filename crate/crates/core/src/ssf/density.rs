use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::cov::trace_measure;
use crate::error::Result;
use crate::functions::{PiecewisePolynomial, TestFunction};
use crate::linalg::{check_dims, HermitianOperator, Matrix};

/// How a spectral shift density was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Construction {
    /// Difference of eigenvalue counting functions, order 1 only.
    Counting,
    /// Peano-kernel expansion of the remainder trace over eigen-tuples.
    Bspline,
    /// Least-squares fit against the trace functional on a bump family.
    Reconstruction,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Counting => "counting",
            Construction::Bspline => "bspline",
            Construction::Reconstruction => "reconstruction",
        }
    }
}

/// `eta_m` as a real piecewise polynomial.
#[derive(Clone, Debug)]
pub struct SpectralShiftDensity {
    pub order: usize,
    pub density: PiecewisePolynomial,
    pub construction: Construction,
    /// Largest imaginary coefficient discarded when taking the real part.
    pub imag_residue: f64,
    /// Coefficient scale the residue is measured against.
    pub scale: f64,
    /// Total variation of the atomic part, expected to vanish.
    pub atomic_mass: f64,
}

impl SpectralShiftDensity {
    /// `int f^(m) eta_m`, adaptive per interval.
    pub fn pair(&self, f: &TestFunction, tol: f64) -> Result<Complex64> {
        let m = self.order;
        let mut err = None;
        let v = self.density.integrate_against(
            |x| match f.derivative(x, m) {
                Ok(y) => y,
                Err(e) => {
                    err.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            },
            &f.singular_points(),
            tol,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// `int |eta|`.
    pub fn l1_norm(&self) -> f64 {
        self.density.l1_norm()
    }

    /// `int |eta(x)| (1+|x|)^{-exponent} dx`.
    pub fn weighted_l1(&self, exponent: f64) -> f64 {
        self.density.weighted_abs_integral(|x| libm::pow(1.0 + libm::fabs(x), -exponent), &[0.0])
    }
}

/// Method selector for [`ssf_compute`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsfMethod {
    Counting,
    Bspline,
}

/// `(H, H+V, H, ..., H)` with `m + 1` entries.
pub fn remainder_operators(h: &HermitianOperator, v: &HermitianOperator, m: usize) -> Result<Vec<HermitianOperator>> {
    let mut ops = vec![h.clone(), h.add(v)?];
    ops.extend(core::iter::repeat(h.clone()).take(m.saturating_sub(1)));
    Ok(ops)
}

/// The spectral shift function of order `m` for the pair `(H, H+V)`.
pub fn ssf_compute(h: &HermitianOperator, v: &HermitianOperator, m: usize, method: SsfMethod) -> Result<SpectralShiftDensity> {
    check_dims(h.dim(), v.dim())?;
    if m == 0 {
        return crate::error::invalid("spectral shift order must be at least 1");
    }
    match method {
        SsfMethod::Counting => {
            if m != 1 {
                return crate::error::invalid("counting construction exists for order 1 only");
            }
            counting(h, v)
        }
        SsfMethod::Bspline => bspline(h, v, m),
    }
}

fn counting(h: &HermitianOperator, v: &HermitianOperator) -> Result<SpectralShiftDensity> {
    let hv = h.add(v)?;
    let a = h.clustered_eigenvalues(h.default_cluster_tolerance());
    let b = hv.clustered_eigenvalues(hv.default_cluster_tolerance());
    let mut grid: Vec<f64> = a.iter().chain(&b).copied().collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let count = |s: &[f64], x: f64| s.iter().filter(|&&l| l <= x).count() as f64;
    let mut breaks = Vec::new();
    let mut coeffs = Vec::new();
    if grid.len() >= 2 {
        for w in grid.windows(2) {
            coeffs.push(vec![Complex64::new(count(&a, w[0]) - count(&b, w[0]), 0.0)]);
        }
        breaks = grid;
    }
    let density = PiecewisePolynomial::new(breaks, coeffs, Vec::new())?;
    Ok(SpectralShiftDensity { order: 1, density, construction: Construction::Counting, imag_residue: 0.0, scale: 1.0, atomic_mass: 0.0 })
}

fn bspline(h: &HermitianOperator, v: &HermitianOperator, m: usize) -> Result<SpectralShiftDensity> {
    let d = h.dim();
    let ops = remainder_operators(h, v, m)?;
    let args = vec![v.matrix().clone(); m];
    let measure = trace_measure(&Matrix::identity(d), &args, &ops)?;
    let raw = measure.kernel_density;
    let scale = 1.0 + raw.max_coeff();
    Ok(SpectralShiftDensity {
        order: m,
        imag_residue: raw.max_imag(),
        scale,
        atomic_mass: raw.atomic_mass(),
        density: raw.real_part(),
        construction: Construction::Bspline,
    })
}

/// `Tr R_{m,H,f}(V)` by the direct Taylor remainder.
pub fn remainder_trace(f: &TestFunction, h: &HermitianOperator, v: &HermitianOperator, m: usize) -> Result<Complex64> {
    Ok(crate::moi::taylor_remainder(f, h, v, m, crate::moi::RemainderMethod::Direct)?.trace())
}
