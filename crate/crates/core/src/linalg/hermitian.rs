use alloc::vec::Vec;

use num_complex::Complex64;

use super::eigen::hermitian_eigen;
use super::Matrix;
use crate::error::{Error, Result};

/// Largest supported operator dimension.
pub const MAX_DIM: usize = 64;
/// Relative deviation below which symmetrization is silent.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative deviation above which the input is rejected.
pub const HERMITIAN_REJECT: f64 = 1e-6;

/// Dense self-adjoint operator with its eigen-decomposition computed at construction.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    matrix: Matrix,
    correction: f64,
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl HermitianOperator {
    /// Validates and symmetrizes `m` as `(m + m*)/2`.
    ///
    /// Deviations up to [`HERMITIAN_TOL`] are absorbed silently; larger ones up to
    /// [`HERMITIAN_REJECT`] are corrected and reported through [`Self::symmetrization_correction`].
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() == 0 {
            return Err(Error::DimensionOutOfRange { dim: 0, max: MAX_DIM });
        }
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), actual: m.cols() });
        }
        if m.rows() > MAX_DIM {
            return Err(Error::DimensionOutOfRange { dim: m.rows(), max: MAX_DIM });
        }
        if m.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("non-finite matrix entry".into()));
        }
        let deviation = m.hermitian_deviation();
        if deviation > HERMITIAN_REJECT {
            return Err(Error::NotHermitian { deviation });
        }
        let sym = (&m + &m.adjoint()).scale_real(0.5);
        let correction = (&sym - &m).max_abs() / m.max_abs().max(f64::MIN_POSITIVE);
        let eig = hermitian_eigen(&sym)?;
        Ok(Self { matrix: sym, correction, eigenvalues: eig.values, eigenvectors: eig.vectors })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(Matrix::from_real_rows(rows))
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        Self::new(Matrix::diag_real(values))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(Matrix::zeros(dim, dim))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Relative size of the symmetrization applied at construction.
    pub fn symmetrization_correction(&self) -> f64 {
        self.correction
    }

    /// True when the correction exceeded [`HERMITIAN_TOL`].
    pub fn had_warning(&self) -> bool {
        self.correction > HERMITIAN_TOL
    }

    /// Ascending eigenvalues, with multiplicity.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary whose columns are eigenvectors matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    /// Operator norm, the largest eigenvalue modulus.
    pub fn norm(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        check_dims(self.dim(), other.dim())?;
        Self::new(&self.matrix + &other.matrix)
    }

    pub fn sub(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        check_dims(self.dim(), other.dim())?;
        Self::new(&self.matrix - &other.matrix)
    }

    pub fn scale(&self, t: f64) -> Result<HermitianOperator> {
        Self::new(self.matrix.scale_real(t))
    }

    /// `(H - z)^{-1}` by Gaussian elimination.
    pub fn resolvent(&self, z: Complex64) -> Result<Matrix> {
        self.matrix.shift(z).inverse()
    }

    /// `(H - i)^{-1}` by Gaussian elimination.
    pub fn resolvent_i(&self) -> Matrix {
        self.resolvent(crate::I).expect("H - i is invertible for self-adjoint H")
    }

    /// Default clustering threshold `1e-9 (1 + ||H||)`.
    pub fn default_cluster_tolerance(&self) -> f64 {
        1e-9 * (1.0 + self.norm())
    }

    /// Eigenvalues replaced by the mean of their cluster, as used by the spectral sums.
    pub fn clustered_eigenvalues(&self, tol: f64) -> Vec<f64> {
        let groups = cluster_groups(&self.eigenvalues, tol);
        let mut out = Vec::with_capacity(self.dim());
        for g in &groups {
            let vals = g.iter().map(|&k| self.eigenvalues[k]);
            let (lo, hi) = vals.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
            let mean = (crate::sum::sum_f64(vals) / g.len() as f64).clamp(lo, hi);
            out.extend(core::iter::repeat(mean).take(g.len()));
        }
        out
    }

    pub fn spectral_decompose(&self, cluster_tolerance: f64) -> Result<SpectralDecomposition> {
        spectral_decompose(self, cluster_tolerance)
    }
}

pub(crate) fn check_dims(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::DimensionMismatch { expected, actual });
    }
    Ok(())
}

fn cluster_groups(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (k, &v) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if v - values[*g.last().unwrap()] <= tol => g.push(k),
            _ => groups.push(alloc::vec![k]),
        }
    }
    groups
}

/// Clustered eigenvalues with their spectral projections.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub projections: Vec<Matrix>,
    pub multiplicities: Vec<usize>,
    pub cluster_tolerance: f64,
}

/// Groups eigenvalues closer than `cluster_tolerance` and sums their rank-one projections.
pub fn spectral_decompose(h: &HermitianOperator, cluster_tolerance: f64) -> Result<SpectralDecomposition> {
    if !(cluster_tolerance >= 0.0) {
        return Err(Error::Invalid("cluster tolerance must be nonnegative".into()));
    }
    let n = h.dim();
    let u = h.eigenvectors();
    let groups = cluster_groups(h.eigenvalues(), cluster_tolerance);
    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut projections = Vec::with_capacity(groups.len());
    let mut multiplicities = Vec::with_capacity(groups.len());
    for g in &groups {
        eigenvalues.push(crate::sum::sum_f64(g.iter().map(|&k| h.eigenvalues()[k])) / g.len() as f64);
        let p = Matrix::from_fn(n, n, |i, j| g.iter().fold(Complex64::new(0.0, 0.0), |acc, &k| acc + u[(i, k)] * u[(j, k)].conj()));
        projections.push(p);
        multiplicities.push(g.len());
    }
    Ok(SpectralDecomposition { eigenvalues, projections, multiplicities, cluster_tolerance })
}

impl SpectralDecomposition {
    /// `sum_i f(lambda_i) P_i`.
    pub fn apply(&self, mut f: impl FnMut(f64) -> Result<Complex64>) -> Result<Matrix> {
        let n = self.projections[0].rows();
        let mut out = Matrix::zeros(n, n);
        for (lam, p) in self.eigenvalues.iter().zip(&self.projections) {
            out = &out + &p.scale(f(*lam)?);
        }
        Ok(out)
    }

    pub fn reconstruct(&self) -> Matrix {
        self.apply(|x| Ok(Complex64::new(x, 0.0))).expect("identity map is total")
    }
}

/// `H - i` is always invertible; `(H - i)^{-1}` from the spectral data.
pub fn spectral_resolvent_i(h: &HermitianOperator) -> Matrix {
    let u = h.eigenvectors();
    let d: Vec<Complex64> = h.eigenvalues().iter().map(|&x| Complex64::new(1.0, 0.0) / crate::weight_u(x)).collect();
    let n = h.dim();
    Matrix::from_fn(n, n, |i, j| (0..n).fold(Complex64::new(0.0, 0.0), |acc, k| acc + u[(i, k)] * d[k] * u[(j, k)].conj()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_x_projections() {
        let h = HermitianOperator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let d = h.spectral_decompose(h.default_cluster_tolerance()).unwrap();
        assert_eq!(d.eigenvalues.len(), 2);
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-15 && (d.eigenvalues[1] - 1.0).abs() < 1e-15);
        let p0 = Matrix::from_real_rows(&[&[0.5, -0.5], &[-0.5, 0.5]]);
        let p1 = Matrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!((&d.projections[0] - &p0).max_abs() < 1e-15);
        assert!((&d.projections[1] - &p1).max_abs() < 1e-15);
    }

    #[test]
    fn identity_single_cluster() {
        let h = HermitianOperator::new(Matrix::identity(3)).unwrap();
        let d = h.spectral_decompose(h.default_cluster_tolerance()).unwrap();
        assert_eq!(d.eigenvalues, alloc::vec![1.0]);
        assert!((&d.projections[0] - &Matrix::identity(3)).max_abs() < 1e-15);
    }

    #[test]
    fn near_degenerate_cluster() {
        let vals = [0.3, 0.3 + 1e-12, 5.0];
        let h = HermitianOperator::diag(&vals).unwrap();
        let d = h.spectral_decompose(1e-9).unwrap();
        // brute-force gap scan: clusters split where consecutive gaps exceed the tolerance
        let mut sorted = vals.to_vec();
        sorted.sort_by(f64::total_cmp);
        let splits = sorted.windows(2).filter(|w| w[1] - w[0] > 1e-9).count();
        assert_eq!(d.eigenvalues.len(), splits + 1);
        assert_eq!(d.multiplicities, alloc::vec![2, 1]);
        assert!((d.eigenvalues[0] - 0.3).abs() < 1e-12 && d.eigenvalues[1] == 5.0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn small_asymmetry_is_corrected_with_warning() {
        let m = Matrix::from_real_rows(&[&[1.0, 1.0 + 1e-9], &[1.0, 2.0]]);
        let h = HermitianOperator::new(m).unwrap();
        assert!(h.had_warning());
        assert!(h.matrix().hermitian_deviation() == 0.0);
    }

    #[test]
    fn dimension_cap() {
        assert!(matches!(HermitianOperator::zero(65), Err(Error::DimensionOutOfRange { .. })));
    }

    #[test]
    fn spectral_and_direct_resolvents_agree() {
        let h = HermitianOperator::from_real_rows(&[&[1.0, 2.0, 0.0], &[2.0, -1.0, 0.5], &[0.0, 0.5, 3.0]]).unwrap();
        let a = spectral_resolvent_i(&h);
        let b = h.resolvent_i();
        assert!((&a - &b).max_abs() < 1e-14);
    }
}
