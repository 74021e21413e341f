//! Dense complex linear algebra for small self-adjoint operators.

mod eigen;
mod hermitian;
mod matrix;
mod resolvent;
mod schatten;
mod svd;

pub use eigen::{hermitian_eigen, EigenSystem};
pub use hermitian::{
    spectral_decompose, spectral_resolvent_i, HermitianOperator, SpectralDecomposition, HERMITIAN_REJECT,
    HERMITIAN_TOL, MAX_DIM,
};
pub(crate) use hermitian::check_dims;
pub use matrix::Matrix;
pub use resolvent::{factorization_residuals, resolvent_comparability, residual_scale, ResolventComparability};
pub use schatten::{op_norm, schatten, schatten_norm, SchattenIndex};
pub use svd::{singular_values, svd, Svd};

use crate::error::Result;
use crate::functions::TestFunction;
use num_complex::Complex64;

/// `f(H) = sum f(lambda_i) P_i` over clustered eigenvalues.
pub fn func_calculus(f: &TestFunction, h: &HermitianOperator) -> Result<Matrix> {
    let d = h.spectral_decompose(h.default_cluster_tolerance())?;
    d.apply(|x| f.eval(x))
}

/// `f(H)` for an arbitrary scalar map.
pub fn func_calculus_with(h: &HermitianOperator, f: impl FnMut(f64) -> Result<Complex64>) -> Result<Matrix> {
    let d = h.spectral_decompose(h.default_cluster_tolerance())?;
    d.apply(f)
}
