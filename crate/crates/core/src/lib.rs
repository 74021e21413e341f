//! Operator calculus on finite-dimensional self-adjoint operators.
//!
//! The crate evaluates multiple operator integrals (MOIs) as exact spectral
//! sums, expands them with resolvent-weighted change-of-variables formulas,
//! and builds higher-order spectral shift functions as piecewise-polynomial
//! densities from Peano (B-spline) kernels of divided differences.
//!
//! Everything here is `no_std` and only needs `alloc`. File formats, the CLI
//! and parallel drivers live in the `specshift` companion crate.
#![no_std]

extern crate alloc;

pub mod approx;
pub mod cov;
mod error;
pub mod functions;
pub mod linalg;
pub mod moi;
pub mod poly;
pub mod quadrature;
pub mod ssf;
mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// The imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `u(x) = x - i`, the weight used throughout the expansions.
#[inline]
pub fn weight_u(x: f64) -> Complex64 {
    Complex64::new(x, -1.0)
}
