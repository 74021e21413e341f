use alloc::vec::Vec;

use num_complex::Complex64;

use super::density::{remainder_trace, ssf_compute, SpectralShiftDensity, SsfMethod};
use crate::cov::Parity;
use crate::error::{Error, Result};
use crate::functions::TestFunction;
use crate::linalg::HermitianOperator;

/// Per-function comparison of `Tr R_m(f)` with `int f^(m) eta_m`.
#[derive(Clone, Debug)]
pub struct TraceFormulaEntry {
    pub remainder_trace: Complex64,
    pub integral: Complex64,
    /// `|Tr R_m - int f^(m) eta_m| / (1 + |Tr R_m|)`.
    pub relative: f64,
}

#[derive(Clone, Debug)]
pub struct TraceFormulaReport {
    pub n: usize,
    pub parity: Parity,
    pub order: usize,
    pub entries: Vec<TraceFormulaEntry>,
    pub max_relative: f64,
    pub imag_residue: f64,
    pub atomic_mass: f64,
}

/// The weighted class `(m, k)` demanded of test functions: `(2n-1, 4n+2)` or `(2n, 4n+3)`.
pub fn trace_class_order(n: usize, parity: Parity) -> (u32, u32) {
    let m = parity.order(n) as u32;
    match parity {
        Parity::Odd => (m, 4 * n as u32 + 2),
        Parity::Even => (m, 4 * n as u32 + 3),
    }
}

/// Rejects functions outside the class required for order `m = parity.order(n)`.
pub fn check_family(n: usize, parity: Parity, family: &[TestFunction]) -> Result<()> {
    let (cn, ck) = trace_class_order(n, parity);
    for (i, f) in family.iter().enumerate() {
        let c = f.class_membership(cn, ck);
        if !c.member {
            return Err(Error::NotAdmissible(alloc::format!("family member {i}: {}", c.reason)));
        }
    }
    Ok(())
}

/// Checks `Tr R_m(f) = int f^(m) eta_m` over `family` with a freshly built B-spline density.
pub fn verify_trace_formula(
    h: &HermitianOperator,
    v: &HermitianOperator,
    n: usize,
    parity: Parity,
    family: &[TestFunction],
) -> Result<TraceFormulaReport> {
    if n == 0 {
        return crate::error::invalid("n must be positive");
    }
    check_family(n, parity, family)?;
    let eta = ssf_compute(h, v, parity.order(n), SsfMethod::Bspline)?;
    verify_with_density(h, v, n, parity, &eta, family)
}

/// As [`verify_trace_formula`] for a precomputed density.
pub fn verify_with_density(
    h: &HermitianOperator,
    v: &HermitianOperator,
    n: usize,
    parity: Parity,
    eta: &SpectralShiftDensity,
    family: &[TestFunction],
) -> Result<TraceFormulaReport> {
    let m = parity.order(n);
    if eta.order != m {
        return Err(Error::DimensionMismatch { expected: m, actual: eta.order });
    }
    let mut entries = Vec::with_capacity(family.len());
    for f in family {
        let lhs = remainder_trace(f, h, v, m)?;
        let rhs = eta.pair(f, 1e-14)?;
        entries.push(TraceFormulaEntry { remainder_trace: lhs, integral: rhs, relative: (lhs - rhs).norm() / (1.0 + lhs.norm()) });
    }
    let max_relative = entries.iter().fold(0.0_f64, |a, e| a.max(e.relative));
    Ok(TraceFormulaReport {
        n,
        parity,
        order: m,
        entries,
        max_relative,
        imag_residue: eta.imag_residue / eta.scale,
        atomic_mass: eta.atomic_mass,
    })
}
