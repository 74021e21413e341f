use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{check_dims, op_norm, schatten, schatten_norm, HermitianOperator, Matrix, SchattenIndex};

/// Tolerance on `sum 1/alpha_j = 1`.
pub const HOLDER_TOL: f64 = 1e-12;

/// The mixed-norm product `p^J_alpha` and its factors.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub j_set: Vec<usize>,
    pub n: usize,
    /// `|J| / (n + |J|)`.
    pub r: f64,
    pub p_value: f64,
    /// `||U_j||` for every `j`.
    pub op_norms: Vec<f64>,
    /// `(j, ||(H_{j-1}-i)^{-1} U_j (H_j-i)^{-1}||_n)` for `j` in `J`.
    pub double_resolvent_norms: Vec<(usize, f64)>,
    /// `(j, ||U_j||_{alpha_j})` for `j` outside `J`.
    pub schatten_norms: Vec<(usize, f64)>,
}

/// `prod ||U_j||^r * prod_{j in J} ||(H_{j-1}-i)^{-1}U_j(H_j-i)^{-1}||_n^{1-r} * prod_{j not in J} ||U_j||_{alpha_j}^{1-r}`
/// with `r = |J|/(n+|J|)` and `H_{-1} = H_m`.
pub fn p_j_alpha(us: &[Matrix], hs: &[HermitianOperator], j_set: &[usize], alphas: &[SchattenIndex], n: usize) -> Result<BoundReport> {
    let len = us.len();
    if len == 0 {
        return crate::error::invalid("need at least one operator");
    }
    if hs.len() != len {
        return Err(Error::DimensionMismatch { expected: len, actual: hs.len() });
    }
    if alphas.len() != len {
        return Err(Error::DimensionMismatch { expected: len, actual: alphas.len() });
    }
    if n == 0 {
        return crate::error::invalid("n must be positive");
    }
    let d = hs[0].dim();
    for (u, h) in us.iter().zip(hs) {
        check_dims(d, h.dim())?;
        check_dims(d, u.rows())?;
        check_dims(d, u.cols())?;
    }
    let holder: f64 = alphas.iter().map(|a| a.reciprocal()).sum();
    if (holder - 1.0).abs() > HOLDER_TOL {
        return crate::error::invalid("Hoelder exponents must satisfy sum 1/alpha_j = 1");
    }
    let mut j_sorted = j_set.to_vec();
    j_sorted.sort_unstable();
    j_sorted.dedup();
    let m = len - 1;
    if j_sorted.iter().any(|&j| j == 0 || j > m) {
        return crate::error::invalid("J must be a subset of 1..=m");
    }
    if j_sorted.windows(2).any(|w| w[1] - w[0] < 2) {
        return crate::error::invalid("elements of J must be at distance at least 2");
    }
    if j_sorted.iter().any(|&j| alphas[j].value().is_finite()) {
        return crate::error::invalid("indices in J must carry alpha_j = infinity");
    }
    let jc = j_sorted.len() as f64;
    let r = jc / (n as f64 + jc);
    let op_norms: Vec<f64> = us.iter().map(op_norm).collect();
    let mut double_resolvent_norms = Vec::new();
    let mut schatten_norms = Vec::new();
    let mut p = op_norms.iter().fold(1.0, |acc, &x| acc * libm::pow(x, r));
    for j in 0..len {
        if j_sorted.binary_search(&j).is_ok() {
            let left = if j == 0 { &hs[m] } else { &hs[j - 1] };
            let dr = &(&left.resolvent_i() * &us[j]) * &hs[j].resolvent_i();
            let v = schatten(&dr, n as f64)?;
            p *= libm::pow(v, 1.0 - r);
            double_resolvent_norms.push((j, v));
        } else {
            let v = schatten_norm(&us[j], alphas[j])?;
            p *= libm::pow(v, 1.0 - r);
            schatten_norms.push((j, v));
        }
    }
    Ok(BoundReport { j_set: j_sorted, n, r, p_value: p, op_norms, double_resolvent_norms, schatten_norms })
}
