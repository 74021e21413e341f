use alloc::vec::Vec;

use super::density::{ssf_compute, SsfMethod};
use crate::cov::Parity;
use crate::error::Result;
use crate::linalg::{check_dims, op_norm, schatten, HermitianOperator};

/// Number of halvings in the `t`-sweep, `t = 2^0 .. 2^-SWEEP`.
pub const SWEEP: i32 = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingSample {
    pub t: f64,
    pub weighted_l1: f64,
    pub rhs_factor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub n: usize,
    pub parity: Parity,
    pub order: usize,
    /// `4n+2` (odd) or `4n+3` (even).
    pub weight_exponent: u32,
    pub weighted_l1: f64,
    pub rhs_factor: f64,
    /// `weighted_l1 / rhs_factor`, `None` for a vanishing factor.
    pub ratio: Option<f64>,
    pub samples: Vec<ScalingSample>,
    /// Least-squares slope of `log weighted_l1` against `log t`, `None` if some sample vanishes.
    pub slope: Option<f64>,
    /// `(e, sup_t ||eta_t (1+|x|)^{-e}||_1 / rhs_factor(t))` for `e = 0..=weight_exponent`.
    pub weight_profile: Vec<(u32, f64)>,
    /// Smallest `e` whose ratio stays finite over the sweep.
    pub smallest_bounded_weight: Option<u32>,
}

/// `(1 + ||V||^2) ||V||^{n-1} ||(H-i)^{-1}V(H-i)^{-1}||_n^n` (odd) or with `||V||^n` (even).
pub fn rhs_factor(h: &HermitianOperator, v: &HermitianOperator, n: usize, parity: Parity) -> Result<f64> {
    let r = h.resolvent_i();
    let rvr = &(&r * v.matrix()) * &r;
    let vn = op_norm(v.matrix());
    let power = match parity {
        Parity::Odd => n as i32 - 1,
        Parity::Even => n as i32,
    };
    Ok((1.0 + vn * vn) * libm::pow(vn, power as f64) * libm::pow(schatten(&rvr, n as f64)?, n as f64))
}

fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Weighted `L^1` norm of `eta_m`, the bound factor, and their behaviour under `V -> tV`.
pub fn weighted_norm_and_scaling(h: &HermitianOperator, v: &HermitianOperator, n: usize, parity: Parity) -> Result<ScalingReport> {
    check_dims(h.dim(), v.dim())?;
    if n < 2 {
        return crate::error::invalid("scaling report needs n >= 2");
    }
    let m = parity.order(n);
    let exponent = match parity {
        Parity::Odd => 4 * n as u32 + 2,
        Parity::Even => 4 * n as u32 + 3,
    };
    let mut samples = Vec::with_capacity(SWEEP as usize + 1);
    let mut profile: Vec<(u32, f64)> = (0..=exponent).map(|e| (e, 0.0)).collect();
    for j in 0..=SWEEP {
        let t = libm::ldexp(1.0, -j);
        let vt = v.scale(t)?;
        let eta = ssf_compute(h, &vt, m, SsfMethod::Bspline)?;
        let rhs = rhs_factor(h, &vt, n, parity)?;
        for (e, sup) in profile.iter_mut() {
            let w = eta.weighted_l1(*e as f64);
            let ratio = if rhs > 0.0 { w / rhs } else if w == 0.0 { 0.0 } else { f64::INFINITY };
            *sup = sup.max(ratio);
        }
        samples.push(ScalingSample { t, weighted_l1: eta.weighted_l1(exponent as f64), rhs_factor: rhs });
    }
    let slope = if samples.iter().all(|s| s.weighted_l1 > 0.0) {
        let pts: Vec<(f64, f64)> = samples.iter().map(|s| (libm::log(s.t), libm::log(s.weighted_l1))).collect();
        Some(fit_slope(&pts))
    } else {
        None
    };
    let first = &samples[0];
    Ok(ScalingReport {
        n,
        parity,
        order: m,
        weight_exponent: exponent,
        weighted_l1: first.weighted_l1,
        rhs_factor: first.rhs_factor,
        ratio: (first.rhs_factor > 0.0).then(|| first.weighted_l1 / first.rhs_factor),
        smallest_bounded_weight: profile.iter().find(|p| p.1.is_finite()).map(|p| p.0),
        weight_profile: profile,
        samples,
        slope,
    })
}
