use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::density::{remainder_operators, remainder_trace};
use super::trace::check_family;
use crate::cov::{corollary_expand, corollary_indices, p_j_alpha, trace_measure, BarOperators, Parity, TraceMeasure};
use crate::error::Result;
use crate::functions::{PiecewisePolynomial, TestFunction};
use crate::linalg::{check_dims, op_norm, schatten, HermitianOperator, Matrix, SchattenIndex};

/// One index tuple of the decomposition with its measure and mixed-norm bound.
#[derive(Clone, Debug)]
pub struct RpTermBound {
    pub indices: Vec<usize>,
    pub j_set: Vec<usize>,
    /// Hoelder exponents, `inf` allowed.
    pub alphas: Vec<f64>,
    pub p_value: f64,
    pub mu_norm: f64,
}

/// The order-`p` block `R^p` of the remainder.
#[derive(Clone, Debug)]
pub struct RpBlockReport {
    pub p: usize,
    /// Sign of the block in the remainder.
    pub sign: f64,
    /// Weight power `p+1` (odd) or `p` (even).
    pub weight_power: u32,
    /// Sum of the per-tuple measures.
    pub measure: TraceMeasure,
    pub mu_norm: f64,
    pub terms: Vec<RpTermBound>,
    /// `Tr R^p(f)` from the operator decomposition, one per family member.
    pub traces: Vec<Complex64>,
    /// `int (f u^w)^(p) u^{p+2} d mu_p`.
    pub integrals: Vec<Complex64>,
    /// Largest `|trace - integral| / (1 + |trace|)`.
    pub max_relative: f64,
}

#[derive(Clone, Debug)]
pub struct RpReport {
    pub n: usize,
    pub parity: Parity,
    pub order: usize,
    pub blocks: Vec<RpBlockReport>,
    /// `Tr R_m(f)` by the direct Taylor remainder.
    pub remainder_traces: Vec<Complex64>,
    /// `sum_p sign_p Tr R^p(f)`.
    pub signed_sums: Vec<Complex64>,
    /// Largest `|signed sum - Tr R_m| / (1 + |Tr R_m|)`.
    pub sum_relative: f64,
    /// `||V||^{n-1 | n} (1+||V||)^2 ||(H-i)^{-1}V(H-i)^{-1}||_n^n`.
    pub bound_factor: f64,
    /// Largest `p^J_alpha` among all tuples.
    pub max_p_value: f64,
}

impl RpReport {
    /// Worst per-block trace formula residual.
    pub fn max_block_relative(&self) -> f64 {
        self.blocks.iter().fold(0.0, |a, b| a.max(b.max_relative))
    }
}

fn ceil_half(i: usize) -> usize {
    i.div_ceil(2)
}

fn hoelder(n: usize, odd_count: usize) -> Result<SchattenIndex> {
    if odd_count == 0 {
        Ok(SchattenIndex::INF)
    } else {
        SchattenIndex::new(n as f64 / odd_count as f64)
    }
}

/// Per-block trace measures of the odd/even decomposition of `R_m`, `m = 2n-1` or `2n`.
pub fn rp_term_measures(
    h: &HermitianOperator,
    v: &HermitianOperator,
    n: usize,
    parity: Parity,
    family: &[TestFunction],
) -> Result<RpReport> {
    check_dims(h.dim(), v.dim())?;
    if n < 2 {
        return crate::error::invalid("per-block measures need n >= 2");
    }
    check_family(n, parity, family)?;
    let m = parity.order(n);
    let hs = remainder_operators(h, v, m)?;
    let vs = vec![v.matrix().clone(); m];
    let bars = BarOperators::new(&hs, &vs)?;
    let one = Complex64::new(1.0, 0.0);

    let mut blocks: Vec<RpBlockReport> = Vec::new();
    let mut max_p_value = 0.0_f64;
    for indices in corollary_indices(parity, n) {
        let p = indices.len() - 1;
        let (i0, ip) = (indices[0], indices[p]);
        let u0 = match parity {
            Parity::Odd => &bars.product(ip, m) * &bars.product(0, i0),
            Parity::Even => bars.product(0, i0),
        };
        let us: Vec<Matrix> = indices.windows(2).map(|w| bars.product(w[0], w[1])).collect();
        let ops: Vec<HermitianOperator> = indices.iter().map(|&i| hs[i].clone()).collect();
        let measure = trace_measure(&u0, &us, &ops)?;

        let alpha0 = match parity {
            Parity::Odd => hoelder(n, ceil_half(i0) + n - ceil_half(ip))?,
            Parity::Even => hoelder(n, ceil_half(i0))?,
        };
        let mut alphas = vec![alpha0];
        let mut j_set = Vec::new();
        for j in 1..=p {
            alphas.push(hoelder(n, ceil_half(indices[j]) - ceil_half(indices[j - 1]))?);
            if indices[j] % 2 == 0 && indices[j] == indices[j - 1] + 1 {
                j_set.push(j);
            }
        }
        let all_us: Vec<Matrix> = core::iter::once(u0).chain(us).collect();
        let bound = p_j_alpha(&all_us, &ops, &j_set, &alphas, n)?;
        max_p_value = max_p_value.max(bound.p_value);
        let term = RpTermBound {
            indices,
            j_set,
            alphas: alphas.iter().map(|a| a.value()).collect(),
            p_value: bound.p_value,
            mu_norm: measure.total_variation(),
        };

        let weight_power = match parity {
            Parity::Odd => p as u32 + 1,
            Parity::Even => p as u32,
        };
        match blocks.iter_mut().find(|b| b.p == p) {
            Some(b) => {
                b.measure.kernel_density =
                    PiecewisePolynomial::linear_combination(&[(one, &b.measure.kernel_density), (one, &measure.kernel_density)]);
                b.measure.kernel_count += measure.kernel_count;
                b.terms.push(term);
            }
            None => blocks.push(RpBlockReport {
                p,
                sign: 0.0,
                weight_power,
                measure,
                mu_norm: 0.0,
                terms: vec![term],
                traces: Vec::new(),
                integrals: Vec::new(),
                max_relative: 0.0,
            }),
        }
    }
    blocks.sort_by_key(|b| b.p);
    for b in blocks.iter_mut() {
        b.mu_norm = b.measure.total_variation();
    }

    let mut remainder_traces = Vec::with_capacity(family.len());
    let mut signed_sums = Vec::with_capacity(family.len());
    let mut sum_relative = 0.0_f64;
    for f in family {
        let e = corollary_expand(f, parity, &hs, &vs)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for b in blocks.iter_mut() {
            b.sign = e.block_sign(b.p);
            let tr = e.block(b.p).trace();
            let integral = b.measure.integrate(&f.weight_multiply(b.weight_power), 1e-14)?;
            b.max_relative = b.max_relative.max((tr - integral).norm() / (1.0 + tr.norm()));
            b.traces.push(tr);
            b.integrals.push(integral);
            sum += tr * b.sign;
        }
        let full = remainder_trace(f, h, v, m)?;
        sum_relative = sum_relative.max((sum - full).norm() / (1.0 + full.norm()));
        remainder_traces.push(full);
        signed_sums.push(sum);
    }

    let r = h.resolvent_i();
    let rvr = &(&r * v.matrix()) * &r;
    let vn = op_norm(v.matrix());
    let power = match parity {
        Parity::Odd => n - 1,
        Parity::Even => n,
    };
    let bound_factor =
        libm::pow(vn, power as f64) * (1.0 + vn) * (1.0 + vn) * libm::pow(schatten(&rvr, n as f64)?, n as f64);
    Ok(RpReport { n, parity, order: m, blocks, remainder_traces, signed_sums, sum_relative, bound_factor, max_p_value })
}
