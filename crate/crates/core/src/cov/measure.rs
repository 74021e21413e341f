use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::bound::BoundReport;
use crate::error::{Error, Result};
use crate::functions::{merge_nodes, peano_kernel, PiecewisePolynomial, TestFunction};
use crate::linalg::{check_dims, HermitianOperator, Matrix};
use crate::moi::{moi_eval, MoiSymbol, OperatorTuple, TUPLE_LIMIT};
use crate::sum::CompensatedSum;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A measure `mu` with `Tr(U_0 T_{g^[m]}(U_1..U_m)) = int g^(m) u^{m+2} d mu`.
///
/// Stored as `u^{m+2} d mu = kernel_density dx`, a sum of weighted Peano kernels.
#[derive(Clone, Debug)]
pub struct TraceMeasure {
    pub order: usize,
    pub kernel_density: PiecewisePolynomial,
    /// Distinct node multisets that received nonzero weight.
    pub kernel_count: usize,
}

impl TraceMeasure {
    /// `u^{-(m+2)}(x) * kernel_density(x)`.
    pub fn mu_density(&self, x: f64) -> Complex64 {
        self.kernel_density.eval(x) / crate::weight_u(x).powu(self.order as u32 + 2)
    }

    /// `int g^(m) u^{m+2} d mu`.
    pub fn integrate(&self, g: &TestFunction, tol: f64) -> Result<Complex64> {
        let m = self.order;
        let mut err = None;
        let v = self.kernel_density.integrate_against(
            |x| match g.derivative(x, m) {
                Ok(y) => y,
                Err(e) => {
                    err.get_or_insert(e);
                    ZERO
                }
            },
            &g.singular_points(),
            tol,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }

    /// Total variation `int |u|^{-(m+2)} |kernel_density| + sum |mass| |u(x)|^{-(m+2)}`.
    pub fn total_variation(&self) -> f64 {
        let e = self.order as f64 + 2.0;
        let w = |x: f64| libm::pow(1.0 + x * x, -0.5 * e);
        self.kernel_density.weighted_modulus_integral(w, &[])
            + self.kernel_density.atoms().iter().map(|a| a.mass.norm() * w(a.x)).sum::<f64>()
    }
}

/// Measure construction from eigen-tuples compared with the direct trace.
#[derive(Clone, Debug)]
pub struct TraceMeasureReport {
    pub measure: TraceMeasure,
    /// `Tr(U_0 T(U_1..U_m))` from the operator integral.
    pub trace: Complex64,
    /// `int g^(m) u^{m+2} d mu`.
    pub trace_from_measure: Complex64,
    pub residual: f64,
    /// `1 + |trace|`.
    pub scale: f64,
    pub mu_norm: f64,
}

impl TraceMeasureReport {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }

    /// `||mu|| / p^J_alpha`, `None` when the bound vanishes.
    pub fn bound_ratio(&self, bound: &BoundReport) -> Option<f64> {
        (bound.p_value > 0.0).then(|| self.mu_norm / bound.p_value)
    }
}

/// The measure alone: weights `W_0[k_m,k_0] W_1[k_0,k_1] ... W_m[k_{m-1},k_m]` of the mixed-basis
/// matrices `W_0 = E_m* U_0 E_0`, `W_j = E_{j-1}* U_j E_j`, each placed on the Peano kernel of its node tuple.
pub fn trace_measure(u0: &Matrix, us: &[Matrix], hs: &[HermitianOperator]) -> Result<TraceMeasure> {
    let m = us.len();
    if hs.len() != m + 1 {
        return Err(Error::DimensionMismatch { expected: m + 1, actual: hs.len() });
    }
    let d = hs[0].dim();
    for h in hs {
        check_dims(d, h.dim())?;
    }
    for u in core::iter::once(u0).chain(us) {
        check_dims(d, u.rows())?;
        check_dims(d, u.cols())?;
    }
    let count = (d as u128).checked_pow(m as u32 + 1).unwrap_or(u128::MAX);
    if count > TUPLE_LIMIT {
        return Err(Error::TooManyTuples { count, limit: TUPLE_LIMIT });
    }
    let lambdas: Vec<Vec<f64>> = hs.iter().map(|h| h.clustered_eigenvalues(h.default_cluster_tolerance())).collect();
    let w0 = &(&hs[m].eigenvectors().adjoint() * u0) * hs[0].eigenvectors();
    let ws: Vec<Matrix> =
        (0..m).map(|j| &(&hs[j].eigenvectors().adjoint() * &us[j]) * hs[j + 1].eigenvectors()).collect();

    let mut buckets: BTreeMap<Vec<u64>, CompensatedSum> = BTreeMap::new();
    let mut idx = alloc::vec![0usize; m + 1];
    let mut nodes = alloc::vec![0.0; m + 1];
    'outer: loop {
        let mut w = w0[(idx[m], idx[0])];
        for j in 0..m {
            if w == ZERO {
                break;
            }
            w *= ws[j][(idx[j], idx[j + 1])];
        }
        if w != ZERO {
            for (j, slot) in nodes.iter_mut().enumerate() {
                *slot = lambdas[j][idx[j]];
            }
            let key: Vec<u64> =
                merge_nodes(&nodes).iter().flat_map(|&(x, c)| core::iter::repeat(x.to_bits()).take(c)).collect();
            buckets.entry(key).or_insert_with(CompensatedSum::new).add(w);
        }
        let mut pos = m;
        loop {
            idx[pos] += 1;
            if idx[pos] < d {
                break;
            }
            idx[pos] = 0;
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
        }
    }
    let kernels: Vec<(Complex64, PiecewisePolynomial)> = buckets
        .into_iter()
        .map(|(key, s)| (s.value(), key.into_iter().map(f64::from_bits).collect::<Vec<f64>>()))
        .filter(|(w, _)| *w != ZERO)
        .map(|(w, nodes)| (w, peano_kernel(&nodes)))
        .collect();
    let refs: Vec<(Complex64, &PiecewisePolynomial)> = kernels.iter().map(|(w, k)| (*w, k)).collect();
    Ok(TraceMeasure {
        order: m,
        kernel_density: PiecewisePolynomial::linear_combination(&refs),
        kernel_count: kernels.len(),
    })
}

/// Builds the trace measure and checks it against `Tr(U_0 T^{H_0..H_m}_{g^[m]}(U_1..U_m))`.
pub fn trace_via_measure(u0: &Matrix, g: &TestFunction, us: &[Matrix], hs: &[HermitianOperator]) -> Result<TraceMeasureReport> {
    let measure = trace_measure(u0, us, hs)?;
    let m = us.len();
    let inner = moi_eval(&MoiSymbol::divided(g, m), &OperatorTuple::new(hs.to_vec(), us.to_vec())?)?;
    let trace = (u0 * &inner).trace();
    let trace_from_measure = measure.integrate(g, 1e-15)?;
    let mu_norm = measure.total_variation();
    Ok(TraceMeasureReport {
        residual: (trace - trace_from_measure).norm(),
        scale: 1.0 + trace.norm(),
        measure,
        trace,
        trace_from_measure,
        mu_norm,
    })
}
