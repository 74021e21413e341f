//! Scalar test functions, divided differences and Peano kernels.

mod divided;
mod peano;
mod piecewise;
mod test_function;

pub use divided::{divided_difference, divided_difference_merged, merge_nodes, MERGE_TOL, NEAR_SPAN, NEAR_TERMS};
pub(crate) use divided::taylor_coeffs;
pub use peano::{peano_kernel, weighted_peano_kernel};
pub use piecewise::{Atom, PiecewisePolynomial};
pub use test_function::{ClassMembership, FunctionKind, TestFunction};

/// `sup_{|x|<a} |(f u^k)^(p)|` and `sup |f^(n)|` sampled on a fine grid, for the
/// weighted-derivative bound on compactly supported functions.
pub fn weighted_derivative_sup(f: &TestFunction, k: u32, p: usize, n: usize, a: f64, samples: usize) -> crate::Result<(f64, f64)> {
    let fk = f.weight_multiply(k);
    let mut lhs: f64 = 0.0;
    let mut rhs: f64 = 0.0;
    for j in 0..=samples {
        let x = -a + 2.0 * a * j as f64 / samples as f64;
        lhs = lhs.max(fk.derivative(x, p)?.norm());
        rhs = rhs.max(f.derivative(x, n)?.norm());
    }
    Ok((lhs, rhs))
}

/// Constant `C` with `sup|(f u^k)^(p)| <= C sup|f^(n)|` for `f` supported in `(-a, a)`, `p <= n`.
///
/// From the Leibniz rule, `|f^(j)| <= (2a)^(n-j) sup|f^(n)|` and `|(u^k)^(i)| <= k!/(k-i)! (1+a^2)^((k-i)/2)`.
pub fn weighted_derivative_constant(n: usize, k: u32, p: usize, a: f64) -> f64 {
    let mut c = 0.0;
    for i in 0..=p.min(k as usize) {
        let j = p - i;
        let mut binom = 1.0;
        for t in 0..i {
            binom = binom * (p - t) as f64 / (t + 1) as f64;
        }
        let mut fall = 1.0;
        for t in 0..i {
            fall *= (k as usize - t) as f64;
        }
        let u = libm::pow(1.0 + a * a, (k as usize - i) as f64 / 2.0);
        c += binom * fall * u * libm::pow(2.0 * a, (n - j) as f64);
    }
    c
}
