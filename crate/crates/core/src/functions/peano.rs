use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::divided::merge_nodes;
use super::piecewise::PiecewisePolynomial;
use crate::poly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Spline `K` with `f^[p](nodes) = int f^(p) K` and total mass `1/p!`.
///
/// Built from the Cox–de Boor recursion on the (merged) knot sequence; when all
/// nodes coincide the kernel is a single atom of mass `1/p!`.
pub fn peano_kernel(nodes: &[f64]) -> PiecewisePolynomial {
    let p = nodes.len().saturating_sub(1);
    let merged = merge_nodes(nodes);
    if merged.len() <= 1 {
        let x = merged.first().map_or(0.0, |m| m.0);
        return PiecewisePolynomial::atom(x, Complex64::new(1.0 / factorial(p), 0.0));
    }
    let knots: Vec<f64> = merged.iter().flat_map(|&(x, m)| core::iter::repeat(x).take(m)).collect();
    let distinct: Vec<f64> = merged.iter().map(|m| m.0).collect();
    let norm = 1.0 / (factorial(p - 1) * (knots[p] - knots[0]));
    let coeffs: Vec<Vec<Complex64>> = distinct
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let mid = 0.5 * (lo + hi);
            // order-1 splines: indicators of [k_i, k_{i+1})
            let mut basis: Vec<Vec<f64>> = (0..p)
                .map(|i| if knots[i] <= lo && knots[i + 1] >= hi && knots[i] < knots[i + 1] { vec![1.0] } else { vec![0.0] })
                .collect();
            for r in 2..=p {
                let mut next = Vec::with_capacity(p + 1 - r);
                for i in 0..=p - r {
                    let mut acc = vec![0.0; r];
                    let d1 = knots[i + r - 1] - knots[i];
                    if d1 > 0.0 {
                        let t = poly::mul_real(&[(mid - knots[i]) / d1, 1.0 / d1], &basis[i]);
                        for (a, b) in acc.iter_mut().zip(t) {
                            *a += b;
                        }
                    }
                    let d2 = knots[i + r] - knots[i + 1];
                    if d2 > 0.0 {
                        let t = poly::mul_real(&[(knots[i + r] - mid) / d2, -1.0 / d2], &basis[i + 1]);
                        for (a, b) in acc.iter_mut().zip(t) {
                            *a += b;
                        }
                    }
                    next.push(acc);
                }
                basis = next;
            }
            basis[0].iter().map(|&c| Complex64::new(c * norm, 0.0)).collect()
        })
        .collect();
    PiecewisePolynomial::new(distinct, coeffs, Vec::new()).expect("merged knots are strictly increasing")
}

/// Kernel scaled by `weight`, skipping the construction when the weight vanishes.
pub fn weighted_peano_kernel(nodes: &[f64], weight: Complex64) -> PiecewisePolynomial {
    if weight == ZERO {
        return PiecewisePolynomial::zero();
    }
    peano_kernel(nodes).scale(weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{divided_difference, TestFunction};

    #[test]
    fn two_nodes_indicator() {
        let k = peano_kernel(&[0.0, 1.0]);
        assert!((k.eval(0.5) - 1.0).norm() < 1e-15);
        assert!((k.total_mass() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn hat_kernel_against_divided_differences() {
        let k = peano_kernel(&[0.0, 1.0, 2.0]);
        assert!((k.eval(1.0) - 0.5).norm() < 1e-15);
        assert!((k.total_mass() - 0.5).norm() < 1e-15);
        for deg in [2usize, 3] {
            let f = TestFunction::monomial(deg);
            let lhs = k.integrate_against(|x| f.derivative(x, 2).unwrap(), &[], 1e-14);
            let rhs = divided_difference(&f, &[0.0, 1.0, 2.0]).unwrap();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn repeated_zero_knots_give_taylor_kernel() {
        let v = 1.7;
        for m in 1..5usize {
            let mut nodes = vec![0.0; m];
            nodes.push(v);
            let k = peano_kernel(&nodes);
            for &x in &[0.1, 0.8, 1.5] {
                let expect = libm::pow(v - x, (m - 1) as f64) / (factorial(m - 1) * libm::pow(v, m as f64));
                assert!((k.eval(x).re - expect).abs() < 1e-13, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn all_equal_is_atom() {
        let k = peano_kernel(&[2.0, 2.0, 2.0]);
        assert_eq!(k.atoms().len(), 1);
        assert!((k.atoms()[0].mass - 0.5).norm() < 1e-15);
    }
}
