//! Higher-order spectral shift functions of finite-dimensional pairs `(H, H+V)`.

mod density;
mod rp_terms;
mod scaling;
mod trace;
mod uniqueness;
mod weight_shift;

pub use density::{remainder_operators, remainder_trace, ssf_compute, Construction, SpectralShiftDensity, SsfMethod};
pub use rp_terms::{rp_term_measures, RpBlockReport, RpReport, RpTermBound};
pub use scaling::{rhs_factor, weighted_norm_and_scaling, ScalingReport, ScalingSample, SWEEP};
pub use trace::{check_family, trace_class_order, verify_trace_formula, verify_with_density, TraceFormulaEntry, TraceFormulaReport};
pub use uniqueness::{reconstruction_family, ssf_reconstruct, uniqueness_fit, UniquenessFit, RECONSTRUCTION_BUMPS, SVD_CUTOFF};
pub use weight_shift::{
    measure_weight_shift, weight_norm_constant, DiscreteMeasure, ShiftedMeasure, TailedPolynomial, WeightShiftReport,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cov::Parity;
    use crate::functions::{PiecewisePolynomial, TestFunction};
    use crate::linalg::{HermitianOperator, Matrix};
    use alloc::vec;
    use alloc::vec::Vec;
    use num_complex::Complex64;

    fn herm(seed: u64, d: usize, scale: f64) -> HermitianOperator {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let m = Matrix::from_fn(d, d, |_, _| Complex64::new(next(), next()));
        HermitianOperator::new((&m + &m.adjoint()).scale_real(0.5 * scale)).unwrap()
    }

    fn scalar(x: f64) -> HermitianOperator {
        HermitianOperator::diag(&[x]).unwrap()
    }

    fn family() -> Vec<TestFunction> {
        let poles: Vec<Complex64> = (0..12).map(|k| Complex64::new(-1.5 + 0.27 * k as f64, if k % 2 == 0 { 1.1 } else { -0.9 })).collect();
        vec![
            TestFunction::simple_poles(&poles).unwrap(),
            TestFunction::gaussian(0.2, 0.7).unwrap(),
            TestFunction::gaussian(-0.5, 1.3).unwrap(),
            TestFunction::smooth_bump(-2.0, 1.5).unwrap(),
            TestFunction::poly_bump(-1.5, 2.5, 7).unwrap(),
        ]
    }

    #[test]
    fn scalar_closed_form() {
        for v in [0.5, 1.0, 2.0] {
            for m in 1..=4usize {
                let eta = ssf_compute(&scalar(0.0), &scalar(v), m, SsfMethod::Bspline).unwrap();
                let fact: f64 = (1..m).map(|k| k as f64).product();
                for j in 0..=20 {
                    let x = v * j as f64 / 20.0;
                    let expect = if x < v { libm::pow(v - x, (m - 1) as f64) / fact } else { 0.0 };
                    assert!((eta.density.eval(x).re - expect).abs() < 1e-12, "v={v} m={m} x={x}");
                }
                assert_eq!(eta.density.eval(-0.1).re, 0.0);
            }
        }
    }

    #[test]
    fn counting_unit_step() {
        let eta = ssf_compute(&scalar(0.0), &scalar(1.0), 1, SsfMethod::Counting).unwrap();
        assert_eq!(eta.density.eval(0.0).re, 1.0);
        assert_eq!(eta.density.eval(0.999).re, 1.0);
        assert_eq!(eta.density.eval(1.0).re, 0.0);
        assert!(ssf_compute(&scalar(0.0), &scalar(1.0), 2, SsfMethod::Counting).is_err());
        assert!(ssf_compute(&scalar(0.0), &scalar(1.0), 0, SsfMethod::Bspline).is_err());
    }

    #[test]
    fn counting_matches_bspline_at_first_order() {
        let h = herm(3, 4, 1.0);
        let v = herm(4, 4, 0.8);
        let a = ssf_compute(&h, &v, 1, SsfMethod::Counting).unwrap();
        let b = ssf_compute(&h, &v, 1, SsfMethod::Bspline).unwrap();
        let fit = uniqueness_fit(&a, &b, 1).unwrap();
        assert!(fit.residual < 1e-9, "{}", fit.residual);
    }

    #[test]
    fn trace_formula_both_parities() {
        let h = herm(5, 3, 1.0);
        let v = herm(6, 3, 0.7);
        for parity in [Parity::Odd, Parity::Even] {
            let r = verify_trace_formula(&h, &v, 2, parity, &family()).unwrap();
            assert!(r.max_relative < 1e-9, "{parity:?} {}", r.max_relative);
            assert!(r.imag_residue < 1e-10 && r.atomic_mass < 1e-10);
        }
        assert!(verify_trace_formula(&h, &v, 2, Parity::Odd, &[TestFunction::monomial(2)]).is_err());
    }

    #[test]
    fn zero_perturbation_gives_zero_density() {
        let h = herm(7, 3, 1.0);
        let v = HermitianOperator::zero(3).unwrap();
        let eta = ssf_compute(&h, &v, 3, SsfMethod::Bspline).unwrap();
        assert_eq!(eta.l1_norm(), 0.0);
        let s = weighted_norm_and_scaling(&h, &v, 2, Parity::Odd).unwrap();
        assert_eq!(s.weighted_l1, 0.0);
    }

    #[test]
    fn reconstruction_agrees_up_to_polynomial() {
        let h = herm(8, 3, 1.0);
        let v = herm(9, 3, 0.6);
        for m in [1usize, 2, 3, 4] {
            let b = ssf_compute(&h, &v, m, SsfMethod::Bspline).unwrap();
            let r = ssf_reconstruct(&h, &v, m).unwrap();
            let fit = uniqueness_fit(&b, &r, m).unwrap();
            assert!(fit.relative() < 1e-6, "m={m}: {}", fit.relative());
        }
    }

    #[test]
    fn planted_polynomial_is_recovered() {
        let h = herm(10, 2, 1.0);
        let v = herm(11, 2, 0.5);
        let a = ssf_compute(&h, &v, 3, SsfMethod::Bspline).unwrap();
        let (lo, hi) = a.density.support().unwrap();
        let one = Complex64::new(1.0, 0.0);
        let planted = PiecewisePolynomial::single(lo, hi, &[one, one * 2.0]).unwrap();
        let mut b = a.clone();
        b.density = PiecewisePolynomial::linear_combination(&[(one, &a.density), (one, &planted)]);
        let fit = uniqueness_fit(&a, &b, 3).unwrap();
        assert!((fit.coeffs[0] - 1.0).abs() < 1e-12 && (fit.coeffs[1] - 2.0).abs() < 1e-12 && fit.coeffs[2].abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        let same = uniqueness_fit(&a, &a, 3).unwrap();
        assert!(same.coeffs.iter().all(|&c| c == 0.0) && same.residual == 0.0);
    }

    #[test]
    fn weight_shift_examples() {
        let g = TestFunction::gaussian(0.3, 0.9).unwrap();
        let delta = DiscreteMeasure::new(vec![1.0], vec![Complex64::new(1.0, 0.0)]).unwrap();
        let r = measure_weight_shift(&delta, 0, 0, 1, 1.0, &[g.clone()]).unwrap();
        assert!(r.max_residual < 1e-10, "{}", r.max_residual);
        assert!(r.norm_bound_holds);

        let mu = DiscreteMeasure::new(vec![2.0, -1.0], vec![Complex64::new(3.0, 0.0), Complex64::new(-1.0, 0.0)]).unwrap();
        let r = measure_weight_shift(&mu, 0, 1, 2, 0.5, &[g.clone(), TestFunction::poly_bump(-2.0, 3.0, 6).unwrap()]).unwrap();
        assert!(r.max_residual < 1e-8, "{}", r.max_residual);
        assert!(r.norm_bound_holds, "{} vs {}", r.shifted_norm, r.norm_constant * r.mu_norm);

        let z = measure_weight_shift(&DiscreteMeasure::zero(), 1, 1, 2, 0.5, &[g.clone()]).unwrap();
        assert_eq!(z.shifted_norm, 0.0);
        assert!(measure_weight_shift(&mu, 0, 1, 2, 0.0, &[g.clone()]).is_err());
        assert!(measure_weight_shift(&mu, 0, 1, 2, 1.5, &[g]).is_err());
        assert!((weight_norm_constant(1.0) - core::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn rp_blocks_sum_to_remainder() {
        let h = herm(12, 3, 1.0);
        let v = herm(13, 3, 0.6);
        for parity in [Parity::Odd, Parity::Even] {
            let r = rp_term_measures(&h, &v, 2, parity, &family()).unwrap();
            assert!(r.sum_relative < 1e-9, "{parity:?} {}", r.sum_relative);
            assert!(r.max_block_relative() < 1e-8, "{parity:?} {}", r.max_block_relative());
        }
        let z = HermitianOperator::zero(3).unwrap();
        let r = rp_term_measures(&h, &z, 2, Parity::Odd, &family()).unwrap();
        assert!(r.blocks.iter().all(|b| b.traces.iter().all(|t| t.norm() == 0.0)));
    }

    #[test]
    fn rp_scalar_sum() {
        let r = rp_term_measures(&scalar(0.2), &scalar(0.9), 2, Parity::Odd, &family()).unwrap();
        assert!(r.sum_relative < 1e-12, "{}", r.sum_relative);
    }
}
