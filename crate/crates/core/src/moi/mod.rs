//! Multiple operator integrals on matrices, operator derivatives and Taylor remainders.

mod derivatives;
mod eval;
mod oracle;

pub use derivatives::{
    basic_change_of_variables, derivative_continuity, frechet_derivative, perturbation_identity, taylor_remainder,
    IdentityResidual, RemainderMethod,
};
pub use eval::{moi, moi_eval, MoiPlan, MoiSymbol, OperatorTuple, TUPLE_LIMIT};
pub use oracle::pole_decomposition_moi;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::TestFunction;
    use crate::linalg::{HermitianOperator, Matrix};
    use num_complex::Complex64;

    #[test]
    fn identity_symbol_returns_argument() {
        let h = HermitianOperator::from_real_rows(&[&[1.0, 0.5], &[0.5, -1.0]]).unwrap();
        let v = Matrix::from_fn(2, 2, |i, j| Complex64::new((i + j) as f64, i as f64 - j as f64));
        let t = moi(&TestFunction::monomial(1), 0, &[&h, &h], &[&v]).unwrap();
        assert!((&t - &v).max_abs() < 1e-14);
    }

    #[test]
    fn square_first_order() {
        let h = HermitianOperator::diag(&[0.0, 1.0]).unwrap();
        let v = HermitianOperator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let t = frechet_derivative(&TestFunction::monomial(2), &h, &v, 1).unwrap();
        let expect = &(h.matrix() * v.matrix()) + &(v.matrix() * h.matrix());
        assert!((&t - &expect).max_abs() < 1e-14);
        assert!((&t - v.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn cubic_at_zero_operator() {
        let z = HermitianOperator::zero(2).unwrap();
        let v = Matrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 3.0]]);
        let t = moi(&TestFunction::monomial(3), 0, &[&z, &z, &z], &[&v, &v]).unwrap();
        assert!(t.max_abs() < 1e-15);
    }

    #[test]
    fn tuple_budget_is_enforced() {
        let h = HermitianOperator::zero(64).unwrap();
        let v = Matrix::identity(64);
        let r = moi(&TestFunction::monomial(5), 0, &[&h, &h, &h, &h, &h], &[&v, &v, &v, &v]);
        assert!(matches!(r, Err(crate::Error::TooManyTuples { .. })));
    }

    #[test]
    fn scalar_remainder_integral() {
        // scalar Taylor integral remainder: int_0^v f^(n)(x) (v-x)^(n-1)/(n-1)! dx
        let f = TestFunction::gaussian(0.2, 0.9).unwrap();
        let h = HermitianOperator::diag(&[0.0]).unwrap();
        let v = 1.3;
        let vo = HermitianOperator::diag(&[v]).unwrap();
        for n in 1..4usize {
            let fact: f64 = (1..n).map(|k| k as f64).product();
            let expect = crate::quadrature::integrate(
                |x| f.derivative(x, n).unwrap() * libm::pow(v - x, (n - 1) as f64) / fact,
                0.0,
                v,
                1e-15,
                1e-15,
            );
            for m in [RemainderMethod::Direct, RemainderMethod::Moi] {
                let r = taylor_remainder(&f, &h, &vo, n, m).unwrap();
                assert!((r[(0, 0)] - expect).norm() < 1e-12, "n={n} {m:?}");
            }
        }
    }
}
