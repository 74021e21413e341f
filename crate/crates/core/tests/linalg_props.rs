mod common;

use common::*;
use proptest::prelude::*;
use specshift_core::functions::TestFunction;
use specshift_core::linalg::{factorization_residuals, func_calculus, op_norm, schatten};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectral_decomposition_reconstructs(seed in any::<u64>(), d in 1usize..=6) {
        let h = herm(&mut rng(seed), d, 2.0);
        let dec = h.spectral_decompose(h.default_cluster_tolerance()).unwrap();
        let err = op_norm(&(&dec.reconstruct() - h.matrix()));
        prop_assert!(err <= 1e-10 * (1.0 + op_norm(h.matrix())));
    }

    #[test]
    fn calculus_is_multiplicative(seed in any::<u64>(), d in 1usize..=5) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 1.5);
        let f = gaussian(&mut r);
        let g = rational(&mut r, 3);
        let fg = func_calculus(&TestFunction::product(f.clone(), g.clone()), &h).unwrap();
        let prod = &func_calculus(&f, &h).unwrap() * &func_calculus(&g, &h).unwrap();
        prop_assert!(op_norm(&(&fg - &prod)) <= 1e-10 * (1.0 + op_norm(&fg)));
    }

    #[test]
    fn resolvent_factorizations(seed in any::<u64>(), d in 1usize..=5) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 2.0);
        let v = herm(&mut r, d, 1.0);
        let res = factorization_residuals(&h, &v).unwrap();
        prop_assert!(res[0] <= 1e-12 && res[1] <= 1e-12, "{res:?}");
    }

    #[test]
    fn hoelder_inequality(seed in any::<u64>(), d in 1usize..=5, p in 1.0f64..6.0, q in 1.0f64..6.0) {
        let mut r = rng(seed);
        let a = matrix(&mut r, d, 1.0);
        let b = matrix(&mut r, d, 1.0);
        let rr = 1.0 / (1.0 / p + 1.0 / q);
        prop_assume!(rr >= 1.0);
        let lhs = schatten(&(&a * &b), rr).unwrap();
        let rhs = schatten(&a, p).unwrap() * schatten(&b, q).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }
}
