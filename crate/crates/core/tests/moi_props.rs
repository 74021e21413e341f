mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use specshift_core::linalg::{op_norm, schatten, HermitianOperator, Matrix};
use specshift_core::moi::{basic_change_of_variables, derivative_continuity, moi_eval, MoiSymbol, OperatorTuple};

fn tuple(seed: u64, d: usize, n: usize) -> OperatorTuple {
    let mut r = rng(seed);
    let ops: Vec<HermitianOperator> = (0..=n).map(|_| herm(&mut r, d, 1.5)).collect();
    let args: Vec<Matrix> = (0..n).map(|_| matrix(&mut r, d, 0.7)).collect();
    OperatorTuple::new(ops, args).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn multilinear_in_each_slot(seed in any::<u64>(), d in 1usize..=4, n in 1usize..=3) {
        let mut r = rng(seed ^ 0x5a5a);
        let f = rational(&mut r, 4);
        let sym = MoiSymbol::divided(&f, n);
        let base = tuple(seed, d, n);
        let w = matrix(&mut r, d, 0.9);
        let (a, b) = (Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0)), Complex64::new(r.gen_range(-2.0..2.0), 0.3));
        for slot in 0..n {
            let mut mixed = base.clone();
            mixed.arguments[slot] = &base.arguments[slot].scale(a) + &w.scale(b);
            let mut other = base.clone();
            other.arguments[slot] = w.clone();
            let lhs = moi_eval(&sym, &mixed).unwrap();
            let t1 = moi_eval(&sym, &base).unwrap().scale(a);
            let t2 = moi_eval(&sym, &other).unwrap().scale(b);
            let rhs = &t1 + &t2;
            let scale = 1.0 + op_norm(&t1) + op_norm(&t2);
            prop_assert!(op_norm(&(&lhs - &rhs)) <= 1e-10 * scale);
        }
    }

    #[test]
    fn schatten_ratio_is_bounded(seed in any::<u64>(), d in 2usize..=4, n in 1usize..=3) {
        let f = specshift_core::functions::TestFunction::gaussian(0.1, 0.8).unwrap();
        let t = tuple(seed, d, n);
        let val = moi_eval(&MoiSymbol::divided(&f, n), &t).unwrap();
        let lhs = schatten(&val, 1.0).unwrap();
        let rhs: f64 = t.arguments.iter().map(|v| schatten(v, n as f64).unwrap()).product();
        // every divided difference of this gaussian is bounded by sup |f^(n)| / n! <= 2
        prop_assert!(lhs <= 2.0 * d as f64 * rhs + 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn change_of_variables_forms(seed in any::<u64>(), d in 1usize..=3, n in 1usize..=3) {
        let f = rational(&mut rng(seed ^ 0x77), 3);
        let res = basic_change_of_variables(&f, &tuple(seed, d, n)).unwrap();
        for (i, r) in res.iter().enumerate() {
            prop_assert!(r.relative() <= 1e-10, "form {i}: {}", r.relative());
        }
    }

    #[test]
    fn derivative_continuity_is_monotone(seed in any::<u64>(), d in 1usize..=3, k in 1usize..=2) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 1.0);
        let v = herm(&mut r, d, 0.05);
        let f = specshift_core::functions::TestFunction::exponential(Complex64::new(r.gen_range(0.5..1.5), 0.0));
        let steps = derivative_continuity(&f, &h, &v, k, 10).unwrap();
        let last = steps[steps.len() - 1];
        prop_assert!(last <= 1e-2 * (1.0 + steps[0]), "{steps:?}");
        for w in steps.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-9) + 1e-13, "{steps:?}");
        }
    }
}
