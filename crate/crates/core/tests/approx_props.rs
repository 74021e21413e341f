mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use specshift_core::approx::{eta_convergence, finite_rank_sequence, strong_convergence};
use specshift_core::linalg::{op_norm, schatten, HermitianOperator, Matrix};

fn sandwich(h: &HermitianOperator, x: &Matrix) -> Matrix {
    let r = h.resolvent_i();
    &(&r * x) * &r
}

fn windows(h: &HermitianOperator, count: usize) -> Vec<f64> {
    let top = h.eigenvalues().iter().fold(0.0_f64, |a, x| a.max(x.abs())) * 1.01 + 1e-3;
    (1..=count).map(|k| top * k as f64 / count as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sequence_invariants(seed in any::<u64>(), d in 2usize..=6, n in 1usize..=3) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 2.0);
        let v = herm(&mut r, d, 1.0);
        let caps: Vec<usize> = (0..8).map(|_| r.gen_range(0..=d)).collect();
        let w = windows(&h, 8);
        let base = schatten(&sandwich(&h, v.matrix()), n as f64).unwrap();
        for seq in [finite_rank_sequence(&h, &v, n, &w, &[]).unwrap(), finite_rank_sequence(&h, &v, n, &w, &caps).unwrap()] {
            prop_assert_eq!(seq.len() + seq.dropped.len(), w.len());
            for vk in &seq.terms {
                prop_assert!(op_norm(vk.matrix()) <= op_norm(v.matrix()) * (1.0 + 1e-12));
                prop_assert!(schatten(&sandwich(&h, vk.matrix()), n as f64).unwrap() <= 2.0 * base);
            }
        }
    }

    #[test]
    fn strong_limit(seed in any::<u64>(), d in 2usize..=6) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 2.0);
        let v = herm(&mut r, d, 1.0);
        let seq = finite_rank_sequence(&h, &v, 2, &windows(&h, 6), &[]).unwrap();
        let xs: Vec<Vec<Complex64>> = (0..20)
            .map(|_| {
                let x: Vec<Complex64> = (0..d).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
                let s = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                x.into_iter().map(|z| z / s).collect()
            })
            .collect();
        let gaps = strong_convergence(&v, &seq, &xs).unwrap();
        prop_assert_eq!(*seq.windows.last().unwrap(), *windows(&h, 6).last().unwrap());
        prop_assert!(*gaps.last().unwrap() <= 1e-14, "{gaps:?}");
    }

    #[test]
    fn eta_limit(seed in any::<u64>(), d in 2usize..=4, m in 1usize..=4) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 2.0);
        let v = herm(&mut r, d, 0.7);
        let seq = finite_rank_sequence(&h, &v, 2, &windows(&h, 5), &[]).unwrap();
        let gaps = eta_convergence(&h, &v, &seq, m).unwrap();
        prop_assert!(*gaps.last().unwrap() <= 1e-8, "{gaps:?}");
    }
}
