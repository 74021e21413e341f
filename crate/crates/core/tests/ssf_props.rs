mod common;

use common::*;
use proptest::prelude::*;
use specshift_core::functions::TestFunction;
use specshift_core::moi::{taylor_remainder, RemainderMethod};
use specshift_core::ssf::{ssf_compute, uniqueness_fit, SsfMethod};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn density_is_real_and_atomless(seed in any::<u64>(), d in 1usize..=4, m in 1usize..=5) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 1.0);
        let v = herm(&mut r, d, 0.7);
        let eta = ssf_compute(&h, &v, m, SsfMethod::Bspline).unwrap();
        prop_assert!(eta.imag_residue <= 1e-10 * eta.scale, "{} vs {}", eta.imag_residue, eta.scale);
        prop_assert!(eta.atomic_mass <= 1e-10, "{}", eta.atomic_mass);
    }

    #[test]
    fn support_within_spectral_hull(seed in any::<u64>(), d in 1usize..=4, m in 1usize..=4) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 1.0);
        let v = herm(&mut r, d, 0.7);
        let hv = h.add(&v).unwrap();
        let spec: Vec<f64> = h.eigenvalues().iter().chain(hv.eigenvalues()).copied().collect();
        let lo = spec.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = spec.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let eta = ssf_compute(&h, &v, m, SsfMethod::Bspline).unwrap();
        if let Some((a, b)) = eta.density.support() {
            prop_assert!(a >= lo && b <= hi, "[{a}, {b}] vs [{lo}, {hi}]");
        }
        prop_assert_eq!(eta.density.eval(lo - 1e-9).re, 0.0);
        prop_assert_eq!(eta.density.eval(hi + 1e-9).re, 0.0);
    }

    #[test]
    fn remainder_kills_low_monomials(seed in any::<u64>(), d in 1usize..=4, m in 1usize..=5) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 1.0);
        let v = herm(&mut r, d, 0.7);
        for k in 0..m {
            let t = taylor_remainder(&TestFunction::monomial(k), &h, &v, m, RemainderMethod::Direct).unwrap().trace();
            prop_assert!(t.norm() <= 1e-12, "k={k}: {t}");
        }
    }

    #[test]
    fn counting_matches_bspline(seed in any::<u64>(), d in 1usize..=5) {
        let mut r = rng(seed);
        let h = herm(&mut r, d, 1.0);
        let v = herm(&mut r, d, 0.8);
        let a = ssf_compute(&h, &v, 1, SsfMethod::Counting).unwrap();
        let b = ssf_compute(&h, &v, 1, SsfMethod::Bspline).unwrap();
        let fit = uniqueness_fit(&a, &b, 1).unwrap();
        prop_assert!(fit.coeffs[0].abs() <= 1e-9 && fit.residual <= 1e-9, "{fit:?}");
    }
}
