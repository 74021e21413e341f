mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use specshift_core::cov::{corollary_expand, cov_expand, scalar_cov_identity, signature_for_j, Eps, EpsilonSignature, Parity};
use specshift_core::linalg::{HermitianOperator, Matrix};

fn signature(r: &mut rand_chacha::ChaCha8Rng, m: usize) -> Vec<Eps> {
    let letters = [Eps::L, Eps::Zero, Eps::R];
    let mut e: Vec<Eps> = (0..=m).map(|_| letters[r.gen_range(0..3)]).collect();
    if e[0] == Eps::L {
        e[0] = if r.gen_bool(0.5) { Eps::Zero } else { Eps::R };
    }
    if e[m] == Eps::R {
        e[m] = if r.gen_bool(0.5) { Eps::Zero } else { Eps::L };
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scalar_identity_for_any_word(seed in any::<u64>(), m in 1usize..=5) {
        let mut r = rng(seed);
        let g = if r.gen_bool(0.5) { rational(&mut r, 4) } else { gaussian(&mut r) };
        let eps = signature(&mut r, m);
        let x = nodes(&mut r, m + 1);
        let id = scalar_cov_identity(&g, &eps, &x).unwrap();
        prop_assert!(id.relative() <= 1e-10, "{}", id.relative());
    }

    #[test]
    fn signature_postcondition(seed in any::<u64>(), m in 1usize..=8) {
        let mut r = rng(seed);
        let mut j_set = Vec::new();
        let mut j = r.gen_range(1..=2);
        while j <= m {
            j_set.push(j);
            j += r.gen_range(2..=3);
        }
        let sig = signature_for_j(&j_set, m).unwrap();
        prop_assert_eq!(sig.order(), m);
        let e = sig.entries();
        prop_assert!(e[0] != Eps::L && e[m] != Eps::R);
        for &j in &j_set {
            prop_assert!(sig.double_resolvented(j));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_expansion(seed in any::<u64>(), d in 2usize..=4, m in 1usize..=4) {
        let mut r = rng(seed);
        let g = rational(&mut r, 3);
        let sig = EpsilonSignature::new(signature(&mut r, m)).unwrap();
        let hs: Vec<HermitianOperator> = (0..=m).map(|_| herm(&mut r, d, 1.5)).collect();
        let vs: Vec<Matrix> = (0..m).map(|_| matrix(&mut r, d, 0.6)).collect();
        let e = cov_expand(&g, &sig, &hs, &vs).unwrap();
        prop_assert!(e.residual.relative() <= 1e-9, "{sig}: {}", e.residual.relative());
    }

    #[test]
    fn remainder_decompositions(seed in any::<u64>(), d in 2usize..=4, even in any::<bool>()) {
        let mut r = rng(seed);
        let parity = if even { Parity::Even } else { Parity::Odd };
        let m = parity.order(2);
        let f = gaussian(&mut r);
        let h = herm(&mut r, d, 1.0);
        let v = herm(&mut r, d, 0.6);
        let mut hs = vec![h.clone(); m + 1];
        hs[1] = h.add(&v).unwrap();
        let vs = vec![v.matrix().clone(); m];
        let e = corollary_expand(&f, parity, &hs, &vs).unwrap();
        prop_assert!(e.residual.relative() <= 1e-9, "{}", e.residual.relative());
    }
}
