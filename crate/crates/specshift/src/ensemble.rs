//! Seeded random ensembles. Every instance draws from its own ChaCha20 stream, so results do not
//! depend on how instances are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use specshift_core::cov::Eps;
use specshift_core::functions::TestFunction;
use specshift_core::linalg::{op_norm, HermitianOperator, Matrix};
use specshift_core::ssf::DiscreteMeasure;
use specshift_core::Complex64;

use crate::config::FamilySpec;

/// Stream namespaces, one per consumer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Identities = 1,
    Ssf = 2,
    TraceFormula = 3,
    Scaling = 4,
    WeightShift = 5,
    Approx = 6,
    Family = 7,
    Acceptance = 8,
}

pub fn instance_rng(seed: u64, stream: Stream, index: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(((stream as u64) << 40) | index);
    r
}

pub fn random_matrix(r: &mut impl Rng, d: usize, scale: f64) -> Matrix {
    Matrix::from_fn(d, d, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)) * scale)
}

/// Random Hermitian matrix with operator norm `norm`.
pub fn random_hermitian(r: &mut impl Rng, d: usize, norm: f64) -> HermitianOperator {
    let a = random_matrix(r, d, 1.0);
    let s = (&a + &a.adjoint()).scale_real(0.5);
    let n = op_norm(&s);
    let s = if n > 0.0 { s.scale_real(norm / n) } else { s };
    HermitianOperator::new(s).expect("finite Hermitian matrix")
}

/// Eigenvalues `-1 + 2k/(d-1)` jittered by at most `jitter`, in a random unitary basis.
pub fn separated_hermitian(r: &mut impl Rng, d: usize, jitter: f64) -> HermitianOperator {
    let basis = random_hermitian(r, d, 1.0).eigenvectors().clone();
    let values: Vec<f64> = (0..d)
        .map(|k| {
            let base = if d == 1 { 0.0 } else { -1.0 + 2.0 * k as f64 / (d - 1) as f64 };
            base + r.gen_range(-jitter..=jitter)
        })
        .collect();
    let m = &(&basis * &Matrix::diag_real(&values)) * &basis.adjoint();
    HermitianOperator::new(m).expect("finite Hermitian matrix")
}

pub fn random_nodes(r: &mut impl Rng, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..count).map(|_| r.gen_range(lo..hi)).collect()
}

/// Word over `{L, 0, R}` of length `m + 1` with `eps_0 != L` and `eps_m != R`.
pub fn random_word(r: &mut impl Rng, m: usize) -> Vec<Eps> {
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

/// Rational function with `count` simple poles, imaginary parts of alternating sign.
pub fn random_rational(r: &mut impl Rng, count: usize) -> TestFunction {
    let poles: Vec<Complex64> = (0..count)
        .map(|k| {
            let im = r.gen_range(0.6..1.8);
            Complex64::new(r.gen_range(-2.0..2.0), if k % 2 == 0 { im } else { -im })
        })
        .collect();
    TestFunction::simple_poles(&poles).expect("poles off the real line")
}

pub fn random_gaussian(r: &mut impl Rng) -> TestFunction {
    TestFunction::gaussian(r.gen_range(-1.0..1.0), r.gen_range(0.5..1.5)).expect("positive width")
}

fn random_interval(r: &mut impl Rng) -> (f64, f64) {
    let c = r.gen_range(-1.0..1.0);
    let w = r.gen_range(1.0..2.5);
    (c - w, c + w)
}

/// Family admissible for the trace formula at `n` in both parities.
pub fn admissible_family(r: &mut impl Rng, spec: &FamilySpec, n: usize) -> Vec<TestFunction> {
    let mut out = Vec::with_capacity(spec.total());
    for _ in 0..spec.rational {
        out.push(random_rational(r, 4 * n + 4));
    }
    for _ in 0..spec.gaussian {
        out.push(random_gaussian(r));
    }
    for _ in 0..spec.smooth_bump {
        let (a, b) = random_interval(r);
        out.push(TestFunction::smooth_bump(a, b).expect("nonempty interval"));
    }
    for _ in 0..spec.poly_bump {
        let (a, b) = random_interval(r);
        out.push(TestFunction::poly_bump(a, b, 2 * n as u32 + 3).expect("nonempty interval"));
    }
    out
}

/// Up to five atoms in `[-3, 3]` with complex weights.
pub fn random_measure(r: &mut impl Rng) -> DiscreteMeasure {
    let count = r.gen_range(1..=5);
    let points = random_nodes(r, count, -3.0, 3.0);
    let weights = (0..count).map(|_| Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0))).collect();
    DiscreteMeasure::new(points, weights).expect("finite atoms")
}

pub fn unit_vectors(r: &mut impl Rng, d: usize, count: usize) -> Vec<Vec<Complex64>> {
    (0..count)
        .map(|_| {
            let x: Vec<Complex64> = (0..d).map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
            let s = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            x.into_iter().map(|z| z / s).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: f64 = instance_rng(7, Stream::Ssf, 3).gen();
        let b: f64 = instance_rng(7, Stream::Ssf, 3).gen();
        let c: f64 = instance_rng(7, Stream::Ssf, 4).gen();
        let d: f64 = instance_rng(7, Stream::Approx, 3).gen();
        assert_eq!(a, b);
        assert!(a != c && a != d);
    }

    #[test]
    fn normalized_and_separated() {
        let mut r = instance_rng(1, Stream::Acceptance, 0);
        let v = random_hermitian(&mut r, 4, 0.2);
        assert!((v.norm() - 0.2).abs() < 1e-12);
        let h = separated_hermitian(&mut r, 4, 0.15);
        let e = h.eigenvalues();
        assert!(e.windows(2).all(|w| w[1] - w[0] > 0.3));
    }

    #[test]
    fn family_is_admissible() {
        use specshift_core::cov::Parity;
        let mut r = instance_rng(1, Stream::Family, 0);
        for n in [2, 3] {
            let f = admissible_family(&mut r, &FamilySpec::default(), n);
            for p in [Parity::Odd, Parity::Even] {
                specshift_core::ssf::check_family(n, p, &f).unwrap();
            }
        }
    }
}
