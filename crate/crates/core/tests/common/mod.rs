#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specshift_core::functions::TestFunction;
use specshift_core::linalg::{HermitianOperator, Matrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn matrix(r: &mut ChaCha8Rng, d: usize, scale: f64) -> Matrix {
    Matrix::from_fn(d, d, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)) * scale)
}

pub fn herm(r: &mut ChaCha8Rng, d: usize, scale: f64) -> HermitianOperator {
    let m = matrix(r, d, 1.0);
    HermitianOperator::new((&m + &m.adjoint()).scale_real(0.5 * scale)).unwrap()
}

pub fn nodes(r: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| r.gen_range(-2.0..2.0)).collect()
}

/// Rational with `count` simple poles off the axis.
pub fn rational(r: &mut ChaCha8Rng, count: usize) -> TestFunction {
    let poles: Vec<Complex64> = (0..count)
        .map(|k| {
            let im = r.gen_range(0.6..1.8);
            Complex64::new(r.gen_range(-2.0..2.0), if k % 2 == 0 { im } else { -im })
        })
        .collect();
    TestFunction::simple_poles(&poles).unwrap()
}

pub fn gaussian(r: &mut ChaCha8Rng) -> TestFunction {
    TestFunction::gaussian(r.gen_range(-1.0..1.0), r.gen_range(0.5..1.5)).unwrap()
}
