//! Gauss–Legendre and adaptive Gauss–Kronrod quadrature.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut z = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { z } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pnm1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if libm::fabs(dz) < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Fixed Gauss–Legendre rule on `[a, b]`.
pub fn integrate_gl(mut f: impl FnMut(f64) -> Complex64, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> Complex64 {
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    let mut s = crate::sum::CompensatedSum::new();
    for (x, w) in rule.0.iter().zip(&rule.1) {
        s.add(f(c + h * x) * *w);
    }
    s.value() * h
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Subdivision budget of [`integrate`].
pub const MAX_SUBDIVISIONS: usize = 2000;

/// Globally adaptive G7K15 integration of a complex integrand on a finite interval: the interval
/// with the largest error estimate is bisected until the total estimate meets
/// `max(abs_tol, rel_tol * |I|)`, falls to roundoff level, or the budget is spent.
pub fn integrate(mut f: impl FnMut(f64) -> Complex64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut parts: Vec<(f64, f64, Complex64, f64)> = alloc::vec![(a, b, v, e)];
    for _ in 0..MAX_SUBDIVISIONS {
        let mut total = crate::sum::CompensatedSum::new();
        let mut err = 0.0;
        let mut magnitude = 0.0;
        let mut worst = 0;
        for (i, p) in parts.iter().enumerate() {
            total.add(p.2);
            err += p.3;
            magnitude += p.2.norm();
            if p.3 > parts[worst].3 {
                worst = i;
            }
        }
        let floor = 50.0 * f64::EPSILON * magnitude;
        if err <= abs_tol.max(rel_tol * total.value().norm()).max(floor) {
            break;
        }
        let (lo, hi, _, _) = parts[worst];
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            break;
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        parts[worst] = (lo, mid, v1, e1);
        parts.push((mid, hi, v2, e2));
    }
    let mut total = crate::sum::CompensatedSum::new();
    for p in &parts {
        total.add(p.2);
    }
    total.value()
}

/// Adaptive integration over `[a, inf)` via `x = a + t/(1-t)`.
pub fn integrate_to_inf(mut f: impl FnMut(f64) -> Complex64, a: f64, abs_tol: f64, rel_tol: f64) -> Complex64 {
    integrate(
        |t| {
            let one_m = 1.0 - t;
            if one_m <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            f(a + t / one_m) / (one_m * one_m)
        },
        0.0,
        1.0,
        abs_tol,
        rel_tol,
    )
}

/// Adaptive integration over `(-inf, b]`.
pub fn integrate_from_neg_inf(mut f: impl FnMut(f64) -> Complex64, b: f64, abs_tol: f64, rel_tol: f64) -> Complex64 {
    integrate_to_inf(|y| f(-y), -b, abs_tol, rel_tol)
}
