//! Dense polynomial helpers on ascending coefficient vectors.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn eval(c: &[Complex64], s: f64) -> Complex64 {
    c.iter().rev().fold(ZERO, |acc, &a| acc * s + a)
}

pub fn eval_complex(c: &[Complex64], s: Complex64) -> Complex64 {
    c.iter().rev().fold(ZERO, |acc, &a| acc * s + a)
}

pub fn eval_real(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
}

pub fn derivative(c: &[Complex64]) -> Vec<Complex64> {
    if c.len() <= 1 {
        return vec![ZERO];
    }
    c.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect()
}

pub fn derivative_real(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect()
}

/// Antiderivative vanishing at `s = 0`.
pub fn antiderivative(c: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(c.len() + 1);
    out.push(ZERO);
    out.extend(c.iter().enumerate().map(|(k, &a)| a / (k + 1) as f64));
    out
}

pub fn add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    (0..n).map(|k| a.get(k).copied().unwrap_or(ZERO) + b.get(k).copied().unwrap_or(ZERO)).collect()
}

pub fn scale(a: &[Complex64], s: Complex64) -> Vec<Complex64> {
    a.iter().map(|&x| x * s).collect()
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn mul_real(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of `q(s) = p(s + h)`.
pub fn shift(c: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = c.len();
    let mut out = c.to_vec();
    // repeated synthetic division (Taylor shift)
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let next = out[j + 1];
            out[j] += next * h;
        }
    }
    out
}

/// Drops trailing exact zeros, keeping at least one coefficient.
pub fn trim(mut c: Vec<Complex64>) -> Vec<Complex64> {
    while c.len() > 1 && *c.last().unwrap() == ZERO {
        c.pop();
    }
    if c.is_empty() {
        c.push(ZERO);
    }
    c
}

pub fn to_complex(c: &[f64]) -> Vec<Complex64> {
    c.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn bisect_root(c: &[f64], mut a: f64, mut b: f64) -> f64 {
    let mut fa = eval_real(c, a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = eval_real(c, m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Sign-change roots of a real polynomial in the open interval `(a, b)`, ascending.
///
/// Roots are isolated between critical points, found recursively from the derivative.
pub fn real_roots_in(c: &[f64], a: f64, b: f64) -> Vec<f64> {
    let mut c = c.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    if c.len() <= 1 || !(a < b) {
        return Vec::new();
    }
    let mut pts = vec![a];
    pts.extend(real_roots_in(&derivative_real(&c), a, b));
    pts.push(b);
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let (f0, f1) = (eval_real(&c, x0), eval_real(&c, x1));
        if f0 == 0.0 && x0 > a && roots.last().map_or(true, |&r| r < x0) {
            roots.push(x0);
        }
        if f0 != 0.0 && f1 != 0.0 && (f0 > 0.0) != (f1 > 0.0) {
            roots.push(bisect_root(&c, x0, x1));
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_matches_evaluation() {
        let p = to_complex(&[1.0, -2.0, 0.5, 3.0]);
        let q = shift(&p, 0.7);
        for &s in &[-1.0, 0.0, 0.3, 2.0] {
            assert!((eval(&q, s) - eval(&p, s + 0.7)).norm() < 1e-13);
        }
    }

    #[test]
    fn roots_of_cubic() {
        // (x+1)(x-0.5)(x-2)
        let c = mul_real(&mul_real(&[1.0, 1.0], &[-0.5, 1.0]), &[-2.0, 1.0]);
        let r = real_roots_in(&c, -3.0, 3.0);
        assert_eq!(r.len(), 3);
        for (x, y) in r.iter().zip([-1.0, 0.5, 2.0]) {
            assert!((x - y).abs() < 1e-13);
        }
    }

    #[test]
    fn antiderivative_roundtrip() {
        let p = to_complex(&[2.0, 3.0, -1.0]);
        assert_eq!(derivative(&antiderivative(&p)), p);
    }
}
