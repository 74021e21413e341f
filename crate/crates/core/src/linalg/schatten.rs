use super::svd::singular_values;
use super::Matrix;
use crate::error::{Error, Result};

/// Schatten exponent `p` in `[1, inf]`; `inf` is the operator norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchattenIndex(f64);

impl SchattenIndex {
    pub const ONE: SchattenIndex = SchattenIndex(1.0);
    pub const TWO: SchattenIndex = SchattenIndex(2.0);
    pub const INF: SchattenIndex = SchattenIndex(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidSchattenIndex(p));
        }
        Ok(Self(p))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1/p`, zero for the operator norm.
    pub fn reciprocal(self) -> f64 {
        if self.0.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }
}

/// `(sum sigma_i^p)^{1/p}` over singular values.
pub fn schatten_norm(a: &Matrix, p: SchattenIndex) -> Result<f64> {
    let s = singular_values(a)?;
    Ok(norm_of_values(&s, p.value()))
}

/// Convenience wrapper taking a raw exponent.
pub fn schatten(a: &Matrix, p: f64) -> Result<f64> {
    schatten_norm(a, SchattenIndex::new(p)?)
}

/// Operator norm.
pub fn op_norm(a: &Matrix) -> f64 {
    schatten(a, f64::INFINITY).expect("SVD of a finite matrix")
}

pub(crate) fn norm_of_values(s: &[f64], p: f64) -> f64 {
    let max = s.iter().fold(0.0_f64, |m, &x| m.max(x));
    if max == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return max;
    }
    if p == 1.0 {
        return crate::sum::sum_f64(s.iter().copied());
    }
    let acc = crate::sum::sum_f64(s.iter().map(|&x| libm::pow(x / max, p)));
    max * libm::pow(acc, 1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_examples() {
        let a = Matrix::diag_real(&[3.0, 4.0]);
        assert!((schatten(&a, 2.0).unwrap() - 5.0).abs() < 1e-14);
        assert!((schatten(&a, 1.0).unwrap() - 7.0).abs() < 1e-14);
        assert_eq!(schatten(&a, f64::INFINITY).unwrap(), 4.0);
    }

    #[test]
    fn rejects_small_exponent() {
        assert_eq!(SchattenIndex::new(0.5), Err(Error::InvalidSchattenIndex(0.5)));
    }
}
