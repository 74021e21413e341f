use super::hermitian::{check_dims, HermitianOperator};
use super::schatten::{op_norm, schatten};
use super::Matrix;
use crate::error::Result;

/// Norms and identity residuals for the resolvent comparability condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolventComparability {
    /// `||(H+V-i)^{-1} - (H-i)^{-1}||_n`.
    pub lhs_norm: f64,
    /// `||(H-i)^{-1} V (H-i)^{-1}||_n`.
    pub rhs_norm: f64,
    /// Residuals of the two second-resolvent factorizations, each relative to its scale.
    pub identity_residuals: [f64; 2],
    /// Absolute residuals before scaling.
    pub absolute_residuals: [f64; 2],
    pub scales: [f64; 2],
}

/// Residual scale `1 + ||lhs|| + sum ||terms||` in operator norm.
pub fn residual_scale(lhs: &Matrix, terms: &[&Matrix]) -> f64 {
    1.0 + op_norm(lhs) + terms.iter().map(|t| op_norm(t)).sum::<f64>()
}

pub fn resolvent_comparability(h: &HermitianOperator, v: &HermitianOperator, n: u32) -> Result<ResolventComparability> {
    check_dims(h.dim(), v.dim())?;
    if n == 0 {
        return crate::error::invalid("Schatten order must be at least 1");
    }
    let hv = h.add(v)?;
    let r = h.resolvent_i();
    let rv = hv.resolvent_i();
    let vm = v.matrix();
    let diff = &r - &rv;
    let rvr = &(&r * vm) * &r;
    let p = n as f64;
    let lhs_norm = schatten(&(&rv - &r), p)?;
    let rhs_norm = schatten(&rvr, p)?;

    let t2 = &(&diff * vm) * &r;
    let rhs2 = &rvr - &t2;
    let t3 = &(&(&rv * vm) * &r) * &(vm * &r);
    let rhs3 = &rvr - &t3;
    let a2 = op_norm(&(&diff - &rhs2));
    let a3 = op_norm(&(&diff - &rhs3));
    let s2 = residual_scale(&diff, &[&rvr, &t2]);
    let s3 = residual_scale(&diff, &[&rvr, &t3]);
    Ok(ResolventComparability {
        lhs_norm,
        rhs_norm,
        identity_residuals: [a2 / s2, a3 / s3],
        absolute_residuals: [a2, a3],
        scales: [s2, s3],
    })
}

/// Residuals of `(H+V-i)^{-1} = (I - (H+V-i)^{-1}V)(H-i)^{-1}` and its mirror
/// `(H+V-i)^{-1} = (H-i)^{-1}(I - V(H+V-i)^{-1})`.
pub fn factorization_residuals(h: &HermitianOperator, v: &HermitianOperator) -> Result<[f64; 2]> {
    check_dims(h.dim(), v.dim())?;
    let id = Matrix::identity(h.dim());
    let r = h.resolvent_i();
    let rv = h.add(v)?.resolvent_i();
    let left = &(&id - &(&rv * v.matrix())) * &r;
    let right = &r * &(&id - &(v.matrix() * &rv));
    let s = 1.0 + op_norm(&rv);
    Ok([op_norm(&(&rv - &left)) / s, op_norm(&(&rv - &right)) / s])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn one_by_one_example() {
        let h = HermitianOperator::diag(&[0.0]).unwrap();
        let v = HermitianOperator::diag(&[1.0]).unwrap();
        let rep = resolvent_comparability(&h, &v, 1).unwrap();
        // scalar oracle: 1/(1-i) - 1/(-i) and (1/(-i))^2
        let one = Complex64::new(1.0, 0.0);
        let d = one / Complex64::new(1.0, -1.0) - one / Complex64::new(0.0, -1.0);
        let q = (one / Complex64::new(0.0, -1.0)).powi(2);
        assert!((rep.lhs_norm - d.norm()).abs() < 1e-15);
        assert!((rep.lhs_norm - 0.5_f64.sqrt()).abs() < 1e-15);
        assert!((rep.rhs_norm - q.norm()).abs() < 1e-15);
    }

    #[test]
    fn zero_perturbation() {
        let h = HermitianOperator::diag(&[0.5, -2.0]).unwrap();
        let v = HermitianOperator::zero(2).unwrap();
        let rep = resolvent_comparability(&h, &v, 2).unwrap();
        assert_eq!(rep.lhs_norm, 0.0);
        assert_eq!(rep.rhs_norm, 0.0);
    }
}
