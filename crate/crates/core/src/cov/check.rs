use alloc::vec::Vec;

use super::signature::{Eps, EpsilonSignature};
use crate::error::{Error, Result};
use crate::linalg::{check_dims, HermitianOperator, Matrix};

/// The resolvent-decorated operators `check U_0, ..., check U_m` of a signature.
#[derive(Clone, Debug)]
pub struct CheckOperators {
    checks: Vec<Matrix>,
    dim: usize,
}

impl CheckOperators {
    pub fn checks(&self) -> &[Matrix] {
        &self.checks
    }

    pub fn get(&self, j: usize) -> &Matrix {
        &self.checks[j]
    }

    /// `check U_{i,j} = check U_{i+1} ... check U_j`, the identity when `i == j`.
    pub fn product(&self, i: usize, j: usize) -> Matrix {
        assert!(i <= j && j < self.checks.len(), "product indices out of range");
        Matrix::product(self.dim, &self.checks[i + 1..=j])
    }

    /// `check U_0 ... check U_j`.
    pub fn prefix(&self, j: usize) -> Matrix {
        Matrix::product(self.dim, &self.checks[..=j])
    }
}

/// Builds `check U_j`: a left resolvent `(H_{j-1}-i)^{-1}` iff `eps_{j-1} = R`, a right
/// resolvent `(H_j-i)^{-1}` iff `eps_j = L`, with `eps_{-1} = 0`.
pub fn build_check_operators(eps: &EpsilonSignature, hs: &[HermitianOperator], us: &[Matrix]) -> Result<CheckOperators> {
    check_operators_raw(eps.entries(), hs, us)
}

pub(crate) fn check_operators_raw(eps: &[Eps], hs: &[HermitianOperator], us: &[Matrix]) -> Result<CheckOperators> {
    let len = eps.len();
    if hs.len() != len {
        return Err(Error::DimensionMismatch { expected: len, actual: hs.len() });
    }
    if us.len() != len {
        return Err(Error::DimensionMismatch { expected: len, actual: us.len() });
    }
    let d = hs[0].dim();
    for h in hs {
        check_dims(d, h.dim())?;
    }
    for u in us {
        check_dims(d, u.rows())?;
        check_dims(d, u.cols())?;
    }
    let res: Vec<Matrix> = hs.iter().map(|h| h.resolvent_i()).collect();
    let checks = (0..len)
        .map(|j| {
            let mut c = us[j].clone();
            if j > 0 && eps[j - 1] == Eps::R {
                c = &res[j - 1] * &c;
            }
            if eps[j] == Eps::L {
                c = &c * &res[j];
            }
            c
        })
        .collect();
    Ok(CheckOperators { checks, dim: d })
}
