use alloc::format;
use alloc::vec::Vec;

use super::expand::{index_tuples, ExpansionTerm};
use crate::error::{Error, Result};
use crate::functions::TestFunction;
use crate::linalg::{check_dims, func_calculus, HermitianOperator, Matrix};
use crate::moi::{moi_eval, IdentityResidual, MoiSymbol, OperatorTuple};

/// Order of the divided difference being decomposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    /// `m = 2n - 1`.
    Odd,
    /// `m = 2n`.
    Even,
}

impl Parity {
    pub fn order(self, n: usize) -> usize {
        match self {
            Parity::Odd => 2 * n - 1,
            Parity::Even => 2 * n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

/// `bar V_j`: `(H_{j-1}-i)^{-1} V_j (H_j-i)^{-1}` for odd `j`, `V_j` for even `j`.
#[derive(Clone, Debug)]
pub struct BarOperators {
    bars: Vec<Matrix>,
    dim: usize,
}

impl BarOperators {
    pub fn new(hs: &[HermitianOperator], vs: &[Matrix]) -> Result<Self> {
        if hs.len() != vs.len() + 1 {
            return Err(Error::DimensionMismatch { expected: vs.len() + 1, actual: hs.len() });
        }
        let d = hs[0].dim();
        for h in hs {
            check_dims(d, h.dim())?;
        }
        let mut bars = Vec::with_capacity(vs.len() + 1);
        bars.push(Matrix::identity(d));
        for (j, v) in vs.iter().enumerate().map(|(k, v)| (k + 1, v)) {
            check_dims(d, v.rows())?;
            check_dims(d, v.cols())?;
            bars.push(if j % 2 == 1 { &(&hs[j - 1].resolvent_i() * v) * &hs[j].resolvent_i() } else { v.clone() });
        }
        Ok(Self { bars, dim: d })
    }

    /// `bar V_j` for `j >= 1`.
    pub fn get(&self, j: usize) -> &Matrix {
        &self.bars[j]
    }

    /// `bar V_{i,j} = bar V_{i+1} ... bar V_j`, the identity when `i == j`.
    pub fn product(&self, i: usize, j: usize) -> Matrix {
        assert!(i <= j && j < self.bars.len(), "product indices out of range");
        Matrix::product(self.dim, &self.bars[i + 1..=j])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// A term of the odd/even decomposition together with its unsigned value.
#[derive(Clone, Debug)]
pub struct CorollaryTerm {
    pub term: ExpansionTerm,
    /// `p`, the order of the inner divided difference.
    pub p: usize,
    pub value: Matrix,
}

#[derive(Clone, Debug)]
pub struct CorollaryExpansion {
    pub parity: Parity,
    pub n: usize,
    pub terms: Vec<CorollaryTerm>,
    pub lhs: Matrix,
    pub rhs: Matrix,
    pub residual: IdentityResidual,
}

impl CorollaryExpansion {
    /// `R^p`, the unsigned sum of all terms of order `p`.
    pub fn block(&self, p: usize) -> Matrix {
        let d = self.lhs.rows();
        self.terms.iter().filter(|t| t.p == p).fold(Matrix::zeros(d, d), |acc, t| &acc + &t.value)
    }

    /// `(-1)^{p+1}` (odd) or `(-1)^p` (even).
    pub fn block_sign(&self, p: usize) -> f64 {
        let s = match self.parity {
            Parity::Odd => p + 1,
            Parity::Even => p,
        };
        if s % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Index tuples of the decomposition: `0 <= i_0 < ... < i_p <= m` (odd), or tuples ending at `i_p = 2n` (even).
pub fn corollary_indices(parity: Parity, n: usize) -> Vec<Vec<usize>> {
    let m = parity.order(n);
    match parity {
        Parity::Odd => index_tuples(m, &[], 0),
        Parity::Even => index_tuples(m, &[m], 0),
    }
}

/// Decomposes `T_{f^[m]}`, `m = 2n-1` or `2n`, into terms with `bar V` arguments and checks the sum.
pub fn corollary_expand(f: &TestFunction, parity: Parity, hs: &[HermitianOperator], vs: &[Matrix]) -> Result<CorollaryExpansion> {
    if vs.is_empty() {
        return crate::error::invalid("decomposition needs at least one argument");
    }
    let n = match parity {
        Parity::Odd if vs.len() % 2 == 1 => (vs.len() + 1) / 2,
        Parity::Even if vs.len() % 2 == 0 => vs.len() / 2,
        _ => return crate::error::invalid("argument count does not match the parity"),
    };
    let m = parity.order(n);
    let bars = BarOperators::new(hs, vs)?;
    let d = bars.dim();
    let lhs = moi_eval(&MoiSymbol::divided(f, m), &OperatorTuple::new(hs.to_vec(), vs.to_vec())?)?;
    let mut terms = Vec::new();
    let mut rhs = Matrix::zeros(d, d);
    for indices in corollary_indices(parity, n) {
        let p = indices.len() - 1;
        let weight_power = match parity {
            Parity::Odd => p as u32 + 1,
            Parity::Even => p as u32,
        };
        let left = bars.product(0, indices[0]);
        let inner = if p == 0 {
            let g = f.weight_multiply(weight_power);
            func_calculus(&g, &hs[indices[0]])?
        } else {
            let ops: Vec<HermitianOperator> = indices.iter().map(|&i| hs[i].clone()).collect();
            let args: Vec<Matrix> = indices.windows(2).map(|w| bars.product(w[0], w[1])).collect();
            moi_eval(&MoiSymbol::new(f.clone(), weight_power, p), &OperatorTuple::new(ops, args)?)?
        };
        let value = &(&left * &inner) * &bars.product(indices[p], m);
        let sign_exp = match parity {
            Parity::Odd => p + 1,
            Parity::Even => p,
        };
        let sign: i8 = if sign_exp % 2 == 0 { 1 } else { -1 };
        rhs = if sign > 0 { &rhs + &value } else { &rhs - &value };
        let mut descriptors = Vec::with_capacity(p + 2);
        descriptors.push(format!("Vbar[0,{}]", indices[0]));
        for w in indices.windows(2) {
            descriptors.push(format!("Vbar[{},{}]", w[0], w[1]));
        }
        descriptors.push(format!("Vbar[{},{}]", indices[p], m));
        terms.push(CorollaryTerm { term: ExpansionTerm { sign, k: p, indices, weight_power, descriptors }, p, value });
    }
    let refs: Vec<&Matrix> = terms.iter().map(|t| &t.value).collect();
    let residual = IdentityResidual::new(&lhs, &rhs, &refs);
    Ok(CorollaryExpansion { parity, n, terms, lhs, rhs, residual })
}
