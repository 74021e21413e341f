use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::{divided_difference_merged, merge_nodes, taylor_coeffs, TestFunction};
use crate::linalg::{check_dims, HermitianOperator, Matrix};
use crate::sum::CompensatedSum;

/// Largest number of eigenvalue tuples a single evaluation may visit.
pub const TUPLE_LIMIT: u128 = 10_000_000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The divided-difference symbol `(base * u^l)^[order]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MoiSymbol {
    pub base: TestFunction,
    pub weight_power: u32,
    pub order: usize,
}

impl MoiSymbol {
    pub fn new(base: TestFunction, weight_power: u32, order: usize) -> Self {
        Self { base, weight_power, order }
    }

    /// `f^[order]` without extra weight.
    pub fn divided(base: &TestFunction, order: usize) -> Self {
        Self::new(base.clone(), 0, order)
    }

    /// The weighted function whose divided difference is the symbol.
    pub fn function(&self) -> TestFunction {
        self.base.weight_multiply(self.weight_power)
    }

    /// Symbol value at `order + 1` nodes.
    pub fn value(&self, nodes: &[f64]) -> Result<Complex64> {
        if nodes.len() != self.order + 1 {
            return Err(Error::DimensionMismatch { expected: self.order + 1, actual: nodes.len() });
        }
        crate::functions::divided_difference(&self.function(), nodes)
    }
}

/// Operators `H_0..H_p` and arguments `V_1..V_p`.
#[derive(Clone, Debug)]
pub struct OperatorTuple {
    pub operators: Vec<HermitianOperator>,
    pub arguments: Vec<Matrix>,
}

impl OperatorTuple {
    pub fn new(operators: Vec<HermitianOperator>, arguments: Vec<Matrix>) -> Result<Self> {
        if operators.is_empty() {
            return crate::error::invalid("operator tuple needs at least one operator");
        }
        if arguments.len() + 1 != operators.len() {
            return Err(Error::DimensionMismatch { expected: operators.len() - 1, actual: arguments.len() });
        }
        let d = operators[0].dim();
        for h in &operators {
            check_dims(d, h.dim())?;
        }
        for v in &arguments {
            check_dims(d, v.rows())?;
            check_dims(d, v.cols())?;
        }
        Ok(Self { operators, arguments })
    }

    /// `(H, ..., H)` with `k` copies of `V`.
    pub fn constant(h: &HermitianOperator, v: &Matrix, k: usize) -> Result<Self> {
        Self::new(alloc::vec![h.clone(); k + 1], alloc::vec![v.clone(); k])
    }

    pub fn order(&self) -> usize {
        self.arguments.len()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].dim()
    }
}

/// Prepared spectral data for evaluating one multiple operator integral entrywise.
///
/// Works in mixed eigenbases: with `H_j = U_j diag(lambda_j) U_j*` the result is
/// `U_0 X U_p*` where `X[a, b] = sum phi(lambda_0[a], ..., lambda_p[b]) W_1[a, k_1] ... W_p[k_{p-1}, b]`
/// and `W_j = U_{j-1}* V_j U_j`. Each entry is summed in lexicographic order of the middle indices.
pub struct MoiPlan {
    order: usize,
    dim: usize,
    lambdas: Vec<Vec<f64>>,
    mixed: Vec<Matrix>,
    left: Matrix,
    right_adj: Matrix,
    function: TestFunction,
    taylor: BTreeMap<u64, Vec<Complex64>>,
}

impl MoiPlan {
    pub fn new(symbol: &MoiSymbol, tuple: &OperatorTuple) -> Result<Self> {
        let p = tuple.order();
        if symbol.order != p {
            return Err(Error::DimensionMismatch { expected: symbol.order, actual: p });
        }
        let d = tuple.dim();
        let count = (d as u128).checked_pow(p as u32 + 1).unwrap_or(u128::MAX);
        if count > TUPLE_LIMIT {
            return Err(Error::TooManyTuples { count, limit: TUPLE_LIMIT });
        }
        let function = symbol.function();
        if let Some(s) = function.smoothness() {
            if (s as usize) < p {
                return Err(Error::InsufficientSmoothness { required: p, available: s as usize });
            }
        }
        let lambdas: Vec<Vec<f64>> =
            tuple.operators.iter().map(|h| h.clustered_eigenvalues(h.default_cluster_tolerance())).collect();
        let mixed: Vec<Matrix> = (0..p)
            .map(|j| {
                let a = tuple.operators[j].eigenvectors();
                let b = tuple.operators[j + 1].eigenvectors();
                &(&a.adjoint() * &tuple.arguments[j]) * b
            })
            .collect();
        let mut taylor = BTreeMap::new();
        for l in &lambdas {
            for &x in l {
                if let alloc::collections::btree_map::Entry::Vacant(e) = taylor.entry(x.to_bits()) {
                    e.insert(taylor_coeffs(&function, x, p + 1)?);
                }
            }
        }
        Ok(Self {
            order: p,
            dim: d,
            lambdas,
            mixed,
            left: tuple.operators[0].eigenvectors().clone(),
            right_adj: tuple.operators[p].eigenvectors().adjoint(),
            function,
            taylor,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn symbol_at(&self, nodes: &[f64]) -> Result<Complex64> {
        let merged = merge_nodes(nodes);
        divided_difference_merged(&merged, |x, r| match self.taylor.get(&x.to_bits()) {
            Some(c) if c.len() >= r => Ok(c[..r].to_vec()),
            _ => taylor_coeffs(&self.function, x, r),
        }, |x| self.function.taylor_radius(x))
    }

    /// Entry `X[a, b]` in the mixed eigenbasis.
    pub fn entry(&self, a: usize, b: usize) -> Result<Complex64> {
        let p = self.order;
        let d = self.dim;
        if p == 0 {
            return if a == b { self.symbol_at(&[self.lambdas[0][a]]) } else { Ok(ZERO) };
        }
        let mut idx = alloc::vec![0usize; p + 1];
        idx[0] = a;
        idx[p] = b;
        let mut nodes = alloc::vec![0.0; p + 1];
        let mut acc = CompensatedSum::new();
        let inner = p - 1;
        loop {
            let mut prod = Complex64::new(1.0, 0.0);
            for j in 0..p {
                prod *= self.mixed[j][(idx[j], idx[j + 1])];
                if prod == ZERO {
                    break;
                }
            }
            if prod != ZERO {
                for (j, slot) in nodes.iter_mut().enumerate() {
                    *slot = self.lambdas[j][idx[j]];
                }
                acc.add(self.symbol_at(&nodes)? * prod);
            }
            // advance the middle multi-index lexicographically (last index fastest)
            let mut pos = inner;
            loop {
                if pos == 0 {
                    return Ok(acc.value());
                }
                idx[pos] += 1;
                if idx[pos] < d {
                    break;
                }
                idx[pos] = 0;
                pos -= 1;
            }
        }
    }

    /// `U_0 X U_p*` for a fully computed mixed-basis matrix `X`.
    pub fn assemble(&self, x: &Matrix) -> Matrix {
        &(&self.left * x) * &self.right_adj
    }

    pub fn evaluate(&self) -> Result<Matrix> {
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                data.push(self.entry(a, b)?);
            }
        }
        Ok(self.assemble(&Matrix::from_row_major(d, d, data)?))
    }
}

/// `T^{H_0..H_p}_{symbol}(V_1..V_p)`, the finite spectral sum.
pub fn moi_eval(symbol: &MoiSymbol, tuple: &OperatorTuple) -> Result<Matrix> {
    if tuple.arguments.iter().any(|v| v.is_zero()) {
        if symbol.order != tuple.order() {
            return Err(Error::DimensionMismatch { expected: symbol.order, actual: tuple.order() });
        }
        return Ok(Matrix::zeros(tuple.dim(), tuple.dim()));
    }
    MoiPlan::new(symbol, tuple)?.evaluate()
}

/// Convenience form taking slices.
pub fn moi(f: &TestFunction, weight_power: u32, hs: &[&HermitianOperator], vs: &[&Matrix]) -> Result<Matrix> {
    let tuple = OperatorTuple::new(hs.iter().map(|h| (*h).clone()).collect(), vs.iter().map(|v| (*v).clone()).collect())?;
    moi_eval(&MoiSymbol::new(f.clone(), weight_power, vs.len()), &tuple)
}
