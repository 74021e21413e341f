use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::check::check_operators_raw;
use super::signature::{zero_set, Eps, EpsilonSignature};
use crate::error::{Error, Result};
use crate::functions::{divided_difference, TestFunction};
use crate::linalg::{HermitianOperator, Matrix};
use crate::moi::{moi_eval, IdentityResidual, MoiSymbol, OperatorTuple};

/// One signed summand `sign * left * T^{H_{i_0}..H_{i_k}}_{(g u^w)^[k]}(args) * right`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionTerm {
    pub sign: i8,
    pub k: usize,
    pub indices: Vec<usize>,
    pub weight_power: u32,
    /// Left factor, the `k` inner arguments, and the right factor, in that order.
    pub descriptors: Vec<String>,
}

/// Index tuples `i_0 < ... < i_k` in `0..=m` containing `required`, for `k` from `k_min` to `m`.
///
/// Ordered by `k`, then lexicographically.
pub fn index_tuples(m: usize, required: &[usize], k_min: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in k_min..=m {
        let mut idx: Vec<usize> = (0..=k).collect();
        loop {
            if required.iter().all(|r| idx.binary_search(r).is_ok()) {
                out.push(idx.clone());
            }
            // next combination of k+1 elements from 0..=m
            let mut pos = k as isize;
            while pos >= 0 && idx[pos as usize] == m - k + pos as usize {
                pos -= 1;
            }
            if pos < 0 {
                break;
            }
            let p = pos as usize;
            idx[p] += 1;
            for t in p + 1..=k {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    out
}

/// The summands of the expansion for `eps`, without their values.
pub fn expansion_terms(eps: &[Eps]) -> Vec<ExpansionTerm> {
    let m = eps.len() - 1;
    let zeros = zero_set(eps);
    let q = zeros.len();
    index_tuples(m, &zeros, q.saturating_sub(1))
        .into_iter()
        .map(|indices| {
            let k = indices.len() - 1;
            let mut descriptors = Vec::with_capacity(k + 2);
            descriptors.push(format!("U[0,{}]", indices[0]));
            for w in indices.windows(2) {
                descriptors.push(format!("U[{},{}]", w[0], w[1]));
            }
            descriptors.push(format!("U[{},{}]", indices[k], m));
            ExpansionTerm {
                sign: if (m - k) % 2 == 0 { 1 } else { -1 },
                k,
                weight_power: (k + 1 - q) as u32,
                indices,
                descriptors,
            }
        })
        .collect()
}

/// Both sides of the operator expansion and per-term values.
#[derive(Clone, Debug)]
pub struct CovExpansion {
    pub terms: Vec<ExpansionTerm>,
    /// Unsigned value of each term, aligned with `terms`.
    pub values: Vec<Matrix>,
    pub lhs: Matrix,
    pub rhs: Matrix,
    pub residual: IdentityResidual,
}

/// Expands `T^{H_0..H_m}_{g^[m]}(V_1..V_m)` by the resolvent change of variables for `eps`.
pub fn cov_expand(g: &TestFunction, eps: &EpsilonSignature, hs: &[HermitianOperator], vs: &[Matrix]) -> Result<CovExpansion> {
    let m = eps.order();
    if vs.len() != m {
        return Err(Error::DimensionMismatch { expected: m, actual: vs.len() });
    }
    if hs.len() != m + 1 {
        return Err(Error::DimensionMismatch { expected: m + 1, actual: hs.len() });
    }
    let d = hs[0].dim();
    let mut us = Vec::with_capacity(m + 1);
    us.push(Matrix::identity(d));
    us.extend(vs.iter().cloned());
    let checks = check_operators_raw(eps.entries(), hs, &us)?;
    let lhs = moi_eval(&MoiSymbol::divided(g, m), &OperatorTuple::new(hs.to_vec(), vs.to_vec())?)?;
    let terms = expansion_terms(eps.entries());
    let mut values = Vec::with_capacity(terms.len());
    let mut rhs = Matrix::zeros(d, d);
    for t in &terms {
        let ops: Vec<HermitianOperator> = t.indices.iter().map(|&i| hs[i].clone()).collect();
        let args: Vec<Matrix> = t.indices.windows(2).map(|w| checks.product(w[0], w[1])).collect();
        let inner = moi_eval(&MoiSymbol::new(g.clone(), t.weight_power, t.k), &OperatorTuple::new(ops, args)?)?;
        let value = &(&checks.product(0, t.indices[0]) * &inner) * &checks.product(t.indices[t.k], m);
        rhs = if t.sign > 0 { &rhs + &value } else { &rhs - &value };
        values.push(value);
    }
    let refs: Vec<&Matrix> = values.iter().collect();
    let residual = IdentityResidual::new(&lhs, &rhs, &refs);
    Ok(CovExpansion { terms, values, lhs, rhs, residual })
}

/// Both sides of the scalar identity for an arbitrary word `eps` at explicit nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarIdentity {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `1 + |lhs| + sum |terms|`.
    pub scale: f64,
}

impl ScalarIdentity {
    pub fn relative(&self) -> f64 {
        (self.lhs - self.rhs).norm() / self.scale
    }
}

/// `g^[m](nodes)` against `sum (-1)^{m-k} (g u^{k-q+1})^[k](nodes_I) prod_{eps_i != 0} u^{-1}(nodes_i)`.
///
/// Holds for every word over `{L, 0, R}`, with no endpoint restriction.
pub fn scalar_cov_identity(g: &TestFunction, eps: &[Eps], nodes: &[f64]) -> Result<ScalarIdentity> {
    if eps.is_empty() {
        return crate::error::invalid("signature needs at least one entry");
    }
    if nodes.len() != eps.len() {
        return Err(Error::DimensionMismatch { expected: eps.len(), actual: nodes.len() });
    }
    let lhs = divided_difference(g, nodes)?;
    let mut factor = Complex64::new(1.0, 0.0);
    for (e, &x) in eps.iter().zip(nodes) {
        if *e != Eps::Zero {
            factor /= crate::weight_u(x);
        }
    }
    let mut rhs = Complex64::new(0.0, 0.0);
    let mut scale = 1.0 + lhs.norm();
    for t in expansion_terms(eps) {
        let sub: Vec<f64> = t.indices.iter().map(|&i| nodes[i]).collect();
        let v = divided_difference(&g.weight_multiply(t.weight_power), &sub)? * factor;
        scale += v.norm();
        rhs += if t.sign > 0 { v } else { -v };
    }
    Ok(ScalarIdentity { lhs, rhs, scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_complete() {
        let all = index_tuples(3, &[], 0);
        assert_eq!(all.len(), 15);
        let with_two = index_tuples(3, &[2], 0);
        assert_eq!(with_two.len(), 8);
        assert!(with_two.iter().all(|t| t.contains(&2)));
    }

    #[test]
    fn all_zero_is_single_term() {
        let eps = [Eps::Zero; 4];
        let t = expansion_terms(&eps);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].indices, alloc::vec![0, 1, 2, 3]);
        assert_eq!(t[0].weight_power, 0);
        let g = TestFunction::gaussian(0.1, 0.7).unwrap();
        let s = scalar_cov_identity(&g, &eps, &[0.3, -0.2, 1.1, 0.5]).unwrap();
        assert_eq!(s.lhs, s.rhs);
    }

    #[test]
    fn first_order_constant() {
        // g = 1: g^[1] = 0 and (u^2)^[1](a, b) = u(a) + u(b)
        let g = TestFunction::polynomial_real(&[1.0]);
        let (a, b) = (0.4, -1.3);
        let s = scalar_cov_identity(&g, &[Eps::R, Eps::L], &[a, b]).unwrap();
        assert!(s.lhs.norm() < 1e-15);
        assert!((s.lhs - s.rhs).norm() < 1e-14);
        let sq = divided_difference(&g.weight_multiply(2), &[a, b]).unwrap();
        assert!((sq - crate::weight_u(a) - crate::weight_u(b)).norm() < 1e-14);
    }
}
