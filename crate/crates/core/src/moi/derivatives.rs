use alloc::vec;
use alloc::vec::Vec;

use super::eval::{moi_eval, MoiSymbol, OperatorTuple};
use crate::error::{Error, Result};
use crate::functions::TestFunction;
use crate::linalg::{check_dims, func_calculus, op_norm, residual_scale, HermitianOperator, Matrix};

/// Residual of an operator identity `lhs = rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    /// `||lhs - rhs||` in operator norm.
    pub absolute: f64,
    /// `1 + ||lhs|| + sum ||terms||`.
    pub scale: f64,
}

impl IdentityResidual {
    pub fn new(lhs: &Matrix, rhs: &Matrix, terms: &[&Matrix]) -> Self {
        Self { absolute: op_norm(&(lhs - rhs)), scale: residual_scale(lhs, terms) }
    }

    pub fn relative(&self) -> f64 {
        self.absolute / self.scale
    }

    /// Worst relative residual of a list.
    pub fn worst(list: &[IdentityResidual]) -> f64 {
        list.iter().fold(0.0, |m, r| m.max(r.relative()))
    }
}

/// `(1/k!) d^k/dt^k f(H + tV)|_{t=0}` as the multiple operator integral of `f^[k]` on `(H, ..., H)`.
pub fn frechet_derivative(f: &TestFunction, h: &HermitianOperator, v: &HermitianOperator, k: usize) -> Result<Matrix> {
    check_dims(h.dim(), v.dim())?;
    if k == 0 {
        return func_calculus(f, h);
    }
    moi_eval(&MoiSymbol::divided(f, k), &OperatorTuple::constant(h, v.matrix(), k)?)
}

/// How the Taylor remainder is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemainderMethod {
    /// `f(H+V) - sum_{k<n} D_k`.
    Direct,
    /// The single integral of `f^[n]` on `(H, H+V, H, ..., H)`.
    Moi,
}

/// `n`th Taylor remainder `R_{n,H,f}(V)`.
pub fn taylor_remainder(f: &TestFunction, h: &HermitianOperator, v: &HermitianOperator, n: usize, method: RemainderMethod) -> Result<Matrix> {
    check_dims(h.dim(), v.dim())?;
    let hv = h.add(v)?;
    match method {
        RemainderMethod::Direct => {
            let mut r = func_calculus(f, &hv)?;
            for k in 0..n {
                r = &r - &frechet_derivative(f, h, v, k)?;
            }
            Ok(r)
        }
        RemainderMethod::Moi => {
            if n == 0 {
                return func_calculus(f, &hv);
            }
            let mut ops = vec![h.clone(), hv];
            ops.extend(core::iter::repeat(h.clone()).take(n - 1));
            moi_eval(&MoiSymbol::divided(f, n), &OperatorTuple::new(ops, vec![v.matrix().clone(); n])?)
        }
    }
}

/// Both sides of the perturbation formula for inserting `A` versus `B` at `slot` (1-based).
///
/// `hs` holds the `n` fixed operators and `vs` the `n` arguments; the left side is
/// `T^{..,A,..}_{f^[n]} - T^{..,B,..}_{f^[n]}` and the right side `T^{..,A,B,..}_{f^[n+1]}(.., A-B, ..)`.
pub fn perturbation_identity(
    f: &TestFunction,
    hs: &[HermitianOperator],
    vs: &[Matrix],
    a: &HermitianOperator,
    b: &HermitianOperator,
    slot: usize,
) -> Result<IdentityResidual> {
    let n = vs.len();
    if hs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: hs.len() });
    }
    if slot == 0 || slot > n + 1 {
        return crate::error::invalid("perturbation slot must lie in 1..=n+1");
    }
    let at = slot - 1;
    let with = |x: &HermitianOperator| {
        let mut ops = hs.to_vec();
        ops.insert(at, x.clone());
        ops
    };
    let ta = moi_eval(&MoiSymbol::divided(f, n), &OperatorTuple::new(with(a), vs.to_vec())?)?;
    let tb = moi_eval(&MoiSymbol::divided(f, n), &OperatorTuple::new(with(b), vs.to_vec())?)?;
    let mut ops = hs.to_vec();
    ops.insert(at, b.clone());
    ops.insert(at, a.clone());
    let mut args = vs.to_vec();
    args.insert(at, a.matrix() - b.matrix());
    let rhs = moi_eval(&MoiSymbol::divided(f, n + 1), &OperatorTuple::new(ops, args)?)?;
    let lhs = &ta - &tb;
    Ok(IdentityResidual::new(&lhs, &rhs, &[&ta, &tb, &rhs]))
}

/// Residuals of the three basic change-of-variables identities on one tuple.
///
/// Index 0 is the left-resolvent form, the last the right-resolvent form, and the
/// entries in between are the middle forms for `j = 1..n-1`.
pub fn basic_change_of_variables(f: &TestFunction, tuple: &OperatorTuple) -> Result<Vec<IdentityResidual>> {
    let n = tuple.order();
    if n == 0 {
        return crate::error::invalid("change of variables needs at least one argument");
    }
    let hs = &tuple.operators;
    let vs = &tuple.arguments;
    let res: Vec<Matrix> = hs.iter().map(|h| h.resolvent_i()).collect();
    let lhs = moi_eval(&MoiSymbol::divided(f, n), tuple)?;
    let weighted = moi_eval(&MoiSymbol::new(f.clone(), 1, n), tuple)?;
    let lower = |ops: Vec<HermitianOperator>, args: Vec<Matrix>| -> Result<Matrix> {
        moi_eval(&MoiSymbol::divided(f, n - 1), &OperatorTuple::new(ops, args)?)
    };
    let mut out = Vec::with_capacity(n + 1);

    let t1 = &res[0] * &weighted;
    let t2 = &(&res[0] * &vs[0]) * &lower(hs[1..].to_vec(), vs[1..].to_vec())?;
    out.push(IdentityResidual::new(&lhs, &(&t1 - &t2), &[&t1, &t2]));

    for j in 1..n {
        let mut args = vs.clone();
        args[j - 1] = &vs[j - 1] * &res[j];
        let t1 = moi_eval(&MoiSymbol::new(f.clone(), 1, n), &OperatorTuple::new(hs.clone(), args)?)?;
        let mut ops = hs.clone();
        ops.remove(j);
        let mut args = vs.clone();
        let merged = &(&vs[j - 1] * &res[j]) * &vs[j];
        args.splice(j - 1..=j, core::iter::once(merged));
        let t2 = lower(ops, args)?;
        out.push(IdentityResidual::new(&lhs, &(&t1 - &t2), &[&t1, &t2]));
    }

    let t1 = &weighted * &res[n];
    let t2 = &(&lower(hs[..n].to_vec(), vs[..n - 1].to_vec())? * &vs[n - 1]) * &res[n];
    out.push(IdentityResidual::new(&lhs, &(&t1 - &t2), &[&t1, &t2]));
    Ok(out)
}

/// `||D_k(H + tV) - D_k(H)||` for `t = 2^-1, ..., 2^-steps`.
pub fn derivative_continuity(f: &TestFunction, h: &HermitianOperator, v: &HermitianOperator, k: usize, steps: u32) -> Result<Vec<f64>> {
    let d0 = frechet_derivative(f, h, v, k)?;
    (1..=steps)
        .map(|j| {
            let t = libm::pow(2.0, -(j as f64));
            let ht = h.add(&v.scale(t)?)?;
            Ok(op_norm(&(&frechet_derivative(f, &ht, v, k)? - &d0)))
        })
        .collect()
}
