use alloc::vec::Vec;

use num_complex::Complex64;

use super::eval::{MoiSymbol, OperatorTuple};
use crate::error::{Error, Result};
use crate::functions::FunctionKind;
use crate::linalg::Matrix;
use crate::poly;

/// Separated-variables evaluation for rational symbols with simple poles.
///
/// For `f(x) = sum_j r_j/(x - z_j)` one has `f^[n](x_0..x_n) = (-1)^n sum_j r_j prod_k (x_k - z_j)^{-1}`,
/// so the integral is `(-1)^n sum_j r_j (H_0 - z_j)^{-1} V_1 (H_1 - z_j)^{-1} ... V_n (H_n - z_j)^{-1}`.
/// Only resolvents computed by elimination are used. Requires simple, distinct poles and a
/// weighted numerator of lower degree than the pole count.
pub fn pole_decomposition_moi(symbol: &MoiSymbol, tuple: &OperatorTuple) -> Result<Matrix> {
    let f = symbol.function();
    let (numerator, poles) = match &f.kind {
        FunctionKind::Rational { numerator, poles } => (numerator.clone(), poles.clone()),
        _ => return crate::error::invalid("pole decomposition needs a rational symbol"),
    };
    if poles.iter().any(|(_, k)| *k != 1) {
        return crate::error::invalid("pole decomposition needs simple poles");
    }
    let mut num = numerator;
    for _ in 0..f.weight_power {
        num = poly::mul(&num, &[Complex64::new(0.0, -1.0), Complex64::new(1.0, 0.0)]);
    }
    let num = poly::trim(num);
    if num.len() > poles.len() {
        return crate::error::invalid("pole decomposition needs a strictly proper rational symbol");
    }
    if symbol.order != tuple.order() {
        return Err(Error::DimensionMismatch { expected: symbol.order, actual: tuple.order() });
    }
    let n = tuple.order();
    let d = tuple.dim();
    let mut total = Matrix::zeros(d, d);
    for (j, &(z, _)) in poles.iter().enumerate() {
        let mut denom = Complex64::new(1.0, 0.0);
        for (k, &(w, _)) in poles.iter().enumerate() {
            if k != j {
                denom *= z - w;
            }
        }
        let r = poly::eval_complex(&num, z) * f.amplitude / denom;
        let res: Vec<Matrix> = tuple.operators.iter().map(|h| h.resolvent(z)).collect::<Result<_>>()?;
        let mut prod = res[0].clone();
        for k in 0..n {
            prod = &(&prod * &tuple.arguments[k]) * &res[k + 1];
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        total = &total + &prod.scale(r * sign);
    }
    Ok(total)
}
