use alloc::vec::Vec;

use num_complex::Complex64;

use super::TestFunction;
use crate::error::{Error, Result};

/// Relative distance below which nodes are merged into one confluent node.
pub const MERGE_TOL: f64 = 1e-8;

/// Sorted node values with nearby nodes replaced by their cluster mean.
///
/// Returns `(value, multiplicity)` pairs in ascending order.
pub fn merge_nodes(nodes: &[f64]) -> Vec<(f64, usize)> {
    let mut sorted = nodes.to_vec();
    sorted.sort_by(f64::total_cmp);
    let span = match (sorted.first(), sorted.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    let tol = MERGE_TOL * (1.0 + span);
    let mut groups: Vec<(f64, usize, f64, f64)> = Vec::new();
    for &x in &sorted {
        match groups.last_mut() {
            Some((sum, count, _, last)) if x - *last <= tol => {
                *sum += x;
                *count += 1;
                *last = x;
            }
            _ => groups.push((x, 1, x, x)),
        }
    }
    groups.into_iter().map(|(s, c, first, last)| ((s / c as f64).clamp(first, last), c)).collect()
}

/// Entries whose node span is below this are evaluated by Taylor expansion about their midpoint.
pub const NEAR_SPAN: f64 = 0.05;
/// Taylor terms used beyond the entry order.
pub const NEAR_TERMS: usize = 20;

/// `h_r(y)` for `r = 0..=max`, the complete homogeneous symmetric polynomials.
fn complete_homogeneous(y: &[f64], max: usize) -> Vec<f64> {
    let mut h = alloc::vec![0.0; max + 1];
    h[0] = 1.0;
    for &t in y {
        for r in 1..=max {
            h[r] += t * h[r - 1];
        }
    }
    h
}

/// Divided difference from merged nodes and a derivative oracle.
///
/// `taylor(z, r)` must return `f^(j)(z)/j!` for `j = 0..r`; `radius(z)` bounds the distance over
/// which Taylor series about `z` converge fast. Entries with nodes spread less than
/// `min(NEAR_SPAN, radius/4)` use `f[z_i..z_k] = sum_q t_q(c) h_{q-k+i}(z - c)` instead of the recursion.
pub fn divided_difference_merged(
    merged: &[(f64, usize)],
    mut taylor: impl FnMut(f64, usize) -> Result<Vec<Complex64>>,
    radius: impl Fn(f64) -> f64,
) -> Result<Complex64> {
    let mut z = Vec::new();
    let mut t: Vec<Vec<Complex64>> = Vec::new();
    for &(x, mult) in merged {
        let tc = taylor(x, mult)?;
        for _ in 0..mult {
            z.push(x);
            t.push(tc.clone());
        }
    }
    let p = z.len() - 1;
    let mut col: Vec<Complex64> = t.iter().map(|c| c[0]).collect();
    for j in 1..=p {
        let mut next = Vec::with_capacity(p + 1 - j);
        for i in j..=p {
            let (lo, hi) = (z[i - j], z[i]);
            let v = if lo == hi {
                t[i][j]
            } else {
                let c = 0.5 * (lo + hi);
                if hi - lo <= NEAR_SPAN.min(0.25 * radius(c)) {
                    let tc = taylor(c, j + NEAR_TERMS + 1)?;
                    let y: Vec<f64> = z[i - j..=i].iter().map(|x| x - c).collect();
                    let h = complete_homogeneous(&y, NEAR_TERMS);
                    let mut s = Complex64::new(0.0, 0.0);
                    for r in (0..=NEAR_TERMS).rev() {
                        s += tc[j + r] * h[r];
                    }
                    s
                } else {
                    (col[i - j + 1] - col[i - j]) / (hi - lo)
                }
            };
            next.push(v);
        }
        col = next;
    }
    Ok(col[0])
}

/// `f^(j)(x)/j!` for `j = 0..r`.
pub(crate) fn taylor_coeffs(f: &TestFunction, x: f64, r: usize) -> Result<Vec<Complex64>> {
    let d = f.derivatives(x, r - 1)?;
    let mut fact = 1.0;
    Ok(d.into_iter()
        .enumerate()
        .map(|(j, v)| {
            if j > 0 {
                fact *= j as f64;
            }
            v / fact
        })
        .collect())
}

/// `f^[p](nodes)` with `p = nodes.len() - 1`; coincident nodes use derivatives.
pub fn divided_difference(f: &TestFunction, nodes: &[f64]) -> Result<Complex64> {
    if nodes.is_empty() {
        return crate::error::invalid("divided difference needs at least one node");
    }
    if nodes.iter().any(|x| !x.is_finite()) {
        return crate::error::invalid("non-finite node");
    }
    let p = nodes.len() - 1;
    if let Some(s) = f.smoothness() {
        if (s as usize) < p {
            return Err(Error::InsufficientSmoothness { required: p, available: s as usize });
        }
    }
    let merged = merge_nodes(nodes);
    divided_difference_merged(&merged, |x, r| taylor_coeffs(f, x, r), |x| f.taylor_radius(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::to_complex;

    #[test]
    fn quadratic_second_difference() {
        let f = TestFunction::monomial(2);
        for nodes in [[0.1, 2.0, -3.0], [1.0, 1.0, 1.0], [0.0, 0.0, 5.0]] {
            assert!((divided_difference(&f, &nodes).unwrap() - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn weight_differences() {
        let u = TestFunction::weight();
        assert!((divided_difference(&u, &[0.3, -1.7]).unwrap() - 1.0).norm() < 1e-15);
        assert!(divided_difference(&u, &[0.3, -1.7, 4.0]).unwrap().norm() < 1e-15);
        assert!(divided_difference(&u, &[0.3, 0.3, 0.3, 2.0]).unwrap().norm() < 1e-15);
    }

    #[test]
    fn exp_confluent() {
        let f = TestFunction::exponential(Complex64::new(1.0, 0.0));
        assert!((divided_difference(&f, &[0.0, 0.0]).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn distinct_recursion_oracle() {
        let f = TestFunction::polynomial(to_complex(&[0.5, 1.0, -2.0, 0.25, 1.0]));
        let x = [0.3, -1.2, 2.2, 0.9];
        // textbook recursion on distinct nodes
        fn rec(f: &TestFunction, x: &[f64]) -> Complex64 {
            if x.len() == 1 {
                return f.eval(x[0]).unwrap();
            }
            let n = x.len();
            (rec(f, &x[1..]) - rec(f, &x[..n - 1])) / (x[n - 1] - x[0])
        }
        assert!((divided_difference(&f, &x).unwrap() - rec(&f, &x)).norm() < 1e-13);
    }

    #[test]
    fn smoothness_is_enforced() {
        let f = TestFunction::poly_bump(-1.0, 1.0, 2).unwrap();
        assert!(matches!(divided_difference(&f, &[0.0, 0.1, 0.2]), Err(Error::InsufficientSmoothness { .. })));
        assert!(divided_difference(&f, &[0.0, 0.1]).is_ok());
    }
}
