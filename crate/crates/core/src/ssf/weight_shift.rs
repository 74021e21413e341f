use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::functions::TestFunction;
use crate::poly;
use crate::quadrature::{integrate, integrate_from_neg_inf, integrate_to_inf};
use crate::sum::CompensatedSum;
use crate::weight_u;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A finite sum of weighted point masses.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiscreteMeasure {
    pub points: Vec<f64>,
    pub weights: Vec<Complex64>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<f64>, weights: Vec<Complex64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), actual: weights.len() });
        }
        if points.iter().any(|x| !x.is_finite()) || weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return crate::error::invalid("measure points and weights must be finite");
        }
        Ok(Self { points, weights })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `sum |w_j|`.
    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).sum()
    }

    /// `int g^(n) u^m d mu`.
    pub fn integrate(&self, g: &TestFunction, n: usize, m: usize) -> Result<Complex64> {
        let mut s = CompensatedSum::new();
        for (&x, &w) in self.points.iter().zip(&self.weights) {
            s.add(w * g.derivative(x, n)? * weight_u(x).powu(m as u32));
        }
        Ok(s.value())
    }
}

/// Piecewise polynomial on the whole line; piece `i` covers `[b_{i-1}, b_i)` with `b_{-1} = -inf`
/// and `b_N = +inf`. Coefficients are in powers of `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailedPolynomial {
    breaks: Vec<f64>,
    pieces: Vec<Vec<Complex64>>,
}

impl TailedPolynomial {
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Vec<Complex64>] {
        &self.pieces
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let i = self.breaks.partition_point(|&b| b <= x);
        poly::eval(&self.pieces[i], x)
    }

    /// The antiderivative vanishing at `0`; `0` must be a breakpoint.
    fn antiderivative_from_zero(&self) -> Self {
        let mut pieces: Vec<Vec<Complex64>> = self.pieces.iter().map(|c| poly::antiderivative(c)).collect();
        let z = self.breaks.iter().position(|&b| b == 0.0).expect("zero is a breakpoint");
        // piece z + 1 starts at 0 and has value 0 there already
        for i in z + 2..pieces.len() {
            let b = self.breaks[i - 1];
            let shift = poly::eval(&pieces[i - 1], b) - poly::eval(&pieces[i], b);
            pieces[i][0] += shift;
        }
        for i in (0..=z).rev() {
            let b = self.breaks[i];
            let shift = poly::eval(&pieces[i + 1], b) - poly::eval(&pieces[i], b);
            pieces[i][0] += shift;
        }
        Self { breaks: self.breaks.clone(), pieces }
    }
}

/// `xi_1(x) = int_0^x u^m d mu` over `(0, x]` for `x >= 0` and `-mu((x, 0])` weighted for `x < 0`.
fn first_primitive(mu: &DiscreteMeasure, m: usize) -> TailedPolynomial {
    let mut breaks: Vec<f64> = mu.points.iter().copied().chain([0.0]).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mass = |lo: f64, hi: f64| {
        let mut s = CompensatedSum::new();
        for (&x, &w) in mu.points.iter().zip(&mu.weights) {
            if x > lo && x <= hi {
                s.add(w * weight_u(x).powu(m as u32));
            }
        }
        s.value()
    };
    let pieces = (0..=breaks.len())
        .map(|i| {
            // a representative value of piece i
            let x = if i == 0 { breaks[0] - 1.0 } else { breaks[i - 1] };
            let v = if x >= 0.0 { mass(0.0, x) } else { -mass(x, 0.0) };
            vec![v]
        })
        .collect();
    TailedPolynomial { breaks, pieces }
}

/// The density `(-1)^k u^{-m-k-eps} xi_k` of the shifted measure.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedMeasure {
    pub m: usize,
    pub k: usize,
    pub eps: f64,
    /// `xi_k`, with `xi_0` read as `u^m mu` and left empty.
    pub xi: TailedPolynomial,
}

impl ShiftedMeasure {
    fn exponent(&self) -> f64 {
        (self.m + self.k) as f64 + self.eps
    }

    pub fn density(&self, x: f64) -> Complex64 {
        let sign = if self.k % 2 == 0 { 1.0 } else { -1.0 };
        self.xi.eval(x) * weight_u(x).powf(-self.exponent()) * sign
    }

    /// `int g^(n+k) u^{m+k+eps} d mu~`.
    pub fn integrate(&self, g: &TestFunction, n: usize) -> Result<Complex64> {
        let e = self.exponent();
        let order = n + self.k;
        let mut err = None;
        let mut f = |x: f64| match g.derivative(x, order) {
            Ok(d) => d * weight_u(x).powf(e) * self.density(x),
            Err(er) => {
                err.get_or_insert(er);
                ZERO
            }
        };
        let total = line_integral(&mut f, &self.xi.breaks, &g.singular_points(), g.support());
        match err {
            Some(e) => Err(e),
            None => Ok(total),
        }
    }

    /// `int |d mu~| = int |u|^{-m-k-eps} |xi_k|`.
    pub fn total_variation(&self) -> f64 {
        let mut f = |x: f64| Complex64::new(self.density(x).norm(), 0.0);
        line_integral(&mut f, &self.xi.breaks, &[], None).re
    }
}

fn line_integral(f: &mut impl FnMut(f64) -> Complex64, breaks: &[f64], extra: &[f64], support: Option<(f64, f64)>) -> Complex64 {
    let mut cuts: Vec<f64> = breaks.iter().chain(extra).copied().collect();
    if let Some((a, b)) = support {
        cuts.retain(|&x| x > a && x < b);
        cuts.push(a);
        cuts.push(b);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut s = CompensatedSum::new();
    let (first, last) = (cuts[0], cuts[cuts.len() - 1]);
    if support.is_none() {
        s.add(integrate_from_neg_inf(&mut *f, first, 1e-15, 1e-13));
    }
    for w in cuts.windows(2) {
        s.add(integrate(&mut *f, w[0], w[1], 1e-15, 1e-13));
    }
    if support.is_none() {
        s.add(integrate_to_inf(&mut *f, last, 1e-15, 1e-13));
    }
    s.value()
}

/// `||u^{-1-eps}||_1 = sqrt(pi) Gamma(eps/2) / Gamma((1+eps)/2)`.
pub fn weight_norm_constant(eps: f64) -> f64 {
    libm::sqrt(core::f64::consts::PI) * libm::tgamma(0.5 * eps) / libm::tgamma(0.5 * (1.0 + eps))
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightShiftReport {
    pub shifted: ShiftedMeasure,
    /// `|int g^(n) u^m d mu - int g^(n+k) u^{m+k+eps} d mu~| / (1 + |lhs|)` per family member.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub shifted_norm: f64,
    pub mu_norm: f64,
    pub norm_constant: f64,
    /// `shifted_norm <= norm_constant * mu_norm` as computed.
    pub norm_bound_holds: bool,
}

/// Builds `mu~` with `int g^(n) u^m d mu = int g^(n+k) u^{m+k+eps} d mu~` and checks it on `family`.
pub fn measure_weight_shift(
    mu: &DiscreteMeasure,
    n: usize,
    m: usize,
    k: usize,
    eps: f64,
    family: &[TestFunction],
) -> Result<WeightShiftReport> {
    if !(eps > 0.0 && eps <= 1.0) {
        return crate::error::invalid("eps must lie in (0, 1]");
    }
    if k == 0 {
        return crate::error::invalid("weight shift needs k >= 1");
    }
    for (i, g) in family.iter().enumerate() {
        let c = g.class_membership((n + k) as u32, (m + k + 1) as u32);
        if !c.member {
            return Err(Error::NotAdmissible(alloc::format!("family member {i}: {}", c.reason)));
        }
    }
    let mut xi = first_primitive(mu, m);
    for _ in 1..k {
        xi = xi.antiderivative_from_zero();
    }
    let shifted = ShiftedMeasure { m, k, eps, xi };
    let mut residuals = Vec::with_capacity(family.len());
    for g in family {
        let lhs = mu.integrate(g, n, m)?;
        let rhs = shifted.integrate(g, n)?;
        residuals.push((lhs - rhs).norm() / (1.0 + lhs.norm()));
    }
    let shifted_norm = shifted.total_variation();
    let mu_norm = mu.total_variation();
    let norm_constant = weight_norm_constant(eps);
    Ok(WeightShiftReport {
        max_residual: residuals.iter().fold(0.0_f64, |a, &r| a.max(r)),
        residuals,
        norm_bound_holds: shifted_norm <= norm_constant * mu_norm,
        shifted_norm,
        mu_norm,
        norm_constant,
        shifted,
    })
}
