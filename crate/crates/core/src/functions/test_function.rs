use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Shape of a [`TestFunction`] before weighting.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionKind {
    /// `N(x) * prod_j (x - z_j)^{-n_j}` with every `z_j` off the real line.
    Rational { numerator: Vec<Complex64>, poles: Vec<(Complex64, u32)> },
    /// `P(x - c) exp(-((x - c)/w)^2)`.
    Gaussian { center: f64, width: f64, prefactor: Vec<f64> },
    /// Bump supported in `(a, b)`: `exp(-1/(1-t^2))` when `order` is `None`,
    /// `(1-t^2)^s` (of class `C^{s-1}`) when `order` is `Some(s)`; `t` maps `(a, b)` onto `(-1, 1)`.
    Bump { a: f64, b: f64, order: Option<u32> },
    /// Ascending monomial coefficients.
    Polynomial { coeffs: Vec<Complex64> },
    /// `exp(rate * x)`.
    Exponential { rate: Complex64 },
    Product(Box<TestFunction>, Box<TestFunction>),
}

/// Structured scalar function `amplitude * g(x) * u(x)^weight_power`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub kind: FunctionKind,
    pub weight_power: u32,
    pub amplitude: Complex64,
}

/// Result of the analytic class decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassMembership {
    pub n: u32,
    pub k: u32,
    pub member: bool,
    pub reason: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Profile {
    Zero,
    /// Compactly supported with the given classical smoothness (`None` = smooth).
    Compact(Option<u32>),
    Schwartz,
    /// Rational with poles off the axis; decay order `deg(den) - deg(num)` (may be negative).
    Rational(i64),
    /// Polynomial of the given degree.
    Polynomial(u32),
    Growing,
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for j in 0..k {
        r = r * (n - j) as f64 / (j + 1) as f64;
    }
    r
}

impl TestFunction {
    fn from_kind(kind: FunctionKind) -> Self {
        Self { kind, weight_power: 0, amplitude: ONE }
    }

    /// `numerator(x) / prod (x - z_j)^{n_j}`; every pole must be off the real line.
    pub fn rational(numerator: Vec<Complex64>, poles: Vec<(Complex64, u32)>) -> Result<Self> {
        for (z, _) in &poles {
            if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
                return Err(Error::Invalid(alloc::format!("rational pole {z} must lie off the real axis")));
            }
        }
        if numerator.is_empty() {
            return Err(Error::Invalid("empty numerator".into()));
        }
        Ok(Self::from_kind(FunctionKind::Rational { numerator, poles }))
    }

    /// `prod_j (x - z_j)^{-1}`.
    pub fn simple_poles(poles: &[Complex64]) -> Result<Self> {
        Self::rational(vec![ONE], poles.iter().map(|&z| (z, 1)).collect())
    }

    /// `(x - z)^{-order}`.
    pub fn pole_power(z: Complex64, order: u32) -> Result<Self> {
        Self::rational(vec![ONE], vec![(z, order)])
    }

    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        Self::gaussian_with_prefactor(center, width, vec![1.0])
    }

    pub fn gaussian_with_prefactor(center: f64, width: f64, prefactor: Vec<f64>) -> Result<Self> {
        if !(width > 0.0) || !center.is_finite() {
            return crate::error::invalid("gaussian width must be positive");
        }
        if prefactor.is_empty() {
            return crate::error::invalid("empty gaussian prefactor");
        }
        Ok(Self::from_kind(FunctionKind::Gaussian { center, width, prefactor }))
    }

    /// Smooth bump `exp(-1/(1-t^2))` on `(a, b)`.
    pub fn smooth_bump(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return crate::error::invalid("bump support must satisfy a < b");
        }
        Ok(Self::from_kind(FunctionKind::Bump { a, b, order: None }))
    }

    /// Piecewise polynomial bump `(1-t^2)^s` on `(a, b)`, of class `C^{s-1}`.
    pub fn poly_bump(a: f64, b: f64, s: u32) -> Result<Self> {
        if !(a < b) || s == 0 {
            return crate::error::invalid("polynomial bump needs a < b and s >= 1");
        }
        Ok(Self::from_kind(FunctionKind::Bump { a, b, order: Some(s) }))
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![ZERO] } else { coeffs };
        Self::from_kind(FunctionKind::Polynomial { coeffs })
    }

    pub fn polynomial_real(coeffs: &[f64]) -> Self {
        Self::polynomial(poly::to_complex(coeffs))
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![ZERO; k + 1];
        c[k] = ONE;
        Self::polynomial(c)
    }

    pub fn exponential(rate: Complex64) -> Self {
        Self::from_kind(FunctionKind::Exponential { rate })
    }

    /// The weight `u(x) = x - i`.
    pub fn weight() -> Self {
        Self::polynomial(vec![Complex64::new(0.0, -1.0), ONE])
    }

    pub fn product(a: TestFunction, b: TestFunction) -> Self {
        Self::from_kind(FunctionKind::Product(Box::new(a), Box::new(b)))
    }

    pub fn scaled(mut self, s: Complex64) -> Self {
        self.amplitude *= s;
        self
    }

    pub fn scaled_real(self, s: f64) -> Self {
        self.scaled(Complex64::new(s, 0.0))
    }

    /// `f * u^l`; the weight power is incremented by `l`.
    pub fn weight_multiply(&self, l: u32) -> Self {
        let mut out = self.clone();
        out.weight_power += l;
        out
    }

    /// Orders of classical differentiability, `None` meaning unlimited.
    pub fn smoothness(&self) -> Option<u32> {
        kind_smoothness(&self.kind)
    }

    /// Points where derivatives beyond [`Self::smoothness`] jump; quadrature splits there.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        collect_singular(&self.kind, &mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Length scale on which Taylor expansions about `x` converge quickly: the distance to the
    /// nearest pole or singular point, the width of a gaussian, `1/|rate|` for exponentials.
    pub fn taylor_radius(&self, x: f64) -> f64 {
        kind_radius(&self.kind, x)
    }

    /// Closed support interval when compactly supported.
    pub fn support(&self) -> Option<(f64, f64)> {
        kind_support(&self.kind)
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        Ok(self.derivatives(x, 0)?[0])
    }

    /// `f^(j)(x)` for `j = 0..=n`.
    pub fn derivatives(&self, x: f64, n: usize) -> Result<Vec<Complex64>> {
        let base = kind_derivatives(&self.kind, x, n)?;
        let l = self.weight_power as usize;
        let out = if l == 0 {
            base
        } else {
            let u = crate::weight_u(x);
            // (u^l)^(j) = l!/(l-j)! u^(l-j)
            let mut uj = vec![ZERO; n + 1];
            for (j, slot) in uj.iter_mut().enumerate() {
                if j <= l {
                    let mut fall = 1.0;
                    for t in 0..j {
                        fall *= (l - t) as f64;
                    }
                    *slot = u.powu((l - j) as u32) * fall;
                }
            }
            leibniz(&base, &uj, n)
        };
        Ok(out.into_iter().map(|z| z * self.amplitude).collect())
    }

    pub fn derivative(&self, x: f64, k: usize) -> Result<Complex64> {
        Ok(self.derivatives(x, k)?[k])
    }

    /// Decay order of a rational function, including the weight.
    pub fn decay_order(&self) -> Option<i64> {
        match profile(&self.kind) {
            Profile::Rational(d) => Some(d - self.weight_power as i64),
            _ => None,
        }
    }

    /// Analytic membership decision for the weighted class of order `(n, k)`.
    pub fn class_membership(&self, n: u32, k: u32) -> ClassMembership {
        let (member, reason) = if self.amplitude == ZERO {
            (true, String::from("zero function"))
        } else {
            match weighted_profile(profile(&self.kind), self.weight_power) {
                Profile::Zero => (true, String::from("zero function")),
                Profile::Schwartz => (true, String::from("Schwartz-type: rapidly decaying with all derivatives")),
                Profile::Compact(None) => (true, String::from("smooth with compact support")),
                Profile::Compact(Some(s)) => {
                    if s >= n + 1 {
                        (true, alloc::format!("compactly supported of class C^{s}, at least C^{}", n + 1))
                    } else {
                        (false, alloc::format!("compactly supported of class C^{s} only; C^{} required", n + 1))
                    }
                }
                Profile::Rational(d) => {
                    if d >= k as i64 + 1 {
                        (true, alloc::format!("rational, poles off the axis, decay order {d} >= {}", k + 1))
                    } else {
                        (false, alloc::format!("rational decay order {d} below {}: f u^{k} not in C_0", k + 1))
                    }
                }
                Profile::Polynomial(deg) => {
                    (false, alloc::format!("nonzero polynomial of degree {deg}: does not vanish at infinity"))
                }
                Profile::Growing => (false, String::from("unbounded growth: not in C_0")),
            }
        };
        ClassMembership { n, k, member, reason }
    }
}

fn weighted_profile(p: Profile, l: u32) -> Profile {
    match p {
        Profile::Rational(d) => Profile::Rational(d - l as i64),
        Profile::Polynomial(deg) => Profile::Polynomial(deg + l),
        other => other,
    }
}

fn profile(kind: &FunctionKind) -> Profile {
    match kind {
        FunctionKind::Rational { numerator, poles } => {
            let num = poly::trim(numerator.clone());
            if num.len() == 1 && num[0] == ZERO {
                return Profile::Zero;
            }
            let den: i64 = poles.iter().map(|(_, k)| *k as i64).sum();
            Profile::Rational(den - (num.len() as i64 - 1))
        }
        FunctionKind::Gaussian { prefactor, .. } => {
            if prefactor.iter().all(|&c| c == 0.0) {
                Profile::Zero
            } else {
                Profile::Schwartz
            }
        }
        FunctionKind::Bump { order, .. } => Profile::Compact(order.map(|s| s - 1)),
        FunctionKind::Polynomial { coeffs } => {
            let c = poly::trim(coeffs.clone());
            if c.len() == 1 && c[0] == ZERO {
                Profile::Zero
            } else {
                Profile::Polynomial(c.len() as u32 - 1)
            }
        }
        FunctionKind::Exponential { rate } => {
            if rate.re == 0.0 && rate.im == 0.0 {
                Profile::Polynomial(0)
            } else {
                Profile::Growing
            }
        }
        FunctionKind::Product(a, b) => {
            let pa = weighted_profile(profile(&a.kind), a.weight_power);
            let pb = weighted_profile(profile(&b.kind), b.weight_power);
            if a.amplitude == ZERO || b.amplitude == ZERO {
                return Profile::Zero;
            }
            combine(pa, pb)
        }
    }
}

fn combine(a: Profile, b: Profile) -> Profile {
    use Profile::*;
    match (a, b) {
        (Zero, _) | (_, Zero) => Zero,
        (Compact(s), Compact(t)) => Compact(min_smooth(s, t)),
        (Compact(s), _) | (_, Compact(s)) => Compact(s),
        (Schwartz, Growing) | (Growing, Schwartz) => Growing,
        (Schwartz, _) | (_, Schwartz) => Schwartz,
        (Rational(d), Rational(e)) => Rational(d + e),
        (Rational(d), Polynomial(p)) | (Polynomial(p), Rational(d)) => Rational(d - p as i64),
        (Polynomial(p), Polynomial(q)) => Polynomial(p + q),
        _ => Growing,
    }
}

fn min_smooth(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

fn kind_smoothness(kind: &FunctionKind) -> Option<u32> {
    match kind {
        FunctionKind::Bump { order, .. } => order.map(|s| s - 1),
        FunctionKind::Product(a, b) => min_smooth(a.smoothness(), b.smoothness()),
        _ => None,
    }
}

fn kind_radius(kind: &FunctionKind, x: f64) -> f64 {
    match kind {
        FunctionKind::Rational { poles, .. } => {
            poles.iter().fold(f64::INFINITY, |r, (z, _)| r.min((Complex64::new(x, 0.0) - z).norm()))
        }
        FunctionKind::Gaussian { width, .. } => *width,
        FunctionKind::Bump { a, b, .. } => libm::fabs(x - a).min(libm::fabs(x - b)),
        FunctionKind::Polynomial { .. } => f64::INFINITY,
        FunctionKind::Exponential { rate } => 1.0 / rate.norm(),
        FunctionKind::Product(f, g) => f.taylor_radius(x).min(g.taylor_radius(x)),
    }
}

fn kind_support(kind: &FunctionKind) -> Option<(f64, f64)> {
    match kind {
        FunctionKind::Bump { a, b, .. } => Some((*a, *b)),
        FunctionKind::Product(x, y) => match (x.support(), y.support()) {
            (Some((a, b)), Some((c, d))) => Some((a.max(c), b.min(d).max(a.max(c)))),
            (Some(s), None) | (None, Some(s)) => Some(s),
            (None, None) => None,
        },
        _ => None,
    }
}

fn collect_singular(kind: &FunctionKind, out: &mut Vec<f64>) {
    match kind {
        FunctionKind::Bump { a, b, .. } => {
            out.push(*a);
            out.push(*b);
        }
        FunctionKind::Product(x, y) => {
            collect_singular(&x.kind, out);
            collect_singular(&y.kind, out);
        }
        _ => {}
    }
}

/// `(fg)^(k) = sum_j C(k,j) f^(j) g^(k-j)` for `k = 0..=n`.
pub(crate) fn leibniz(f: &[Complex64], g: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|k| {
            let mut s = ZERO;
            for j in 0..=k {
                s += f[j] * g[k - j] * binom(k, j);
            }
            s
        })
        .collect()
}

fn kind_derivatives(kind: &FunctionKind, x: f64, n: usize) -> Result<Vec<Complex64>> {
    match kind {
        FunctionKind::Rational { numerator, poles } => Ok(rational_derivatives(numerator, poles, x, n)),
        FunctionKind::Gaussian { center, width, prefactor } => Ok(gaussian_derivatives(*center, *width, prefactor, x, n)),
        FunctionKind::Bump { a, b, order } => Ok(bump_derivatives(*a, *b, *order, x, n)),
        FunctionKind::Polynomial { coeffs } => {
            let mut c = coeffs.clone();
            let mut out = Vec::with_capacity(n + 1);
            for _ in 0..=n {
                out.push(poly::eval(&c, x));
                c = poly::derivative(&c);
            }
            Ok(out)
        }
        FunctionKind::Exponential { rate } => {
            let e = (rate * x).exp();
            let mut out = Vec::with_capacity(n + 1);
            let mut r = ONE;
            for _ in 0..=n {
                out.push(e * r);
                r *= rate;
            }
            Ok(out)
        }
        FunctionKind::Product(a, b) => {
            let fa = a.derivatives(x, n)?;
            let fb = b.derivatives(x, n)?;
            Ok(leibniz(&fa, &fb, n))
        }
    }
}

fn rational_derivatives(numerator: &[Complex64], poles: &[(Complex64, u32)], x: f64, n: usize) -> Vec<Complex64> {
    // h = prod (x - z_j)^{-n_j}, h' = h g with g = -sum n_j/(x - z_j)
    let mut h0 = ONE;
    for &(z, k) in poles {
        h0 /= (Complex64::new(x, 0.0) - z).powu(k);
    }
    let mut g = vec![ZERO; n];
    let mut fact = 1.0;
    for (r, slot) in g.iter_mut().enumerate() {
        if r > 0 {
            fact *= r as f64;
        }
        let sign = if r % 2 == 0 { -1.0 } else { 1.0 };
        let mut s = ZERO;
        for &(z, k) in poles {
            s += (ONE / (Complex64::new(x, 0.0) - z)).powu(r as u32 + 1) * k as f64;
        }
        *slot = s * sign * fact;
    }
    let mut h = Vec::with_capacity(n + 1);
    h.push(h0);
    for k in 0..n {
        let mut s = ZERO;
        for j in 0..=k {
            s += h[j] * g[k - j] * binom(k, j);
        }
        h.push(s);
    }
    let mut c = numerator.to_vec();
    let mut nd = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        nd.push(poly::eval(&c, x));
        c = poly::derivative(&c);
    }
    leibniz(&nd, &h, n)
}

fn gaussian_derivatives(center: f64, width: f64, prefactor: &[f64], x: f64, n: usize) -> Vec<Complex64> {
    let s = x - center;
    let e = libm::exp(-(s / width) * (s / width));
    let w2 = width * width;
    let mut q = prefactor.to_vec();
    let mut out = Vec::with_capacity(n + 1);
    for _ in 0..=n {
        out.push(Complex64::new(poly::eval_real(&q, s) * e, 0.0));
        // Q' - (2 s / w^2) Q
        let dq = poly::derivative_real(&q);
        let sq = poly::mul_real(&q, &[0.0, 2.0 / w2]);
        let len = dq.len().max(sq.len());
        q = (0..len).map(|k| dq.get(k).copied().unwrap_or(0.0) - sq.get(k).copied().unwrap_or(0.0)).collect();
    }
    out
}

fn bump_derivatives(a: f64, b: f64, order: Option<u32>, x: f64, n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; n + 1];
    if !(x > a && x < b) {
        return out;
    }
    let kappa = 2.0 / (b - a);
    let t = (2.0 * x - a - b) / (b - a);
    let dt: Vec<f64> = match order {
        Some(s) => {
            // (1 - t^2)^s expanded in t
            let mut c = vec![0.0; 2 * s as usize + 1];
            for j in 0..=s as usize {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                c[2 * j] = sign * binom(s as usize, j);
            }
            let mut res = Vec::with_capacity(n + 1);
            for _ in 0..=n {
                res.push(poly::eval_real(&c, t));
                c = poly::derivative_real(&c);
            }
            res
        }
        None => {
            let phi0 = libm::exp(-1.0 / (1.0 - t * t));
            if phi0 == 0.0 {
                return out;
            }
            // psi = -1/(1-t^2); psi^(r) = -r!/2 [(1-t)^{-r-1} + (-1)^r (1+t)^{-r-1}]
            let mut psi = vec![0.0; n + 1];
            let mut fact = 1.0;
            for r in 1..=n {
                fact *= r as f64;
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                psi[r] = -0.5 * fact * (libm::pow(1.0 - t, -(r as f64) - 1.0) + sign * libm::pow(1.0 + t, -(r as f64) - 1.0));
            }
            let mut phi = Vec::with_capacity(n + 1);
            phi.push(phi0);
            for k in 0..n {
                let mut s = 0.0;
                for j in 0..=k {
                    s += binom(k, j) * phi[j] * psi[k - j + 1];
                }
                phi.push(s);
            }
            phi
        }
    };
    let mut kk = 1.0;
    for (j, slot) in out.iter_mut().enumerate() {
        if j > 0 {
            kk *= kappa;
        }
        *slot = Complex64::new(dt[j] * kk, 0.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: &TestFunction, x: f64, k: usize) -> Complex64 {
        let h = 1e-4;
        (f.derivative(x + h, k).unwrap() - f.derivative(x - h, k).unwrap()) / (2.0 * h)
    }

    fn family() -> Vec<TestFunction> {
        vec![
            TestFunction::rational(poly::to_complex(&[1.0, 0.5]), vec![(Complex64::new(0.2, 1.0), 2), (Complex64::new(-1.0, -0.5), 1)]).unwrap(),
            TestFunction::gaussian_with_prefactor(0.3, 1.2, vec![1.0, -0.5, 0.25]).unwrap(),
            TestFunction::smooth_bump(-1.0, 2.0).unwrap(),
            TestFunction::poly_bump(-1.0, 1.5, 6).unwrap(),
            TestFunction::polynomial_real(&[1.0, -2.0, 0.0, 3.0]),
            TestFunction::exponential(Complex64::new(0.3, 0.7)),
            TestFunction::product(TestFunction::gaussian(0.0, 1.0).unwrap(), TestFunction::monomial(2)),
            TestFunction::gaussian(0.0, 1.0).unwrap().weight_multiply(3),
        ]
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for f in family() {
            for &x in &[-0.4, 0.1, 0.77] {
                let d = f.derivatives(x, 5).unwrap();
                for k in 0..4 {
                    let approx = fd(&f, x, k);
                    assert!((d[k + 1] - approx).norm() <= 1e-6 * (1.0 + d[k + 1].norm()), "{f:?} x={x} k={k}");
                }
            }
        }
    }

    #[test]
    fn weight_leibniz() {
        let g = TestFunction::gaussian(0.5, 1.0).unwrap();
        let gu = g.weight_multiply(1);
        for &x in &[-1.0, 0.0, 2.3] {
            let lhs = gu.derivative(x, 1).unwrap();
            let rhs = g.derivative(x, 1).unwrap() * crate::weight_u(x) + g.eval(x).unwrap();
            assert!((lhs - rhs).norm() < 1e-15);
        }
    }

    #[test]
    fn weighted_rational_decay() {
        let f = TestFunction::pole_power(Complex64::new(0.0, 2.0), 3).unwrap().weight_multiply(2);
        assert_eq!(f.decay_order(), Some(1));
        let far = f.eval(1e6).unwrap().norm() * 1e6;
        assert!((far - 1.0).abs() < 1e-5);
    }

    #[test]
    fn bump_support_survives_weighting() {
        let f = TestFunction::smooth_bump(-1.0, 1.0).unwrap().weight_multiply(5);
        assert_eq!(f.eval(1.0).unwrap(), ZERO);
        assert_eq!(f.eval(-1.5).unwrap(), ZERO);
        assert!(f.eval(0.2).unwrap().norm() > 0.0);
        assert_eq!(f.support(), Some((-1.0, 1.0)));
    }

    #[test]
    fn memberships() {
        let zs: Vec<Complex64> = (0..4).map(|j| Complex64::new(j as f64, 1.0 + j as f64)).collect();
        let f = TestFunction::simple_poles(&zs).unwrap();
        assert!(f.class_membership(7, 3).member);
        assert!(!f.class_membership(7, 4).member);
        assert!(TestFunction::gaussian(0.0, 1.0).unwrap().class_membership(9, 9).member);
        assert!(!TestFunction::polynomial_real(&[1.0]).class_membership(0, 1).member);
        assert!(TestFunction::poly_bump(-1.0, 1.0, 5).unwrap().class_membership(3, 20).member);
        assert!(!TestFunction::poly_bump(-1.0, 1.0, 4).unwrap().class_membership(3, 20).member);
    }
}
