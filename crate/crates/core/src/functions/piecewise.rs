use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Result;
use crate::poly;
use crate::quadrature;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Weighted point mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub mass: Complex64,
}

/// Piecewise polynomial density on `[b_0, b_N)` with optional point masses.
///
/// Interval `i` is `[b_i, b_{i+1})` and carries coefficients in powers of `x - m_i`,
/// `m_i` the interval midpoint. The density is zero outside the breakpoints.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<f64>,
    coeffs: Vec<Vec<Complex64>>,
    atoms: Vec<Atom>,
}

impl PiecewisePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(breakpoints: Vec<f64>, coeffs: Vec<Vec<Complex64>>, atoms: Vec<Atom>) -> Result<Self> {
        if breakpoints.is_empty() {
            if !coeffs.is_empty() {
                return crate::error::invalid("coefficients given without breakpoints");
            }
        } else if coeffs.len() + 1 != breakpoints.len() {
            return crate::error::invalid("need one coefficient list per interval");
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return crate::error::invalid("breakpoints must be strictly increasing");
        }
        if breakpoints.iter().any(|b| !b.is_finite()) || atoms.iter().any(|a| !a.x.is_finite()) {
            return crate::error::invalid("non-finite breakpoint or atom");
        }
        let coeffs = coeffs.into_iter().map(|c| if c.is_empty() { vec![ZERO] } else { c }).collect();
        Ok(Self { breakpoints, coeffs, atoms })
    }

    /// One polynomial (in powers of `x`) on `[a, b)`.
    pub fn single(a: f64, b: f64, global: &[Complex64]) -> Result<Self> {
        let mid = 0.5 * (a + b);
        Self::new(vec![a, b], vec![poly::shift(global, mid)], Vec::new())
    }

    pub fn atom(x: f64, mass: Complex64) -> Self {
        Self { breakpoints: Vec::new(), coeffs: Vec::new(), atoms: vec![Atom { x, mass }] }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Per-interval coefficients in powers of `x - midpoint`.
    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> usize {
        self.coeffs.len()
    }

    pub fn midpoint(&self, i: usize) -> f64 {
        0.5 * (self.breakpoints[i] + self.breakpoints[i + 1])
    }

    /// Coefficients of interval `i` in powers of `x`.
    pub fn global_coeffs(&self, i: usize) -> Vec<Complex64> {
        poly::shift(&self.coeffs[i], -self.midpoint(i))
    }

    /// Hull of breakpoints and atoms.
    pub fn support(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if let (Some(a), Some(b)) = (self.breakpoints.first(), self.breakpoints.last()) {
            lo = *a;
            hi = *b;
        }
        for a in &self.atoms {
            lo = lo.min(a.x);
            hi = hi.max(a.x);
        }
        if lo <= hi {
            Some((lo, hi))
        } else {
            None
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0)
    }

    fn locate(&self, x: f64) -> Option<usize> {
        let b = &self.breakpoints;
        if b.len() < 2 || !(x >= b[0]) || x >= b[b.len() - 1] {
            return None;
        }
        Some(b.partition_point(|&t| t <= x) - 1)
    }

    /// Density value (atoms excluded); right-continuous at breakpoints.
    pub fn eval(&self, x: f64) -> Complex64 {
        match self.locate(x) {
            Some(i) => poly::eval(&self.coeffs[i], x - self.midpoint(i)),
            None => ZERO,
        }
    }

    /// Coefficients of interval `i` re-expanded on the subinterval `[lo, hi)`, centered at its midpoint.
    fn restricted(&self, i: usize, lo: f64, hi: f64) -> Vec<Complex64> {
        poly::shift(&self.coeffs[i], 0.5 * (lo + hi) - self.midpoint(i))
    }

    /// Values on a common refinement given by `grid` (ascending, covering all own breakpoints).
    fn refine_to(&self, grid: &[f64]) -> Vec<Vec<Complex64>> {
        grid.windows(2)
            .map(|w| {
                let m = 0.5 * (w[0] + w[1]);
                match self.locate(m) {
                    Some(i) => self.restricted(i, w[0], w[1]),
                    None => vec![ZERO],
                }
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut grid: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let (a, b) = (self.refine_to(&grid), other.refine_to(&grid));
        let coeffs = if grid.len() < 2 { Vec::new() } else { a.iter().zip(&b).map(|(x, y)| poly::add(x, y)).collect() };
        let mut atoms = self.atoms.clone();
        for at in &other.atoms {
            match atoms.iter_mut().find(|a| a.x == at.x) {
                Some(a) => a.mass += at.mass,
                None => atoms.push(*at),
            }
        }
        atoms.sort_by(|p, q| p.x.total_cmp(&q.x));
        Self { breakpoints: if grid.len() < 2 { Vec::new() } else { grid }, coeffs, atoms }
    }

    /// Sum of scaled densities, exact on the union of breakpoints.
    pub fn linear_combination(terms: &[(Complex64, &PiecewisePolynomial)]) -> Self {
        let mut grid: Vec<f64> = terms.iter().flat_map(|(_, p)| p.breakpoints.iter().copied()).collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let mut coeffs: Vec<Vec<Complex64>> = vec![vec![ZERO]; grid.len().saturating_sub(1)];
        let mut atoms: Vec<Atom> = Vec::new();
        for (w, p) in terms {
            if *w == ZERO {
                continue;
            }
            if grid.len() >= 2 {
                for (slot, c) in coeffs.iter_mut().zip(p.refine_to(&grid)) {
                    *slot = poly::add(slot, &poly::scale(&c, *w));
                }
            }
            for at in &p.atoms {
                match atoms.iter_mut().find(|a| a.x == at.x) {
                    Some(a) => a.mass += at.mass * w,
                    None => atoms.push(Atom { x: at.x, mass: at.mass * w }),
                }
            }
        }
        atoms.sort_by(|p, q| p.x.total_cmp(&q.x));
        Self { breakpoints: if grid.len() < 2 { Vec::new() } else { grid }, coeffs, atoms }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            coeffs: self.coeffs.iter().map(|c| poly::scale(c, s)).collect(),
            atoms: self.atoms.iter().map(|a| Atom { x: a.x, mass: a.mass * s }).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            breakpoints: self.breakpoints.clone(),
            coeffs: self.coeffs.iter().map(|c| c.iter().map(|&z| f(z)).collect()).collect(),
            atoms: self.atoms.iter().map(|a| Atom { x: a.x, mass: f(a.mass) }).collect(),
        }
    }

    pub fn real_part(&self) -> Self {
        self.map_coeffs(|z| Complex64::new(z.re, 0.0))
    }

    pub fn imag_part(&self) -> Self {
        self.map_coeffs(|z| Complex64::new(z.im, 0.0))
    }

    /// `sum_r |part(c_r)| half^r` on each interval: a bound for `sup |part(p)|` there.
    fn piece_bounds<'a>(&'a self, part: impl Fn(Complex64) -> f64 + 'a) -> impl Iterator<Item = f64> + 'a {
        self.coeffs.iter().enumerate().map(move |(i, c)| {
            let half = 0.5 * (self.breakpoints[i + 1] - self.breakpoints[i]);
            let mut p = 1.0;
            c.iter().fold(0.0, |acc, &z| {
                let t = acc + part(z) * p;
                p *= half;
                t
            })
        })
    }

    /// Bound on `sup |Im p|` over all intervals, and the largest imaginary atom mass.
    pub fn max_imag(&self) -> f64 {
        let c = self.piece_bounds(|z| z.im.abs()).fold(0.0_f64, f64::max);
        self.atoms.iter().fold(c, |m, a| m.max(a.mass.im.abs()))
    }

    /// Bound on `sup |p|` over all intervals.
    pub fn max_coeff(&self) -> f64 {
        self.piece_bounds(|z| z.norm()).fold(0.0_f64, f64::max)
    }

    /// Total variation of the atomic part.
    pub fn atomic_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass.norm()).sum()
    }

    pub fn without_atoms(&self) -> Self {
        Self { breakpoints: self.breakpoints.clone(), coeffs: self.coeffs.clone(), atoms: Vec::new() }
    }

    /// Atoms with `|mass| <= tol` removed.
    pub fn prune_atoms(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.atoms.retain(|a| a.mass.norm() > tol);
        out
    }

    /// `int density + sum atom masses`, exact.
    pub fn total_mass(&self) -> Complex64 {
        let mut s = crate::sum::CompensatedSum::new();
        for i in 0..self.pieces() {
            let h = 0.5 * (self.breakpoints[i + 1] - self.breakpoints[i]);
            let anti = poly::antiderivative(&self.coeffs[i]);
            s.add(poly::eval(&anti, h) - poly::eval(&anti, -h));
        }
        for a in &self.atoms {
            s.add(a.mass);
        }
        s.value()
    }

    /// `int g(x) d(this)` with adaptive quadrature per interval, splitting at `extra_breaks`.
    pub fn integrate_against(&self, mut g: impl FnMut(f64) -> Complex64, extra_breaks: &[f64], tol: f64) -> Complex64 {
        let mut s = crate::sum::CompensatedSum::new();
        for i in 0..self.pieces() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let c = &self.coeffs[i];
            if c.iter().all(|z| *z == ZERO) {
                continue;
            }
            let m = self.midpoint(i);
            let mut cuts = vec![a];
            cuts.extend(extra_breaks.iter().copied().filter(|&x| x > a && x < b));
            cuts.push(b);
            for w in cuts.windows(2) {
                s.add(quadrature::integrate(|x| g(x) * poly::eval(c, x - m), w[0], w[1], tol, 1e-15));
            }
        }
        for at in &self.atoms {
            s.add(g(at.x) * at.mass);
        }
        s.value()
    }

    /// `int |Re density(x)| w(x) dx` split at sign changes and `extra_breaks`.
    pub fn weighted_abs_integral(&self, w: impl Fn(f64) -> f64, extra_breaks: &[f64]) -> f64 {
        let rule = quadrature::gauss_legendre(40);
        let mut s = 0.0;
        for i in 0..self.pieces() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let m = self.midpoint(i);
            let c: Vec<f64> = self.coeffs[i].iter().map(|z| z.re).collect();
            if c.iter().all(|&x| x == 0.0) {
                continue;
            }
            let mut cuts = vec![a];
            cuts.extend(extra_breaks.iter().copied().filter(|&x| x > a && x < b));
            cuts.extend(poly::real_roots_in(&c, a - m, b - m).into_iter().map(|r| r + m).filter(|&x| x > a && x < b));
            cuts.push(b);
            cuts.sort_by(f64::total_cmp);
            for seg in cuts.windows(2) {
                if !(seg[1] > seg[0]) {
                    continue;
                }
                let v = quadrature::integrate_gl(
                    |x| Complex64::new(poly::eval_real(&c, x - m) * w(x), 0.0),
                    seg[0],
                    seg[1],
                    &rule,
                );
                s += v.re.abs();
            }
        }
        s
    }

    /// `int |density(x)| w(x) dx` for complex coefficients, split at real zeros of both parts.
    pub fn weighted_modulus_integral(&self, w: impl Fn(f64) -> f64, extra_breaks: &[f64]) -> f64 {
        let rule = quadrature::gauss_legendre(40);
        let mut s = 0.0;
        for i in 0..self.pieces() {
            let (a, b) = (self.breakpoints[i], self.breakpoints[i + 1]);
            let m = self.midpoint(i);
            let c = &self.coeffs[i];
            if c.iter().all(|z| *z == ZERO) {
                continue;
            }
            let re: Vec<f64> = c.iter().map(|z| z.re).collect();
            let im: Vec<f64> = c.iter().map(|z| z.im).collect();
            let mut cuts = vec![a, b];
            cuts.extend(extra_breaks.iter().copied().filter(|&x| x > a && x < b));
            for part in [&re, &im] {
                if part.iter().any(|&x| x != 0.0) {
                    cuts.extend(poly::real_roots_in(part, a - m, b - m).into_iter().map(|r| r + m).filter(|&x| x > a && x < b));
                }
            }
            cuts.sort_by(f64::total_cmp);
            for seg in cuts.windows(2) {
                if !(seg[1] > seg[0]) {
                    continue;
                }
                let v = quadrature::integrate_gl(
                    |x| Complex64::new(poly::eval(c, x - m).norm() * w(x), 0.0),
                    seg[0],
                    seg[1],
                    &rule,
                );
                s += v.re;
            }
        }
        s
    }

    /// `int |Re density|` plus the atomic total variation.
    pub fn l1_norm(&self) -> f64 {
        self.weighted_abs_integral(|_| 1.0, &[]) + self.atomic_mass()
    }

    /// Samples `(x, density(x))` on `points` uniform points over the support.
    pub fn sample(&self, points: usize) -> Vec<(f64, Complex64)> {
        match self.support() {
            None => Vec::new(),
            Some((a, b)) => {
                let n = points.max(2);
                (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).map(|x| (x, self.eval(x))).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::to_complex;

    #[test]
    fn eval_is_half_open_and_zero_outside() {
        let p = PiecewisePolynomial::single(0.0, 1.0, &to_complex(&[1.0, 2.0])).unwrap();
        assert_eq!(p.eval(-0.1), ZERO);
        assert!((p.eval(0.0) - 1.0).norm() < 1e-15);
        assert!((p.eval(0.5) - 2.0).norm() < 1e-15);
        assert_eq!(p.eval(1.0), ZERO);
    }

    #[test]
    fn addition_refines() {
        let p = PiecewisePolynomial::single(0.0, 2.0, &to_complex(&[0.0, 1.0])).unwrap();
        let q = PiecewisePolynomial::single(1.0, 3.0, &to_complex(&[1.0])).unwrap();
        let s = p.add(&q);
        assert_eq!(s.breakpoints(), &[0.0, 1.0, 2.0, 3.0]);
        for &x in &[0.2, 1.5, 2.5] {
            assert!((s.eval(x) - p.eval(x) - q.eval(x)).norm() < 1e-15);
        }
        assert!((s.total_mass() - 4.0).norm() < 1e-14);
    }

    #[test]
    fn abs_integral_splits_at_roots() {
        let p = PiecewisePolynomial::single(-1.0, 1.0, &to_complex(&[0.0, 1.0])).unwrap();
        assert!((p.l1_norm() - 1.0).abs() < 1e-15);
        assert!(p.total_mass().norm() < 1e-15);
    }
}
