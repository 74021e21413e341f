//! Finite-rank approximation of a perturbation by spectral windows of `H`,
//! with the convergence diagnostics used to pass from `V_k` to `V`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::Result;
use crate::functions::{PiecewisePolynomial, TestFunction};
use crate::linalg::{check_dims, op_norm, schatten, HermitianOperator, Matrix};
use crate::ssf::{remainder_trace, ssf_compute, SsfMethod};

/// Relative slack on `||V_k|| <= ||V||`, covering rounding in `P V P`.
pub const NORM_SLACK: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Accepted terms `V_k` together with the data that produced them.
#[derive(Clone, Debug)]
pub struct ApproximationSequence {
    pub terms: Vec<HermitianOperator>,
    /// Half-width `w` of the window `(-w, w)` of each term.
    pub windows: Vec<f64>,
    pub ranks: Vec<usize>,
    /// Position `k` (1-based) of each term in the requested window list; the relative rank defect is below `1/k`.
    pub indices: Vec<usize>,
    /// Windows whose term broke `||V_k|| <= ||V||` or the factor-2 resolvent bound.
    pub dropped: Vec<f64>,
}

impl ApproximationSequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn sandwich(h: &HermitianOperator, x: &Matrix) -> Matrix {
    let r = h.resolvent_i();
    &(&r * x) * &r
}

/// `V_k = E_{l_k} P_k V P_k` with `P_k = E_H((-w_k, w_k))` and `E_l` the span of the `l` eigenvectors of
/// `P_k V P_k` of largest modulus, `l` minimal with `||E_l P_k V P_k - P_k V P_k||_n < ||P_k V P_k||_n / k`.
///
/// `rank_caps[k]` (when given) bounds `l` from above. A window containing the whole spectrum with no cap
/// yields `V` itself.
pub fn finite_rank_sequence(
    h: &HermitianOperator,
    v: &HermitianOperator,
    n: usize,
    windows: &[f64],
    rank_caps: &[usize],
) -> Result<ApproximationSequence> {
    check_dims(h.dim(), v.dim())?;
    if windows.is_empty() {
        return crate::error::invalid("need at least one window");
    }
    if windows.iter().any(|w| !(*w > 0.0) || !w.is_finite()) || windows.windows(2).any(|p| !(p[0] < p[1])) {
        return crate::error::invalid("windows must be positive and strictly increasing");
    }
    if !rank_caps.is_empty() && rank_caps.len() != windows.len() {
        return crate::error::invalid("one rank cap per window");
    }
    if n == 0 {
        return crate::error::invalid("Schatten index n must be positive");
    }
    let d = h.dim();
    let e = h.eigenvectors();
    let vnorm = op_norm(v.matrix());
    let base = schatten(&sandwich(h, v.matrix()), n as f64)?;
    let mut seq = ApproximationSequence { terms: Vec::new(), windows: Vec::new(), ranks: Vec::new(), indices: Vec::new(), dropped: Vec::new() };
    for (idx, &w) in windows.iter().enumerate() {
        let k = idx + 1;
        let cap = rank_caps.get(idx).copied();
        let inside: Vec<usize> = (0..d).filter(|&j| h.eigenvalues()[j].abs() < w).collect();
        let term = if inside.len() == d && cap.is_none() {
            let rank = crate::linalg::singular_values(v.matrix())?.iter().filter(|&&s| s > 0.0).count();
            (v.clone(), rank)
        } else {
            let p = Matrix::from_fn(d, d, |a, b| inside.iter().fold(ZERO, |acc, &j| acc + e[(a, j)] * e[(b, j)].conj()));
            let pvp = HermitianOperator::new(&(&p * v.matrix()) * &p)?;
            let mut order: Vec<usize> = (0..d).collect();
            let mu = pvp.eigenvalues().to_vec();
            order.sort_by(|&a, &b| mu[b].abs().total_cmp(&mu[a].abs()).then(a.cmp(&b)));
            let tail = |l: usize| {
                let s: f64 = order[l..].iter().map(|&j| libm::pow(mu[j].abs(), n as f64)).sum();
                libm::pow(s, 1.0 / n as f64)
            };
            let tol = tail(0) / k as f64;
            let mut l = (0..=d).find(|&l| tail(l) < tol || tail(l) == 0.0).unwrap_or(d);
            if let Some(c) = cap {
                l = l.min(c);
            }
            if tail(l) == 0.0 {
                let rank = order[..l].iter().filter(|&&j| mu[j] != 0.0).count();
                (pvp, rank)
            } else {
                let q = pvp.eigenvectors();
                let kept = &order[..l];
                let m = Matrix::from_fn(d, d, |a, b| kept.iter().fold(ZERO, |acc, &j| acc + q[(a, j)] * q[(b, j)].conj() * mu[j]));
                (HermitianOperator::new(m)?, l)
            }
        };
        let (vk, rank) = term;
        let norm_ok = op_norm(vk.matrix()) <= vnorm * (1.0 + NORM_SLACK);
        let bound_ok = schatten(&sandwich(h, vk.matrix()), n as f64)? <= 2.0 * base;
        if norm_ok && bound_ok {
            seq.terms.push(vk);
            seq.windows.push(w);
            seq.ranks.push(rank);
            seq.indices.push(k);
        } else {
            seq.dropped.push(w);
        }
    }
    Ok(seq)
}

/// Which operator plays `V^(k)` in a triple product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VChoice {
    V,
    Vk,
    Difference,
}

/// Which operator plays `H_1^(k)` or `H_2^(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HChoice {
    H,
    HPlusV,
    HPlusVk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TripleChoice {
    pub v: VChoice,
    pub h1: HChoice,
    pub h2: HChoice,
}

/// All 27 combinations, in lexicographic order.
pub fn all_triple_choices() -> Vec<TripleChoice> {
    let vs = [VChoice::V, VChoice::Vk, VChoice::Difference];
    let hs = [HChoice::H, HChoice::HPlusV, HChoice::HPlusVk];
    let mut out = Vec::with_capacity(27);
    for v in vs {
        for h1 in hs {
            for h2 in hs {
                out.push(TripleChoice { v, h1, h2 });
            }
        }
    }
    out
}

/// Defects of one term of the sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub k: usize,
    pub window: f64,
    pub rank: usize,
    /// `||(H-i)^{-1}(V_k - V)(H-i)^{-1}||_n`.
    pub schatten_defect: f64,
    /// `||(H+V_k-i)^{-1} - (H+V-i)^{-1}||_n`.
    pub resolvent_defect: f64,
    /// `||(H_1-i)^{-1} V^(k) (H_2-i)^{-1} - limit||_n`, one per choice.
    pub triple_defects: Vec<f64>,
    pub max_triple_defect: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub choices: Vec<TripleChoice>,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// Every defect column is nonincreasing along the sequence.
    pub fn monotone(&self) -> bool {
        self.rows.windows(2).all(|p| {
            p[1].schatten_defect <= p[0].schatten_defect
                && p[1].resolvent_defect <= p[0].resolvent_defect
                && p[1].triple_defects.iter().zip(&p[0].triple_defects).all(|(b, a)| b <= a)
        })
    }

    /// Greedy subsequence of rows whose every defect is at most that of the previously kept row.
    pub fn monotone_subsequence(&self) -> Vec<usize> {
        let dominated = |b: &ConvergenceRow, a: &ConvergenceRow| {
            b.schatten_defect <= a.schatten_defect
                && b.resolvent_defect <= a.resolvent_defect
                && b.triple_defects.iter().zip(&a.triple_defects).all(|(y, x)| y <= x)
        };
        let mut kept: Vec<usize> = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            match kept.last() {
                Some(&j) if !dominated(row, &self.rows[j]) => {}
                _ => kept.push(i),
            }
        }
        kept
    }
}

/// Schatten, resolvent and triple-product defects for each `V_k`.
pub fn convergence_report(
    h: &HermitianOperator,
    v: &HermitianOperator,
    seq: &ApproximationSequence,
    n: usize,
    choices: &[TripleChoice],
) -> Result<ConvergenceReport> {
    check_dims(h.dim(), v.dim())?;
    let p = n as f64;
    let hv = h.add(v)?;
    let target = sandwich(h, v.matrix());
    let res_hv = hv.resolvent_i();
    let res_h = h.resolvent_i();
    let d = h.dim();
    let zero = Matrix::zeros(d, d);
    let mut rows = Vec::with_capacity(seq.len());
    for (idx, vk) in seq.terms.iter().enumerate() {
        check_dims(d, vk.dim())?;
        let hvk = h.add(vk)?;
        let res_hvk = hvk.resolvent_i();
        let diff = v.matrix() - vk.matrix();
        let schatten_defect = schatten(&(&sandwich(h, vk.matrix()) - &target), p)?;
        let resolvent_defect = schatten(&(&res_hvk - &res_hv), p)?;
        let pick_h = |c: HChoice| match c {
            HChoice::H => (&res_h, &res_h),
            HChoice::HPlusV => (&res_hv, &res_hv),
            HChoice::HPlusVk => (&res_hvk, &res_hv),
        };
        let mut triple_defects = Vec::with_capacity(choices.len());
        for c in choices {
            let (vkk, vlim) = match c.v {
                VChoice::V => (v.matrix(), v.matrix()),
                VChoice::Vk => (vk.matrix(), v.matrix()),
                VChoice::Difference => (&diff, &zero),
            };
            let (r1, l1) = pick_h(c.h1);
            let (r2, l2) = pick_h(c.h2);
            let actual = &(r1 * vkk) * r2;
            let limit = &(l1 * vlim) * l2;
            triple_defects.push(schatten(&(&actual - &limit), p)?);
        }
        let max_triple_defect = triple_defects.iter().fold(0.0_f64, |a, &b| a.max(b));
        rows.push(ConvergenceRow {
            k: seq.indices[idx],
            window: seq.windows[idx],
            rank: seq.ranks[idx],
            schatten_defect,
            resolvent_defect,
            triple_defects,
            max_triple_defect,
        });
    }
    Ok(ConvergenceReport { choices: choices.to_vec(), rows })
}

/// Grid resolution used to check `sup |f^(m)| <= 1`.
pub const NORMALIZATION_GRID: usize = 4001;

fn sampled_sup(f: &TestFunction, m: usize) -> Result<f64> {
    let (a, b) = match f.support() {
        Some(s) => s,
        None => return crate::error::invalid("remainder experiment needs compactly supported functions"),
    };
    let mut sup = 0.0_f64;
    for j in 0..NORMALIZATION_GRID {
        let x = a + (b - a) * j as f64 / (NORMALIZATION_GRID - 1) as f64;
        sup = sup.max(f.derivative(x, m)?.norm());
    }
    Ok(sup)
}

/// `count` bumps `(1-t^2)^{m+2}` inside `(-a, a)`, rescaled so that the sampled `sup |f^(m)|` is one.
pub fn normalized_bump_family(a: f64, m: usize, count: usize) -> Result<Vec<TestFunction>> {
    if !(a > 0.0) {
        return crate::error::invalid("support radius must be positive");
    }
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let frac = (j as f64 + 0.5) / count as f64;
        let width = a * (0.35 + 0.4 * ((j * 7) % count) as f64 / count as f64);
        let center = (-a + width) + (2.0 * (a - width)) * frac;
        let f = TestFunction::poly_bump(center - width, center + width, m as u32 + 2)?;
        let s = sampled_sup(&f, m)?;
        out.push(f.scaled_real(1.0 / s));
    }
    Ok(out)
}

/// Per-term remainder defects and the strictly decreasing subsequence extracted from them.
#[derive(Clone, Debug, PartialEq)]
pub struct RemainderSupReport {
    /// `sup_f |Tr(R_m(f; V) - R_m(f; V_k))|` for every term of the sequence.
    pub raw: Vec<f64>,
    /// Positions (into the sequence) of the running strict minima of `raw`, starting with the first term.
    pub kept: Vec<usize>,
    /// `raw` restricted to `kept`.
    pub values: Vec<f64>,
}

impl RemainderSupReport {
    pub fn raw_monotone(&self) -> bool {
        self.raw.windows(2).all(|p| p[1] <= p[0])
    }
}

/// Positions of the running strict minima, the first position always included.
pub fn decreasing_subsequence(values: &[f64]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for (i, &x) in values.iter().enumerate() {
        match kept.last() {
            Some(&j) if !(x < values[j]) => {}
            _ => kept.push(i),
        }
    }
    kept
}

/// `sup_f |Tr(R_m(f; V) - R_m(f; V_k))|` for each term, over a normalized compactly supported family.
pub fn remainder_sup_experiment(
    h: &HermitianOperator,
    v: &HermitianOperator,
    seq: &ApproximationSequence,
    m: usize,
    family: &[TestFunction],
) -> Result<RemainderSupReport> {
    if m < 3 {
        return crate::error::invalid("remainder experiment needs m >= 3");
    }
    for (i, f) in family.iter().enumerate() {
        if f.smoothness().is_some_and(|s| s < m as u32 + 1) {
            return Err(crate::Error::NotAdmissible(alloc::format!("family member {i}: not of class C^{}", m + 1)));
        }
        let s = sampled_sup(f, m)?;
        if s > 1.0 + 1e-9 {
            return Err(crate::Error::NotAdmissible(alloc::format!("family member {i}: sup |f^(m)| = {s} exceeds 1")));
        }
    }
    let full: Vec<Complex64> = family.iter().map(|f| remainder_trace(f, h, v, m)).collect::<Result<_>>()?;
    let mut raw = Vec::with_capacity(seq.len());
    for vk in &seq.terms {
        let mut sup = 0.0_f64;
        for (f, t) in family.iter().zip(&full) {
            sup = sup.max((t - remainder_trace(f, h, vk, m)?).norm());
        }
        raw.push(sup);
    }
    let kept = decreasing_subsequence(&raw);
    let values = kept.iter().map(|&i| raw[i]).collect();
    Ok(RemainderSupReport { raw, kept, values })
}

/// `||eta_{m,k} - eta_m||_1` for each term, B-spline densities of `(H, V_k)` and `(H, V)`.
pub fn eta_convergence(h: &HermitianOperator, v: &HermitianOperator, seq: &ApproximationSequence, m: usize) -> Result<Vec<f64>> {
    let eta = ssf_compute(h, v, m, SsfMethod::Bspline)?;
    let one = Complex64::new(1.0, 0.0);
    seq.terms
        .iter()
        .map(|vk| {
            let e = ssf_compute(h, vk, m, SsfMethod::Bspline)?;
            Ok(PiecewisePolynomial::linear_combination(&[(one, &e.density), (-one, &eta.density)]).l1_norm())
        })
        .collect()
}

/// `max_x ||(V_k - V) x||` over the given unit vectors, for each term.
pub fn strong_convergence(v: &HermitianOperator, seq: &ApproximationSequence, vectors: &[Vec<Complex64>]) -> Result<Vec<f64>> {
    for x in vectors {
        check_dims(v.dim(), x.len())?;
    }
    Ok(seq
        .terms
        .iter()
        .map(|vk| {
            let diff = v.matrix() - vk.matrix();
            vectors.iter().fold(0.0_f64, |acc, x| {
                let y = diff.apply(x);
                acc.max(libm::sqrt(y.iter().map(|z| z.norm_sqr()).sum::<f64>()))
            })
        })
        .collect())
}
