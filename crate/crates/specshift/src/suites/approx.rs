//! Finite-rank approximation of the perturbation and convergence of the derived quantities.

use std::collections::BTreeMap;

use serde_json::json;
use specshift_core::approx::{
    all_triple_choices, convergence_report, eta_convergence, finite_rank_sequence, normalized_bump_family,
    remainder_sup_experiment, strong_convergence, ApproximationSequence, ConvergenceReport, RemainderSupReport, NORM_SLACK,
};
use specshift_core::linalg::{op_norm, schatten, HermitianOperator, Matrix};

use super::{instances, par_map, SuiteOutput};
use crate::config::ExperimentConfig;
use crate::ensemble::{instance_rng, random_hermitian, unit_vectors, Stream};
use crate::error::Result;
use crate::io::csv_table;
use crate::report::{Check, SuiteReport};

/// Unit vectors of the strong convergence proxy.
pub const PROBE_VECTORS: usize = 20;
/// The full-window term equals `V`; its strong defect vanishes to this level.
pub const STRONG_TOL: f64 = 1e-12;

pub struct Instance {
    pub seq: ApproximationSequence,
    pub convergence: ConvergenceReport,
    pub remainder: RemainderSupReport,
    pub eta: Vec<f64>,
    pub strong: Vec<f64>,
    pub invariants: Vec<bool>,
    pub covers_spectrum: bool,
}

fn sandwich(h: &HermitianOperator, x: &Matrix) -> Matrix {
    let r = h.resolvent_i();
    &(&r * x) * &r
}

/// Windows `w_k = top * k / count` with `top` just past the spectrum of `H`.
pub fn windows(h: &HermitianOperator, count: usize) -> Vec<f64> {
    let top = h.eigenvalues().iter().fold(0.0_f64, |a, x| a.max(x.abs())) * 1.01 + 1e-3;
    (1..=count).map(|k| top * k as f64 / count as f64).collect()
}

pub fn instance(cfg: &ExperimentConfig, d: usize, idx: u64) -> Result<Instance> {
    let mut r = instance_rng(cfg.seed, Stream::Approx, idx);
    let h = random_hermitian(&mut r, d, 2.0 * cfg.h_scale);
    let v = random_hermitian(&mut r, d, cfg.v_scale);
    let n = cfg.n;
    let w = windows(&h, cfg.approx.windows);
    let seq = finite_rank_sequence(&h, &v, n, &w, &[])?;
    let base = schatten(&sandwich(&h, v.matrix()), n as f64)?;
    let vn = op_norm(v.matrix());
    let mut invariants = Vec::new();
    for vk in &seq.terms {
        invariants.push(op_norm(vk.matrix()) <= vn * (1.0 + NORM_SLACK));
        invariants.push(schatten(&sandwich(&h, vk.matrix()), n as f64)? <= 2.0 * base);
    }
    let convergence = convergence_report(&h, &v, &seq, n, &all_triple_choices())?;
    let m = cfg.approx.order;
    let hv = h.add(&v)?;
    let reach = h.eigenvalues().iter().chain(hv.eigenvalues()).fold(0.0_f64, |a, x| a.max(x.abs()));
    let family = normalized_bump_family(reach + 1.0, m, cfg.approx.bumps)?;
    let remainder = remainder_sup_experiment(&h, &v, &seq, m, &family)?;
    let eta = eta_convergence(&h, &v, &seq, m)?;
    let strong = strong_convergence(&v, &seq, &unit_vectors(&mut r, d, PROBE_VECTORS))?;
    let covers_spectrum = seq.windows.last() == w.last();
    Ok(Instance { seq, convergence, remainder, eta, strong, invariants, covers_spectrum })
}

/// `k, window, rank, schatten_defect, resolvent_defect, remainder_sup` for one instance.
pub fn convergence_csv(inst: &Instance) -> String {
    let rows: Vec<Vec<Option<f64>>> = inst
        .convergence
        .rows
        .iter()
        .zip(&inst.remainder.raw)
        .map(|(row, &sup)| {
            vec![
                Some(row.k as f64),
                Some(row.window),
                Some(row.rank as f64),
                Some(row.schatten_defect),
                Some(row.resolvent_defect),
                Some(sup),
            ]
        })
        .collect();
    csv_table(&["k", "window", "rank", "schatten_defect", "resolvent_defect", "remainder_sup"], &rows)
}

pub fn run(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let items = instances(cfg);
    let all = par_map(&items, |&(d, idx)| instance(cfg, d, idx))?;
    let t = &cfg.tolerances;
    let last = |v: &[f64]| v.last().copied().unwrap_or(f64::NAN);
    let invariants: Vec<bool> = all.iter().flat_map(|i| i.invariants.iter().copied()).collect();
    let kept_monotone: Vec<bool> = all.iter().map(|i| i.remainder.values.windows(2).all(|p| p[1] <= p[0])).collect();
    let checks = vec![
        Check::holds("sequence_invariants", "finite-rank approximants keep the norm and Schatten bounds", &invariants),
        Check::holds("full_window", "last window covers the spectrum", &all.iter().map(|i| i.covers_spectrum).collect::<Vec<_>>()),
        Check::holds("remainder_sup_nonincreasing", "convergence of remainder traces along a subsequence", &kept_monotone),
        Check::at_most(
            "remainder_sup_final",
            "convergence of remainder traces",
            &all.iter().map(|i| last(&i.remainder.values)).collect::<Vec<_>>(),
            t.remainder_sup,
        ),
        Check::at_most("eta_l1_final", "L1 convergence of approximating shift functions", &all.iter().map(|i| last(&i.eta)).collect::<Vec<_>>(), t.eta_l1),
        Check::at_most("strong_final", "strong convergence of the approximants", &all.iter().map(|i| last(&i.strong)).collect::<Vec<_>>(), STRONG_TOL),
        Check::at_most(
            "triple_final",
            "convergence of resolvent-sandwiched products",
            &all.iter().map(|i| i.convergence.rows.last().map_or(f64::NAN, |r| r.max_triple_defect)).collect::<Vec<_>>(),
            STRONG_TOL,
        ),
    ];
    let mut obs = BTreeMap::new();
    let raw_monotone = all.iter().filter(|i| i.remainder.raw_monotone()).count();
    let defects_monotone = all.iter().filter(|i| i.convergence.monotone()).count();
    obs.insert("instances".into(), json!(all.len()));
    obs.insert("raw_remainder_monotone_instances".into(), json!(raw_monotone));
    obs.insert("raw_defects_monotone_instances".into(), json!(defects_monotone));
    obs.insert("dropped_terms".into(), json!(all.iter().map(|i| i.seq.dropped.len()).sum::<usize>()));
    obs.insert(
        "defect_subsequence_lengths".into(),
        json!(all.iter().map(|i| i.convergence.monotone_subsequence().len()).collect::<Vec<_>>()),
    );
    let files = vec![("convergence.csv".into(), convergence_csv(&all[0]))];
    Ok(SuiteOutput { report: SuiteReport::new("approx", checks, obs), files })
}
