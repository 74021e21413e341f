//! Norm bounds: scaling of the weighted density norm, mixed-norm products and the weight shift.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::json;
use specshift_core::cov::Parity;
use specshift_core::functions::TestFunction;
use specshift_core::ssf::{measure_weight_shift, rp_term_measures, weighted_norm_and_scaling};

use super::{instances, max, par_map, SuiteOutput};
use crate::config::ExperimentConfig;
use crate::ensemble::{instance_rng, random_gaussian, random_hermitian, random_measure, random_rational, separated_hermitian, Stream};
use crate::error::Result;
use crate::report::{Check, SuiteReport};

/// Eigenvalue jitter of the well-separated `H` used for the slope fit.
pub const SCALING_JITTER: f64 = 0.15;
/// Operator norm of `V` in the slope fit.
pub const SCALING_V_NORM: f64 = 0.2;

struct ScalingRow {
    parity: Parity,
    order: usize,
    slope: f64,
    ratio: f64,
    smallest_weight: Option<u32>,
}

struct Row {
    scaling: Vec<ScalingRow>,
    /// Largest `||mu|| / p` over all tuples.
    measure_ratio: f64,
    /// `max p / bound_factor`.
    product_ratio: f64,
    shift_residual: f64,
    shift_bound: bool,
    shift_ratio: f64,
}

/// Test functions of class `(n + k, m + k + 1)`.
fn shift_family(r: &mut impl Rng, n: usize, m: usize, k: usize) -> Vec<TestFunction> {
    let s = (n + k + 3) as u32;
    let c = r.gen_range(-1.0..1.0);
    vec![
        random_gaussian(r),
        TestFunction::poly_bump(c - 2.0, c + 2.5, s).expect("nonempty interval"),
        random_rational(r, m + k + 3),
    ]
}

fn instance(cfg: &ExperimentConfig, fam: &[TestFunction], d: usize, idx: u64) -> Result<Row> {
    let mut r = instance_rng(cfg.seed, Stream::Scaling, idx);
    let h = separated_hermitian(&mut r, d, SCALING_JITTER);
    let v = random_hermitian(&mut r, d, SCALING_V_NORM);
    let mut scaling = Vec::new();
    for parity in cfg.parity.parities() {
        let s = weighted_norm_and_scaling(&h, &v, cfg.n, parity)?;
        scaling.push(ScalingRow {
            parity,
            order: s.order,
            slope: s.slope.unwrap_or(f64::NAN),
            ratio: s.ratio.unwrap_or(f64::NAN),
            smallest_weight: s.smallest_bounded_weight,
        });
    }

    let h = random_hermitian(&mut r, d, cfg.h_scale);
    let v = random_hermitian(&mut r, d, cfg.v_scale);
    let mut measure_ratio = 0.0_f64;
    let mut product_ratio = 0.0_f64;
    for parity in cfg.parity.parities() {
        let rp = rp_term_measures(&h, &v, cfg.n, parity, fam)?;
        for b in &rp.blocks {
            for term in &b.terms {
                if term.p_value > 0.0 {
                    measure_ratio = measure_ratio.max(term.mu_norm / term.p_value);
                }
            }
        }
        if rp.bound_factor > 0.0 {
            product_ratio = product_ratio.max(rp.max_p_value / rp.bound_factor);
        }
    }

    let mut r = instance_rng(cfg.seed, Stream::WeightShift, idx);
    let mu = random_measure(&mut r);
    let (n, m, k) = (idx as usize % 3, (idx as usize / 3) % 3, 1 + idx as usize % 2);
    let eps = r.gen_range(0.05..=1.0);
    let g = shift_family(&mut r, n, m, k);
    let ws = measure_weight_shift(&mu, n, m, k, eps, &g)?;
    Ok(Row {
        scaling,
        measure_ratio,
        product_ratio,
        shift_residual: ws.max_residual,
        shift_bound: ws.norm_bound_holds,
        shift_ratio: if ws.mu_norm > 0.0 { ws.shifted_norm / (ws.norm_constant * ws.mu_norm) } else { 0.0 },
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let fam = super::trace::family(cfg);
    let items = instances(cfg);
    let rows = par_map(&items, |&(d, idx)| instance(cfg, &fam, d, idx))?;
    let t = &cfg.tolerances;
    let mut checks = Vec::new();
    let mut obs = BTreeMap::new();
    for parity in cfg.parity.parities() {
        let sr: Vec<&ScalingRow> = rows.iter().flat_map(|r| r.scaling.iter().filter(|s| s.parity == parity)).collect();
        let order = parity.order(cfg.n);
        let dev: Vec<f64> = sr.iter().map(|s| s.slope - s.order as f64).collect();
        checks.push(Check::at_least(
            &format!("slope_{}", parity.name()),
            "bound on the weighted norm of the shift function, scaling in V",
            &dev,
            -t.slope,
        ));
        obs.insert(format!("slope_{}_order", parity.name()), json!(order));
        obs.insert(format!("slope_{}_max_excess", parity.name()), json!(dev.iter().copied().fold(f64::NEG_INFINITY, f64::max)));
        obs.insert(format!("norm_ratio_{}_max", parity.name()), json!(max(sr.iter().map(|s| s.ratio))));
        let weights: Vec<Option<u32>> = sr.iter().map(|s| s.smallest_weight).collect();
        obs.insert(format!("smallest_bounded_weight_{}", parity.name()), json!(weights.iter().max()));
    }
    checks.push(Check::at_most(
        "weight_shift",
        "partial integration moving derivatives onto the measure",
        &rows.iter().map(|r| r.shift_residual).collect::<Vec<_>>(),
        t.weight_shift,
    ));
    checks.push(Check::holds(
        "weight_shift_norm",
        "norm of the shifted measure",
        &rows.iter().map(|r| r.shift_bound).collect::<Vec<_>>(),
    ));
    obs.insert("measure_to_product_ratio_max".into(), json!(max(rows.iter().map(|r| r.measure_ratio))));
    obs.insert("product_to_factor_ratio_max".into(), json!(max(rows.iter().map(|r| r.product_ratio))));
    obs.insert("shifted_norm_ratio_max".into(), json!(max(rows.iter().map(|r| r.shift_ratio))));
    Ok(SuiteOutput { report: SuiteReport::new("bounds", checks, obs), files: Vec::new() })
}
