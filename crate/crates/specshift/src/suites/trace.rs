//! The trace formula and its per-block decomposition.

use std::collections::BTreeMap;

use serde_json::json;
use specshift_core::functions::TestFunction;
use specshift_core::ssf::{rp_term_measures, verify_trace_formula};

use super::{instances, max, par_map, SuiteOutput};
use crate::config::ExperimentConfig;
use crate::ensemble::{admissible_family, instance_rng, random_hermitian, Stream};
use crate::error::Result;
use crate::report::{Check, SuiteReport};

pub fn family(cfg: &ExperimentConfig) -> Vec<TestFunction> {
    admissible_family(&mut instance_rng(cfg.seed, Stream::Family, 0), &cfg.family, cfg.n)
}

struct Row {
    trace: Vec<f64>,
    imag: Vec<f64>,
    atoms: Vec<f64>,
    block_sum: Vec<f64>,
    block: Vec<f64>,
}

pub fn run(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let fam = family(cfg);
    let items = instances(cfg);
    let rows = par_map(&items, |&(d, idx)| {
        let mut r = instance_rng(cfg.seed, Stream::TraceFormula, idx);
        let h = random_hermitian(&mut r, d, cfg.h_scale);
        let v = random_hermitian(&mut r, d, cfg.v_scale);
        let mut row = Row { trace: vec![], imag: vec![], atoms: vec![], block_sum: vec![], block: vec![] };
        for parity in cfg.parity.parities() {
            let rep = verify_trace_formula(&h, &v, cfg.n, parity, &fam)?;
            row.trace.push(rep.max_relative);
            row.imag.push(rep.imag_residue);
            row.atoms.push(rep.atomic_mass);
            let rp = rp_term_measures(&h, &v, cfg.n, parity, &fam)?;
            row.block_sum.push(rp.sum_relative);
            row.block.push(rp.max_block_relative());
        }
        Ok(row)
    })?;
    let t = &cfg.tolerances;
    let flat = |f: &dyn Fn(&Row) -> &Vec<f64>| rows.iter().flat_map(|r| f(r).iter().copied()).collect::<Vec<f64>>();
    let checks = vec![
        Check::at_most("trace_formula", "trace formula for the Taylor remainder", &flat(&|r| &r.trace), t.trace_formula),
        Check::at_most("imag_residue", "real-valuedness of the spectral shift function", &flat(&|r| &r.imag), t.imag_residue),
        Check::at_most("atomic_mass", "integrability of the spectral shift function", &flat(&|r| &r.atoms), t.atomic_mass),
        Check::at_most("block_sum", "signed sum of block traces equals the remainder trace", &flat(&|r| &r.block_sum), t.identity),
        Check::at_most("block_measures", "block traces represented by measures", &flat(&|r| &r.block), t.trace_formula),
    ];
    let mut obs = BTreeMap::new();
    obs.insert("family_size".into(), json!(fam.len()));
    obs.insert("max_trace_residual".into(), json!(max(flat(&|r| &r.trace))));
    Ok(SuiteOutput { report: SuiteReport::new("trace-formula", checks, obs), files: Vec::new() })
}
