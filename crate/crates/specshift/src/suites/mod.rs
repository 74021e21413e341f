//! Verification suites. Each instance runs sequentially on one worker; results are gathered in
//! instance order, so reports do not depend on the number of threads.

pub mod approx;
pub mod bounds;
pub mod identities;
pub mod ssf;
pub mod trace;

use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::report::SuiteReport;

/// A suite report together with the artifact files it produced (`name`, contents).
pub struct SuiteOutput {
    pub report: SuiteReport,
    pub files: Vec<(String, String)>,
}

/// `(dimension, stream index)` of every instance: `ensemble_size` per configured dimension.
pub fn instances(cfg: &ExperimentConfig) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for &d in &cfg.dims {
        for _ in 0..cfg.ensemble_size {
            out.push((d, out.len() as u64));
        }
    }
    out
}

/// `f` over `items` in parallel; the first error in item order wins.
pub fn par_map<I: Sync, T: Send>(items: &[I], f: impl Fn(&I) -> Result<T> + Sync) -> Result<Vec<T>> {
    let out: Vec<Result<T>> = items.par_iter().map(&f).collect();
    out.into_iter().collect()
}

pub(crate) fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0_f64, |a, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}
