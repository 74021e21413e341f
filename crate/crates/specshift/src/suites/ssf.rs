//! Spectral shift densities: construction, export and structural checks.

use std::collections::BTreeMap;

use serde_json::json;
use specshift_core::cov::Parity;
use specshift_core::functions::TestFunction;
use specshift_core::linalg::HermitianOperator;
use specshift_core::moi::{taylor_remainder, RemainderMethod};
use specshift_core::ssf::{ssf_compute, ssf_reconstruct, uniqueness_fit, SpectralShiftDensity, SsfMethod};

use super::{instances, max, par_map, SuiteOutput};
use crate::config::{load_matrix, ExperimentConfig};
use crate::ensemble::{instance_rng, random_hermitian, Stream};
use crate::error::{CliError, Result};
use crate::io::{sample_csv, PiecewiseFile};
use crate::report::{Check, SuiteReport};

struct Row {
    /// `(order, imag residue / scale, atomic mass, largest |Tr R_m(x^k)|, uniqueness residual)`.
    orders: Vec<(usize, f64, f64, f64, f64)>,
    counting: f64,
    l1: f64,
}

fn random_pair(cfg: &ExperimentConfig, d: usize, idx: u64) -> (HermitianOperator, HermitianOperator) {
    let mut r = instance_rng(cfg.seed, Stream::Ssf, idx);
    let h = random_hermitian(&mut r, d, cfg.h_scale);
    let v = random_hermitian(&mut r, d, cfg.v_scale);
    (h, v)
}

fn polynomial_defect(h: &HermitianOperator, v: &HermitianOperator, m: usize) -> Result<f64> {
    let mut worst = 0.0_f64;
    for k in 0..m {
        let t = taylor_remainder(&TestFunction::monomial(k), h, v, m, RemainderMethod::Direct)?.trace();
        worst = worst.max(t.norm());
    }
    Ok(worst)
}

fn instance(cfg: &ExperimentConfig, d: usize, idx: u64) -> Result<Row> {
    let (h, v) = random_pair(cfg, d, idx);
    let mut orders = Vec::new();
    let mut l1 = 0.0;
    for parity in cfg.parity.parities() {
        let m = parity.order(cfg.n);
        let eta = ssf_compute(&h, &v, m, SsfMethod::Bspline)?;
        let rec = ssf_reconstruct(&h, &v, m)?;
        let fit = uniqueness_fit(&eta, &rec, m)?;
        l1 = eta.l1_norm();
        orders.push((m, eta.imag_residue / eta.scale, eta.atomic_mass, polynomial_defect(&h, &v, m)?, fit.relative()));
    }
    let a = ssf_compute(&h, &v, 1, SsfMethod::Counting)?;
    let b = ssf_compute(&h, &v, 1, SsfMethod::Bspline)?;
    let counting = uniqueness_fit(&a, &b, 1)?.residual;
    Ok(Row { orders, counting, l1 })
}

/// The pair whose density is exported: the configured one, or the first ensemble instance.
fn export_pair(cfg: &ExperimentConfig) -> Result<(HermitianOperator, HermitianOperator)> {
    match (&cfg.ssf.h, &cfg.ssf.v) {
        (Some(h), Some(v)) => {
            let h = load_matrix(h)?.to_hermitian()?;
            let v = load_matrix(v)?.to_hermitian()?;
            if h.dim() != v.dim() {
                return Err(CliError::Config(format!("ssf.h is {0}x{0} but ssf.v is {1}x{1}", h.dim(), v.dim())));
            }
            Ok((h, v))
        }
        _ => Ok(random_pair(cfg, cfg.dims[0], 0)),
    }
}

pub fn export(cfg: &ExperimentConfig) -> Result<(SpectralShiftDensity, Vec<(String, String)>)> {
    let (h, v) = export_pair(cfg)?;
    let m = cfg.ssf.order.unwrap_or_else(|| Parity::Odd.order(cfg.n));
    let eta = ssf_compute(&h, &v, m, SsfMethod::Bspline)?;
    let file = PiecewiseFile::from_piecewise(&eta.density);
    let json = serde_json::to_string_pretty(&file).expect("density serializes") + "\n";
    let (lo, hi) = eta.density.support().unwrap_or((0.0, 0.0));
    let csv = sample_csv(&eta.density, lo, hi, cfg.ssf.grid);
    Ok((eta, vec![("eta_m.json".into(), json), ("eta_m.csv".into(), csv)]))
}

pub fn run(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let items = instances(cfg);
    let rows = par_map(&items, |&(d, idx)| instance(cfg, d, idx))?;
    let (eta, files) = export(cfg)?;
    let t = &cfg.tolerances;
    let per = |f: &dyn Fn(&(usize, f64, f64, f64, f64)) -> f64| -> Vec<f64> {
        rows.iter().flat_map(|r| r.orders.iter().map(f)).collect()
    };
    let mut imag = per(&|o| o.1);
    let mut atoms = per(&|o| o.2);
    imag.push(eta.imag_residue / eta.scale);
    atoms.push(eta.atomic_mass);
    let checks = vec![
        Check::at_most("imag_residue", "real-valuedness of the spectral shift function", &imag, t.imag_residue),
        Check::at_most("atomic_mass", "integrability of the spectral shift function", &atoms, t.atomic_mass),
        Check::at_most("polynomial_vanishing", "remainder annihilates polynomials of degree < m", &per(&|o| o.3), t.polynomial),
        Check::at_most("uniqueness", "uniqueness up to a polynomial of degree < m", &per(&|o| o.4), t.uniqueness),
        Check::at_most(
            "counting_first_order",
            "first-order shift function as eigenvalue counting difference",
            &rows.iter().map(|r| r.counting).collect::<Vec<_>>(),
            t.identity,
        ),
    ];
    let mut obs = BTreeMap::new();
    obs.insert("exported_order".into(), json!(eta.order));
    obs.insert("exported_l1_norm".into(), json!(eta.l1_norm()));
    obs.insert("exported_support".into(), json!(eta.density.support()));
    obs.insert("max_l1_norm".into(), json!(max(rows.iter().map(|r| r.l1))));
    Ok(SuiteOutput { report: SuiteReport::new("ssf", checks, obs), files })
}
