//! Operator and scalar identities of the multiple operator integral calculus.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::json;
use specshift_core::cov::{corollary_expand, cov_expand, scalar_cov_identity, EpsilonSignature, Parity};
use specshift_core::linalg::{factorization_residuals, HermitianOperator, Matrix};
use specshift_core::moi::{basic_change_of_variables, perturbation_identity, taylor_remainder, IdentityResidual, RemainderMethod};
use specshift_core::ssf::remainder_operators;

use super::{instances, max, par_map, SuiteOutput};
use crate::config::ExperimentConfig;
use crate::ensemble::{instance_rng, random_gaussian, random_hermitian, random_matrix, random_nodes, random_rational, random_word, Stream};
use crate::error::Result;
use crate::report::{Check, SuiteReport};

/// Scalar samples drawn per instance, one for each order `1..=5`.
pub const SCALAR_ORDERS: usize = 5;
/// Largest order of the Taylor remainder comparison.
pub const REMAINDER_ORDERS: usize = 4;
/// Factorizations of the perturbed resolvent hold to this level.
pub const RESOLVENT_TOL: f64 = 1e-12;

#[derive(Default)]
struct Row {
    cov: f64,
    scalar: Vec<f64>,
    corollary: Vec<(Parity, f64)>,
    perturbation: f64,
    change_of_variables: f64,
    remainder: f64,
    resolvent: f64,
}

fn instance(cfg: &ExperimentConfig, d: usize, idx: u64) -> Result<Row> {
    let mut r = instance_rng(cfg.seed, Stream::Identities, idx);
    let mut row = Row::default();
    let hs_norm = cfg.h_scale;
    let vs_norm = cfg.v_scale;

    let m = 1 + (idx as usize % 4);
    let word = EpsilonSignature::new(random_word(&mut r, m))?;
    let g = random_rational(&mut r, 4);
    let hs: Vec<HermitianOperator> = (0..=m).map(|_| random_hermitian(&mut r, d, hs_norm)).collect();
    let vs: Vec<Matrix> = (0..m).map(|_| random_matrix(&mut r, d, vs_norm)).collect();
    row.cov = cov_expand(&g, &word, &hs, &vs)?.residual.relative();

    for m in 1..=SCALAR_ORDERS {
        let g = if r.gen_bool(0.5) { random_rational(&mut r, 4) } else { random_gaussian(&mut r) };
        let word = random_word(&mut r, m);
        let x = random_nodes(&mut r, m + 1, -2.0, 2.0);
        row.scalar.push(scalar_cov_identity(&g, &word, &x)?.relative());
    }

    let h = random_hermitian(&mut r, d, hs_norm);
    let v = random_hermitian(&mut r, d, vs_norm);
    let f = random_gaussian(&mut r);
    for parity in cfg.parity.parities() {
        let m = parity.order(cfg.n);
        let ops = remainder_operators(&h, &v, m)?;
        let args = vec![v.matrix().clone(); m];
        row.corollary.push((parity, corollary_expand(&f, parity, &ops, &args)?.residual.relative()));
    }

    let n = cfg.n;
    let fixed: Vec<HermitianOperator> = (0..n).map(|_| random_hermitian(&mut r, d, hs_norm)).collect();
    let args: Vec<Matrix> = (0..n).map(|_| random_matrix(&mut r, d, vs_norm)).collect();
    let a = random_hermitian(&mut r, d, hs_norm);
    let b = random_hermitian(&mut r, d, hs_norm);
    let slot = r.gen_range(1..=n + 1);
    row.perturbation = perturbation_identity(&f, &fixed, &args, &a, &b, slot)?.relative();

    let mut ops = fixed.clone();
    ops.push(a.clone());
    let tuple = specshift_core::moi::OperatorTuple::new(ops, args)?;
    row.change_of_variables = IdentityResidual::worst(&basic_change_of_variables(&g, &tuple)?);

    let f = random_rational(&mut r, 6);
    for k in 1..=REMAINDER_ORDERS {
        let direct = taylor_remainder(&f, &h, &v, k, RemainderMethod::Direct)?;
        let moi = taylor_remainder(&f, &h, &v, k, RemainderMethod::Moi)?;
        row.remainder = row.remainder.max(IdentityResidual::new(&direct, &moi, &[&moi]).relative());
    }
    let fr = factorization_residuals(&h, &v)?;
    row.resolvent = fr[0].max(fr[1]);
    Ok(row)
}

pub fn run(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    let items = instances(cfg);
    let rows = par_map(&items, |&(d, idx)| instance(cfg, d, idx))?;
    let t = &cfg.tolerances;
    let col = |f: &dyn Fn(&Row) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let scalar: Vec<f64> = rows.iter().flat_map(|r| r.scalar.iter().copied()).collect();
    let mut checks = vec![
        Check::at_most("cov_expand", "generalized change of variables, operator form", &col(&|r| r.cov), t.identity),
        Check::at_most("scalar_cov", "generalized change of variables, divided differences", &scalar, t.scalar),
    ];
    for parity in cfg.parity.parities() {
        let vals: Vec<f64> =
            rows.iter().flat_map(|r| r.corollary.iter().filter(|(p, _)| *p == parity).map(|(_, x)| *x)).collect();
        checks.push(Check::at_most(
            &format!("corollary_{}", parity.name()),
            "remainder decomposition into resolvent-sandwiched terms",
            &vals,
            t.identity,
        ));
    }
    checks.extend([
        Check::at_most("perturbation", "perturbation formula for operator integrals", &col(&|r| r.perturbation), t.identity),
        Check::at_most("change_of_variables", "basic change of variables", &col(&|r| r.change_of_variables), t.identity),
        Check::at_most("remainder_representation", "Taylor remainder as one operator integral", &col(&|r| r.remainder), t.identity),
        Check::at_most("resolvent_factorization", "second resolvent identity", &col(&|r| r.resolvent), RESOLVENT_TOL),
    ]);
    let mut obs = BTreeMap::new();
    obs.insert("instances".into(), json!(rows.len()));
    obs.insert("max_cov_residual".into(), json!(max(col(&|r| r.cov))));
    Ok(SuiteOutput { report: SuiteReport::new("verify-identities", checks, obs), files: Vec::new() })
}
