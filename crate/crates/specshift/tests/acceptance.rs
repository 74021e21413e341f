use std::path::PathBuf;
use std::process::Command as Process;
use std::time::{Duration, Instant};

use specshift::report::Check;
use specshift::{run, Command, ExperimentConfig, Outcome};
use specshift_core::linalg::HermitianOperator;
use specshift_core::ssf::{ssf_compute, SsfMethod};

type Verdict = Result<(bool, String), String>;

fn suite(command: Command, cfg: &ExperimentConfig) -> Result<Outcome, String> {
    run(command, cfg).map_err(|e| e.to_string())
}

fn find<'a>(o: &'a Outcome, suite: &str, name: &str) -> Result<&'a Check, String> {
    o.report
        .suites
        .iter()
        .find(|s| s.suite == suite)
        .and_then(|s| s.checks.iter().find(|c| c.name == name))
        .ok_or_else(|| format!("missing check {suite}/{name}"))
}

/// All named checks of one suite must pass with at least `min_samples` samples each.
fn checks(o: &Outcome, suite: &str, names: &[&str], min_samples: usize) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in names {
        let c = find(o, suite, n)?;
        ok &= c.passed && c.samples >= min_samples;
        parts.push(format!("{n} {:.2e}/{:.0e} (n={})", c.value, c.tolerance, c.samples));
    }
    Ok((ok, parts.join(", ")))
}

fn scalar_closed_form() -> Verdict {
    let zero = HermitianOperator::diag(&[0.0]).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for v in [0.5, 1.0, 2.0] {
        let pert = HermitianOperator::diag(&[v]).map_err(|e| e.to_string())?;
        for m in [3usize, 4] {
            let eta = ssf_compute(&zero, &pert, m, SsfMethod::Bspline).map_err(|e| e.to_string())?;
            let fact: f64 = (1..m).map(|k| k as f64).product();
            for j in 0..=1000 {
                let x = v * j as f64 / 1000.0;
                let expect = if x < v { (v - x).powi(m as i32 - 1) / fact } else { 0.0 };
                let got = eta.density.eval(x);
                worst = worst.max((got.re - expect).abs()).max(got.im.abs());
            }
        }
    }
    Ok((worst <= 1e-12, format!("max pointwise error {worst:.2e}")))
}

fn with_ensemble(size: usize) -> ExperimentConfig {
    ExperimentConfig { ensemble_size: size, ..ExperimentConfig::default() }
}

fn trace_formula() -> Verdict {
    let cfg = with_ensemble(7);
    let o = suite(Command::TraceFormula, &cfg)?;
    let fam = find(&o, "trace-formula", "trace_formula")?;
    let (ok, text) = checks(&o, "trace-formula", &["trace_formula"], 40)?;
    let family = o.report.suites[0].observations.get("family_size").and_then(|v| v.as_u64()).unwrap_or(0);
    Ok((ok && family >= 20 && fam.tolerance == 1e-8, format!("{text}, family {family}")))
}

fn change_of_variables() -> Verdict {
    let o = suite(Command::VerifyIdentities, &with_ensemble(34))?;
    let (a, ta) = checks(&o, "verify-identities", &["cov_expand"], 100)?;
    let (b, tb) = checks(&o, "verify-identities", &["scalar_cov"], 500)?;
    Ok((a && b, format!("{ta}, {tb}")))
}

fn decompositions() -> Verdict {
    checks(&suite(Command::VerifyIdentities, &with_ensemble(8))?, "verify-identities", &["corollary_odd", "corollary_even", "perturbation"], 24)
}

fn remainder_representation() -> Verdict {
    checks(&suite(Command::VerifyIdentities, &with_ensemble(8))?, "verify-identities", &["remainder_representation"], 24)
}

fn polynomial_vanishing() -> Verdict {
    checks(&suite(Command::Ssf, &ExperimentConfig::default())?, "ssf", &["polynomial_vanishing"], 12)
}

fn real_and_integrable() -> Verdict {
    let cfg = ExperimentConfig::default();
    let (a, ta) = checks(&suite(Command::Ssf, &cfg)?, "ssf", &["imag_residue", "atomic_mass"], 12)?;
    let (b, tb) = checks(&suite(Command::TraceFormula, &cfg)?, "trace-formula", &["imag_residue", "atomic_mass"], 12)?;
    Ok((a && b, format!("{ta}, {tb}")))
}

fn uniqueness() -> Verdict {
    checks(&suite(Command::Ssf, &ExperimentConfig::default())?, "ssf", &["uniqueness"], 12)
}

fn bound_scaling() -> Verdict {
    checks(&suite(Command::Bounds, &ExperimentConfig::default())?, "bounds", &["slope_odd", "slope_even"], 12)
}

fn convergence() -> Verdict {
    checks(
        &suite(Command::Approx, &ExperimentConfig::default())?,
        "approx",
        &["sequence_invariants", "remainder_sup_nonincreasing", "remainder_sup_final", "eta_l1_final"],
        12,
    )
}

fn partial_integration() -> Verdict {
    checks(&suite(Command::Bounds, &with_ensemble(17))?, "bounds", &["weight_shift", "weight_shift_norm"], 50)
}

fn scratch(tag: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("specshift-acceptance-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&p);
    p
}

fn determinism() -> Verdict {
    let exe = env!("CARGO_BIN_EXE_specshift");
    let names = ["report.json", "eta_m.json", "eta_m.csv", "convergence.csv"];
    let mut runs: Vec<Vec<Vec<u8>>> = Vec::new();
    let mut codes = Vec::new();
    for (i, threads) in [1, 2, 8, 8].into_iter().enumerate() {
        let dir = scratch(&format!("det{i}"));
        let out = Process::new(exe)
            .args(["all", "--threads", &threads.to_string(), "--out"])
            .arg(&dir)
            .output()
            .map_err(|e| e.to_string())?;
        codes.push(out.status.code());
        runs.push(names.iter().map(|n| std::fs::read(dir.join(n)).unwrap_or_default()).collect());
        let _ = std::fs::remove_dir_all(&dir);
    }
    let identical = runs.iter().all(|r| r == &runs[0]);
    let complete = runs[0].iter().all(|f| !f.is_empty());
    Ok((
        identical && complete && codes.iter().all(|c| *c == Some(0)),
        format!("threads 1/2/8/8, identical {identical}, all artifacts {complete}, exit codes {codes:?}"),
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Verdict,
}

fn main() {
    let list = [
        Criterion { id: 1, name: "scalar closed form", limit: Some(Duration::from_secs(1)), run: scalar_closed_form },
        Criterion { id: 2, name: "trace formula", limit: Some(Duration::from_secs(120)), run: trace_formula },
        Criterion { id: 3, name: "generalized change of variables", limit: Some(Duration::from_secs(120)), run: change_of_variables },
        Criterion { id: 4, name: "odd/even decompositions and perturbation", limit: Some(Duration::from_secs(60)), run: decompositions },
        Criterion { id: 5, name: "remainder as multiple operator integral", limit: None, run: remainder_representation },
        Criterion { id: 6, name: "polynomial vanishing", limit: None, run: polynomial_vanishing },
        Criterion { id: 7, name: "real-valuedness and integrability", limit: None, run: real_and_integrable },
        Criterion { id: 8, name: "uniqueness up to polynomial", limit: None, run: uniqueness },
        Criterion { id: 9, name: "bound scaling", limit: Some(Duration::from_secs(120)), run: bound_scaling },
        Criterion { id: 10, name: "finite-rank convergence", limit: None, run: convergence },
        Criterion { id: 11, name: "partial integration", limit: None, run: partial_integration },
        Criterion { id: 12, name: "determinism across thread counts", limit: None, run: determinism },
    ];
    let mut failed = 0;
    for c in &list {
        let start = Instant::now();
        let verdict = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.limit.map_or(true, |l| elapsed < l);
        let (ok, detail) = match verdict {
            Ok((ok, d)) => (ok && in_time, d),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = c.limit.map_or(String::new(), |l| format!(" limit {:.0} s", l.as_secs_f64()));
        println!(
            "{} criterion {:>2} {}: {} [{:.2} s{}]",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            elapsed.as_secs_f64(),
            limit
        );
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", list.len() - failed, list.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
