use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use specshift::{run, CliError, Command, ExperimentConfig};

#[derive(Parser, Debug)]
#[command(name = "specshift", version, about = "Verification runner for higher-order spectral shift functions")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// JSON experiment configuration; defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory for report.json and artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Worker threads; the rayon default when omitted.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Sample points of eta_m.csv; overrides `ssf.grid`.
    #[arg(long, global = true, value_name = "N")]
    grid: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Sub {
    /// Change-of-variables, decomposition and perturbation identities.
    VerifyIdentities,
    /// Spectral shift densities and their export.
    Ssf,
    /// Trace formula on an admissible function family.
    TraceFormula,
    /// Scaling of the weighted norm, mixed-norm products and the weight shift.
    Bounds,
    /// Finite-rank approximation and convergence.
    Approx,
    /// Every suite.
    All,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::VerifyIdentities => Command::VerifyIdentities,
            Sub::Ssf => Command::Ssf,
            Sub::TraceFormula => Command::TraceFormula,
            Sub::Bounds => Command::Bounds,
            Sub::Approx => Command::Approx,
            Sub::All => Command::All,
        }
    }
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::read(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(g) = cli.grid {
        cfg.ssf.grid = g;
    }
    if cli.out.is_some() {
        cfg.output_dir = cli.out.clone();
    }
    cfg.validate()?;
    let command = Command::from(cli.command);
    let outcome = match cli.threads {
        Some(0) => return Err(CliError::Config("--threads must be positive".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))?
            .install(|| run(command, &cfg))?,
        None => run(command, &cfg)?,
    };
    let dir = cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    outcome.write(&dir)?;
    for f in &outcome.report.failures {
        eprintln!("failed: {f}");
    }
    println!("{}: {} ({})", command.name(), if outcome.report.passed { "pass" } else { "FAIL" }, dir.join("report.json").display());
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("specshift: {e}");
            if e.exit_code() == 2 {
                eprintln!("{}", Cli::command().render_usage());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
