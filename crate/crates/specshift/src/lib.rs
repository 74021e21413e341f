//! Experiment runner for the `specshift` operator calculus: configuration, random ensembles,
//! verification suites, reports and file formats.

pub mod config;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod report;
pub mod suites;

use std::fs;
use std::path::Path;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use report::Report;

/// A runner subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyIdentities,
    Ssf,
    TraceFormula,
    Bounds,
    Approx,
    All,
}

impl Command {
    pub const EVERY: [Command; 6] =
        [Command::VerifyIdentities, Command::Ssf, Command::TraceFormula, Command::Bounds, Command::Approx, Command::All];

    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyIdentities => "verify-identities",
            Command::Ssf => "ssf",
            Command::TraceFormula => "trace-formula",
            Command::Bounds => "bounds",
            Command::Approx => "approx",
            Command::All => "all",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::EVERY.into_iter().find(|c| c.name() == s)
    }

    fn parts(self) -> Vec<Command> {
        match self {
            Command::All => Self::EVERY[..5].to_vec(),
            c => vec![c],
        }
    }
}

/// The report of a run and every artifact it produced, `report.json` first.
pub struct Outcome {
    pub report: Report,
    pub files: Vec<(String, String)>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed {
            0
        } else {
            1
        }
    }

    /// Writes every artifact into `dir`, creating it when needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let out = |e: std::io::Error, p: &Path| CliError::Output(format!("{}: {e}", p.display()));
        fs::create_dir_all(dir).map_err(|e| out(e, dir))?;
        for (name, text) in &self.files {
            let p = dir.join(name);
            fs::write(&p, text).map_err(|e| out(e, &p))?;
        }
        Ok(())
    }

    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, t)| t.as_str())
    }
}

/// Runs `command` on the current rayon pool.
pub fn run(command: Command, cfg: &ExperimentConfig) -> Result<Outcome> {
    cfg.validate()?;
    let mut reports = Vec::new();
    let mut files = Vec::new();
    for part in command.parts() {
        let o = match part {
            Command::VerifyIdentities => suites::identities::run(cfg)?,
            Command::Ssf => suites::ssf::run(cfg)?,
            Command::TraceFormula => suites::trace::run(cfg)?,
            Command::Bounds => suites::bounds::run(cfg)?,
            Command::Approx => suites::approx::run(cfg)?,
            Command::All => unreachable!("expanded by parts"),
        };
        reports.push(o.report);
        files.extend(o.files);
    }
    let report = Report::new(command.name(), cfg, reports);
    files.insert(0, ("report.json".into(), report.to_json()));
    Ok(Outcome { report, files })
}
