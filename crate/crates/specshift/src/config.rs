//! Experiment configuration, read from a single JSON file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use specshift_core::cov::Parity;

use crate::error::{CliError, Result};
use crate::io::MatrixFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityChoice {
    Odd,
    Even,
    Both,
}

impl ParityChoice {
    pub fn parities(self) -> Vec<Parity> {
        match self {
            ParityChoice::Odd => vec![Parity::Odd],
            ParityChoice::Even => vec![Parity::Even],
            ParityChoice::Both => vec![Parity::Odd, Parity::Even],
        }
    }
}

/// Member counts of the generated test function family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilySpec {
    pub rational: usize,
    pub gaussian: usize,
    pub smooth_bump: usize,
    pub poly_bump: usize,
}

impl Default for FamilySpec {
    fn default() -> Self {
        Self { rational: 5, gaussian: 5, smooth_bump: 5, poly_bump: 5 }
    }
}

impl FamilySpec {
    pub fn total(&self) -> usize {
        self.rational + self.gaussian + self.smooth_bump + self.poly_bump
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Operator identities, relative to their scale.
    pub identity: f64,
    /// Scalar change-of-variables identity.
    pub scalar: f64,
    pub trace_formula: f64,
    pub polynomial: f64,
    pub imag_residue: f64,
    pub atomic_mass: f64,
    pub uniqueness: f64,
    /// Allowed shortfall of the fitted slope below the order.
    pub slope: f64,
    pub remainder_sup: f64,
    pub eta_l1: f64,
    pub weight_shift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-9,
            scalar: 1e-10,
            trace_formula: 1e-8,
            polynomial: 1e-12,
            imag_residue: 1e-10,
            atomic_mass: 1e-10,
            uniqueness: 1e-6,
            slope: 0.1,
            remainder_sup: 1e-10,
            eta_l1: 1e-8,
            weight_shift: 1e-8,
        }
    }
}

/// An explicit pair, given inline or by file (paths relative to the config file).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSource {
    Inline(MatrixFile),
    Path(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SsfSpec {
    pub h: Option<MatrixSource>,
    pub v: Option<MatrixSource>,
    /// Order of `eta`; defaults to `2n - 1`.
    pub order: Option<usize>,
    /// CSV sample count.
    pub grid: usize,
}

impl Default for SsfSpec {
    fn default() -> Self {
        Self { h: None, v: None, order: None, grid: 201 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ApproxSpec {
    pub windows: usize,
    pub bumps: usize,
    /// Order `m` of the remainder experiment.
    pub order: usize,
}

impl Default for ApproxSpec {
    fn default() -> Self {
        Self { windows: 8, bumps: 10, order: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub n: usize,
    pub parity: ParityChoice,
    pub family: FamilySpec,
    /// Instances per dimension.
    pub ensemble_size: usize,
    /// Operator norm of `H`.
    pub h_scale: f64,
    /// Operator norm of `V`.
    pub v_scale: f64,
    pub tolerances: Tolerances,
    pub output_dir: Option<PathBuf>,
    pub ssf: SsfSpec,
    pub approx: ApproxSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            dims: vec![2, 3, 4],
            n: 2,
            parity: ParityChoice::Both,
            family: FamilySpec::default(),
            ensemble_size: 4,
            h_scale: 1.0,
            v_scale: 0.7,
            tolerances: Tolerances::default(),
            output_dir: None,
            ssf: SsfSpec::default(),
            approx: ApproxSpec::default(),
        }
    }
}

pub const MAX_DIM: usize = 16;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut c = Self::from_json(&text).map_err(|e| match e {
            CliError::Config(s) => CliError::Config(format!("{}: {s}", path.display())),
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        for src in [&mut c.ssf.h, &mut c.ssf.v].into_iter().flatten() {
            if let MatrixSource::Path(p) = src {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |s: &str| Err(CliError::Config(s.to_string()));
        if self.dims.is_empty() || self.dims.iter().any(|&d| d == 0 || d > MAX_DIM) {
            return bad("dims must be a nonempty list of values in 1..=16");
        }
        if !(2..=3).contains(&self.n) {
            return bad("n must be 2 or 3");
        }
        if self.ensemble_size == 0 {
            return bad("ensemble_size must be positive");
        }
        if self.family.total() == 0 {
            return bad("function family is empty");
        }
        if !(self.h_scale > 0.0 && self.h_scale.is_finite() && self.v_scale > 0.0 && self.v_scale.is_finite()) {
            return bad("h_scale and v_scale must be positive");
        }
        let t = &self.tolerances;
        let all = [
            t.identity,
            t.scalar,
            t.trace_formula,
            t.polynomial,
            t.imag_residue,
            t.atomic_mass,
            t.uniqueness,
            t.slope,
            t.remainder_sup,
            t.eta_l1,
            t.weight_shift,
        ];
        if all.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return bad("tolerances must be positive");
        }
        if self.ssf.h.is_some() != self.ssf.v.is_some() {
            return bad("ssf.h and ssf.v must be given together");
        }
        if self.ssf.grid < 2 {
            return bad("ssf.grid must be at least 2");
        }
        if self.ssf.order == Some(0) {
            return bad("ssf.order must be positive");
        }
        if self.approx.windows == 0 || self.approx.bumps == 0 || self.approx.order < 3 {
            return bad("approx needs windows >= 1, bumps >= 1 and order >= 3");
        }
        Ok(())
    }
}

pub fn load_matrix(src: &MatrixSource) -> Result<MatrixFile> {
    match src {
        MatrixSource::Inline(m) => Ok(m.clone()),
        MatrixSource::Path(p) => MatrixFile::read(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(c, ExperimentConfig::default());
    }

    #[test]
    fn rejects_bad_values() {
        for text in [
            r#"{"n": 4}"#,
            r#"{"dims": [17]}"#,
            r#"{"dims": []}"#,
            r#"{"tolerances": {"identity": 0}}"#,
            r#"{"unknown": 1}"#,
            r#"{"seed": "x"}"#,
            r#"{"parity": "sideways"}"#,
            r#"{"ssf": {"grid": 1}}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(text), Err(CliError::Config(_))), "{text}");
        }
    }

    #[test]
    fn inline_pair() {
        let c = ExperimentConfig::from_json(r#"{"ssf": {"h": {"dim": 1, "re": [[0]]}, "v": {"dim": 1, "re": [[1]]}, "order": 3}}"#)
            .unwrap();
        assert!(matches!(c.ssf.h, Some(MatrixSource::Inline(_))));
        assert_eq!(c.ssf.order, Some(3));
    }
}
