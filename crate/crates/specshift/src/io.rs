//! File formats: matrices, piecewise polynomials and CSV tables.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use specshift_core::functions::{Atom, PiecewisePolynomial};
use specshift_core::linalg::{HermitianOperator, Matrix};
use specshift_core::Complex64;

use crate::error::{CliError, Result};

/// `{"dim": d, "re": [[...]], "im": [[...]]}`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &Matrix) -> Self {
        let d = m.rows();
        let re = (0..d).map(|i| (0..d).map(|j| m[(i, j)].re).collect()).collect();
        let im = (0..d).map(|i| (0..d).map(|j| m[(i, j)].im).collect()).collect();
        Self { dim: d, re, im: Some(im) }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        let d = self.dim;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == d && rows.iter().all(|r| r.len() == d);
        if d == 0 || !shape_ok(&self.re) || !self.im.as_ref().map_or(true, shape_ok) {
            return Err(CliError::Config(format!("matrix must be {d} x {d} with d >= 1")));
        }
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
                data.push(Complex64::new(self.re[i][j], im));
            }
        }
        Ok(Matrix::from_row_major(d, d, data)?)
    }

    pub fn to_hermitian(&self) -> Result<HermitianOperator> {
        Ok(HermitianOperator::new(self.to_matrix()?)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomFile {
    pub x: f64,
    pub mass: f64,
}

/// `{breakpoints, coeffs, atoms}`; coefficients are real, per interval, in powers of `x - midpoint`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseFile {
    pub breakpoints: Vec<f64>,
    pub coeffs: Vec<Vec<f64>>,
    pub atoms: Vec<AtomFile>,
}

impl PiecewiseFile {
    /// Real parts of `p`; the densities written here are real.
    pub fn from_piecewise(p: &PiecewisePolynomial) -> Self {
        Self {
            breakpoints: p.breakpoints().to_vec(),
            coeffs: p.coeffs().iter().map(|c| c.iter().map(|z| z.re).collect()).collect(),
            atoms: p.atoms().iter().map(|a| AtomFile { x: a.x, mass: a.mass.re }).collect(),
        }
    }

    pub fn to_piecewise(&self) -> Result<PiecewisePolynomial> {
        let coeffs = self.coeffs.iter().map(|c| c.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        let atoms = self.atoms.iter().map(|a| Atom { x: a.x, mass: Complex64::new(a.mass, 0.0) }).collect();
        Ok(PiecewisePolynomial::new(self.breakpoints.clone(), coeffs, atoms)?)
    }
}

/// `x,value` rows on `points` equally spaced samples of `[lo, hi]`.
pub fn sample_csv(p: &PiecewisePolynomial, lo: f64, hi: f64, points: usize) -> String {
    let mut out = String::from("x,value\n");
    let grid: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![lo],
        k => (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect(),
    };
    for x in grid {
        let _ = writeln!(out, "{},{}", x, p.eval(x).re);
    }
    out
}

/// Comma-separated table with a header row; `None` cells are left empty.
pub fn csv_table(header: &[&str], rows: &[Vec<Option<f64>>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| c.map_or(String::new(), |x| x.to_string())).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
