//! Experiment pipelines on top of the solver and the energy blueprints.
//!
//! Each experiment reads a flat [`Config`], runs its ladder of solves in
//! parallel, and returns a [`Report`] with plot-ready CSV tables, scalar
//! metrics and a PASS/FAIL [`Verdict`]. Verdict thresholds are config keys
//! (`threshold.*`) whose defaults are the documented acceptance levels.

pub mod config;
pub mod experiments;
pub mod fit;
pub mod manifest;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use config::{contrast_field, random_field, Config, KNOWN_KEYS};
pub use experiments::{
    exp_bona_smith, exp_conservation, exp_energy_drift, exp_mu_cauchy, exp_scaling, rough_field, run_solve, Experiment,
};
pub use fit::{fit_line, loglog_slope, LineFit};
pub use manifest::{sha256_hex, RunManifest};

use crate::energy::EnergyError;
use crate::spectral::SpectralError;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    /// Process exit code: 0 for PASS, 1 for FAIL.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// A CSV table: header plus rows of numbers (empty cells allowed).
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.to_string(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_values(&mut self, row: &[f64]) {
        self.push(row.iter().copied().map(Some).collect());
    }

    /// Column by header name.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(|v| v.to_string()).unwrap_or_default()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub experiment: String,
    pub verdict: Verdict,
    pub metrics: serde_json::Value,
    /// The first table is the primary output.
    pub tables: Vec<Table>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "experiment": self.experiment,
            "verdict": self.verdict,
            "metrics": self.metrics,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_leaves_missing_cells_empty() {
        let mut t = Table::new("x", &["t", "Es"]);
        t.push(vec![Some(0.5), None]);
        t.push_values(&[1.0, 2.5]);
        assert_eq!(t.to_csv(), "t,Es\n0.5,\n1,2.5\n");
        assert_eq!(t.column("Es").unwrap(), vec![None, Some(2.5)]);
    }

    #[test]
    fn verdict_serializes_uppercase() {
        assert_eq!(serde_json::to_string(&Verdict::Pass).unwrap(), "\"PASS\"");
        assert_eq!(Verdict::Fail.exit_code(), 1);
    }
}
