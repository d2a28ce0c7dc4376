//! Result rows shared by every check, with CSV and JSON emission.
//!
//! A row is either deterministic (estimate vs target within an absolute
//! tolerance) or stochastic (Monte Carlo estimate vs target). For stochastic
//! rows `slack` is an allowance for a known systematic offset such as
//! lattice bias; `z` is measured after subtracting it.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::MCEstimate;

pub const CSV_HEADER: [&str; 12] =
    ["quantity", "estimate_re", "estimate_im", "std_error", "target_re", "target_im", "z", "N", "s", "hbar", "samples", "seed"];

/// z-score at or above which a stochastic row fails.
pub const Z_FAIL: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub quantity: String,
    pub estimate: Complex64,
    pub std_error: Option<f64>,
    pub target: Complex64,
    /// Absolute tolerance (deterministic) or systematic allowance (stochastic).
    pub tolerance: f64,
    pub n_sites: Option<usize>,
    pub s: Option<f64>,
    pub hbar: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    StatisticalFailure,
    NumericalFailure,
}

impl ReportRow {
    pub fn deterministic(quantity: impl Into<String>, estimate: Complex64, target: Complex64, tolerance: f64) -> Self {
        Self {
            quantity: quantity.into(),
            estimate,
            std_error: None,
            target,
            tolerance,
            n_sites: None,
            s: None,
            hbar: None,
            samples: None,
            seed: None,
        }
    }

    pub fn real(quantity: impl Into<String>, estimate: f64, target: f64, tolerance: f64) -> Self {
        Self::deterministic(quantity, Complex64::new(estimate, 0.0), Complex64::new(target, 0.0), tolerance)
    }

    pub fn stochastic(quantity: impl Into<String>, est: &MCEstimate, target: Complex64, slack: f64) -> Self {
        Self {
            std_error: Some(est.std_error),
            samples: Some(est.n_samples),
            ..Self::deterministic(quantity, est.mean, target, slack.abs())
        }
    }

    pub fn lattice(mut self, n_sites: usize) -> Self {
        self.n_sites = Some(n_sites);
        self
    }

    pub fn heat(mut self, s: Option<f64>, hbar: Option<f64>) -> Self {
        self.s = s;
        self.hbar = hbar;
        self
    }

    pub fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn deviation(&self) -> f64 {
        (self.estimate - self.target).norm()
    }

    pub fn is_stochastic(&self) -> bool {
        self.std_error.is_some()
    }

    /// `max(0, |estimate − target| − slack) / std_error` for stochastic rows.
    pub fn z(&self) -> Option<f64> {
        let se = self.std_error?;
        let excess = (self.deviation() - self.tolerance).max(0.0);
        Some(if excess == 0.0 {
            0.0
        } else if se > 0.0 {
            excess / se
        } else {
            f64::INFINITY
        })
    }

    pub fn outcome(&self) -> Outcome {
        if !(self.estimate.re.is_finite() && self.estimate.im.is_finite()) {
            return Outcome::NumericalFailure;
        }
        match self.z() {
            Some(z) if z >= Z_FAIL => Outcome::StatisticalFailure,
            Some(_) => Outcome::Pass,
            None if self.deviation() <= self.tolerance => Outcome::Pass,
            None => Outcome::NumericalFailure,
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome() == Outcome::Pass
    }
}

/// A command's rows plus the parameter echo.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<ReportRow>,
    pub wall_time_s: Option<f64>,
}

#[derive(Serialize)]
struct FlatRow<'a> {
    quantity: &'a str,
    estimate_re: f64,
    estimate_im: f64,
    std_error: Option<f64>,
    target_re: f64,
    target_im: f64,
    z: Option<f64>,
    #[serde(rename = "N")]
    n: Option<usize>,
    s: Option<f64>,
    hbar: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
}

impl<'a> From<&'a ReportRow> for FlatRow<'a> {
    fn from(r: &'a ReportRow) -> Self {
        FlatRow {
            quantity: &r.quantity,
            estimate_re: r.estimate.re,
            estimate_im: r.estimate.im,
            std_error: r.std_error,
            target_re: r.target.re,
            target_im: r.target.im,
            z: r.z().map(|z| if z.is_finite() { z } else { f64::MAX }),
            n: r.n_sites,
            s: r.s,
            hbar: r.hbar,
            samples: r.samples,
            seed: r.seed,
        }
    }
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), ..Default::default() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: ReportRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    /// Worst outcome over all rows; numerical failures dominate.
    pub fn outcome(&self) -> Outcome {
        let outcomes: Vec<Outcome> = self.rows.iter().map(ReportRow::outcome).collect();
        if outcomes.contains(&Outcome::NumericalFailure) {
            Outcome::NumericalFailure
        } else if outcomes.contains(&Outcome::StatisticalFailure) {
            Outcome::StatisticalFailure
        } else {
            Outcome::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome() == Outcome::Pass
    }

    pub fn row(&self, quantity: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.quantity == quantity)
    }

    /// CSV with `#` comment lines for the command, parameters and wall time.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| Error::Serialization(e.to_string());
        writeln!(out, "# command = {}", self.command).map_err(io)?;
        for (k, v) in &self.params {
            writeln!(out, "# {k} = {v}").map_err(io)?;
        }
        if let Some(t) = self.wall_time_s {
            writeln!(out, "# wall_time_s = {t:.3}").map_err(io)?;
        }
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(CSV_HEADER).map_err(|e| Error::Serialization(e.to_string()))?;
        for r in &self.rows {
            w.serialize(FlatRow::from(r)).map_err(|e| Error::Serialization(e.to_string()))?;
        }
        w.flush().map_err(io)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let rows: Vec<FlatRow> = self.rows.iter().map(FlatRow::from).collect();
        serde_json::json!({
            "command": self.command,
            "params": self.params,
            "rows": rows,
            "wall_time_s": self.wall_time_s,
        })
    }
}
