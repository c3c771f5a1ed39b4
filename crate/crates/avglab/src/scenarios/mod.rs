//! Scenario runners that reproduce the verifiable response-scaling claims at
//! desk scale and emit machine-readable results.

use serde::{Deserialize, Serialize};

use crate::fit::Fit;

pub mod attraction;
pub mod averaging_gap;
pub mod burgers_scaling;
pub mod ibp;
pub mod nse2d;
pub mod toy_ode;

/// One declared threshold with the value it was checked against. Advisory
/// checks are reported but do not flip the scenario verdict (used where the
/// certified constants are known to be conservative).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub pass: bool,
    #[serde(default)]
    pub advisory: bool,
}

impl Check {
    pub fn range(name: &str, value: f64, lo: f64, hi: f64) -> Self {
        Check { name: name.into(), value, lo: Some(lo), hi: Some(hi), pass: value >= lo && value <= hi, advisory: false }
    }

    pub fn at_most(name: &str, value: f64, hi: f64) -> Self {
        Check { name: name.into(), value, lo: None, hi: Some(hi), pass: value <= hi, advisory: false }
    }

    pub fn at_least(name: &str, value: f64, lo: f64) -> Self {
        Check { name: name.into(), value, lo: Some(lo), hi: None, pass: value >= lo, advisory: false }
    }

    pub fn advisory(mut self) -> Self {
        self.advisory = true;
        self
    }
}

/// Result of one scenario run: the per-point metric table, any fitted
/// quantities, and every pass/fail threshold that was applied.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub seed: u64,
    pub inputs: serde_json::Value,
    pub columns: Vec<String>,
    pub points: Vec<Vec<f64>>,
    pub fit: Option<Fit>,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Extra named time-series tables (e.g. pair-distance decay).
    #[serde(default)]
    pub series: Vec<SeriesTable>,
    /// Representative trajectory (largest grid point), written as its own
    /// CSV by the dispatcher rather than embedded in the JSON.
    #[serde(skip)]
    pub trajectory: Option<avglab_core::TrajectoryRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl ScenarioResult {
    pub fn new(scenario: &str, seed: u64, inputs: serde_json::Value) -> Self {
        ScenarioResult {
            scenario: scenario.into(),
            seed,
            inputs,
            columns: Vec::new(),
            points: Vec::new(),
            fit: None,
            checks: Vec::new(),
            passed: true,
            series: Vec::new(),
            trajectory: None,
        }
    }

    pub fn push_check(&mut self, check: Check) {
        if !check.advisory && !check.pass {
            self.passed = false;
        }
        self.checks.push(check);
    }

    pub fn metric(&self, point: usize, column: &str) -> Option<f64> {
        let idx = self.columns.iter().position(|c| c == column)?;
        self.points.get(point).and_then(|row| row.get(idx)).copied()
    }

    pub fn column(&self, column: &str) -> Vec<f64> {
        match self.columns.iter().position(|c| c == column) {
            Some(idx) => self.points.iter().map(|row| row[idx]).collect(),
            None => Vec::new(),
        }
    }
}

/// Thin a trajectory record to at most `max_rows` samples for file output.
pub fn thin_record(
    rec: &avglab_core::TrajectoryRecord,
    max_rows: usize,
) -> avglab_core::TrajectoryRecord {
    let n = rec.len();
    if n <= max_rows {
        return rec.clone();
    }
    let stride = n.div_ceil(max_rows);
    let pick = |v: &Vec<f64>| -> Vec<f64> {
        let mut out: Vec<f64> = v.iter().step_by(stride).cloned().collect();
        if (n - 1) % stride != 0 {
            out.push(v[n - 1]);
        }
        out
    };
    avglab_core::TrajectoryRecord {
        times: pick(&rec.times),
        energy: pick(&rec.energy),
        enstrophy: pick(&rec.enstrophy),
        l2: pick(&rec.l2),
        grad_bound: pick(&rec.grad_bound),
        reality_defect: pick(&rec.reality_defect),
        envelope_max: pick(&rec.envelope_max),
        gap: rec.gap.as_ref().map(&pick),
        states: None,
    }
}

/// Ratio checks gap(alpha)/gap(2 alpha) for every doubling present in the grid.
pub fn doubling_ratios(alphas: &[f64], values: &[f64]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for (i, &a) in alphas.iter().enumerate() {
        if let Some(j) = alphas.iter().position(|&b| (b - 2.0 * a).abs() <= 1e-9 * a) {
            if values[j] > 0.0 {
                out.push((a, values[i] / values[j]));
            }
        }
    }
    out
}
