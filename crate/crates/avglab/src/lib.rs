//! Scenario drivers, run configuration, file formats and bound reports for
//! the spectral averaging toolkit. The numerical kernels live in
//! `avglab-core`; this crate owns everything that touches files, JSON, or a
//! thread pool.

// Precondition checks use `!(x > 0.0)`-style comparisons to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds_report;
pub mod config;
pub mod fit;
pub mod io;
pub mod plot;
pub mod scenarios;

use std::path::{Path, PathBuf};

use config::{Scenario, Validated};
use scenarios::ScenarioResult;

/// Run the configured scenario and return its result.
pub fn run_scenario(v: &Validated) -> Result<ScenarioResult, String> {
    match v.scenario {
        Scenario::ToyOde => Ok(scenarios::toy_ode::run(v.nu, &v.alphas, v.seed)),
        Scenario::AveragingGap => scenarios::averaging_gap::run(v),
        Scenario::BurgersScaling => scenarios::burgers_scaling::run(v),
        Scenario::AttractionRate => scenarios::attraction::run(v),
        Scenario::Nse2dScaling => scenarios::nse2d::run(v),
        Scenario::IbpIdentity => {
            let omegas = if v.alphas.is_empty() { vec![25.0, 50.0, 100.0] } else { v.alphas.clone() };
            Ok(scenarios::ibp::run(v.nu, 0.0, &omegas, 0.0, v.h0, v.seed))
        }
    }
}

/// Write the result JSON, the per-point CSV, and any series tables into the
/// output directory; returns the JSON path.
pub fn write_result(result: &ScenarioResult, out_dir: &Path) -> std::io::Result<PathBuf> {
    let json_path = out_dir.join(format!("{}.json", result.scenario));
    io::write_json(&json_path, result)?;
    let csv_path = out_dir.join(format!("{}.csv", result.scenario));
    io::write_csv(&csv_path, &result.columns, &result.points)?;
    for s in &result.series {
        let series_path = out_dir.join(format!("{}_{}.csv", result.scenario, s.name));
        io::write_csv(&series_path, &s.columns, &s.rows)?;
    }
    if let Some(rec) = &result.trajectory {
        let path = out_dir.join(format!("{}_trajectory.csv", result.scenario));
        std::fs::write(path, io::trajectory_csv(rec))?;
    }
    Ok(json_path)
}

/// Exit-code contract: 0 pass, 1 threshold failure, 2 configuration or
/// runtime error. All numbers live in the emitted files.
pub fn dispatch(v: &Validated) -> i32 {
    match run_scenario(v) {
        Ok(result) => {
            let out_dir = PathBuf::from(&v.out_dir);
            if let Err(e) = write_result(&result, &out_dir) {
                eprintln!("error: cannot write outputs: {e}");
                return 2;
            }
            let failed: Vec<&scenarios::Check> =
                result.checks.iter().filter(|c| !c.pass && !c.advisory).collect();
            println!(
                "{}: {} ({} checks, {} failed)",
                result.scenario,
                if result.passed { "PASS" } else { "FAIL" },
                result.checks.len(),
                failed.len()
            );
            for c in failed {
                println!("  failed: {} = {:.6e}", c.name, c.value);
            }
            if result.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
