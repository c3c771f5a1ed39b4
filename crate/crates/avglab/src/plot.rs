//! Gnuplot script emission for scenario results.

use std::path::{Path, PathBuf};

use crate::scenarios::ScenarioResult;

fn column_index(columns: &[String], name: &str) -> Result<usize, String> {
    columns
        .iter()
        .position(|c| c == name)
        .map(|i| i + 1) // gnuplot columns are 1-based
        .ok_or_else(|| format!("column {name} not present in the CSV header"))
}

/// Write a gnuplot script next to a scenario result JSON. The script only
/// references columns present in the emitted CSV. Errors on empty results.
pub fn emit_plot_script(result_path: &Path) -> Result<PathBuf, String> {
    let text = std::fs::read_to_string(result_path)
        .map_err(|e| format!("cannot read {}: {e}", result_path.display()))?;
    let result: ScenarioResult =
        serde_json::from_str(&text).map_err(|e| format!("bad result JSON: {e}"))?;
    if result.points.is_empty() {
        return Err("result has no points to plot".into());
    }
    let stem = result_path.with_extension("");
    let csv = stem
        .file_name()
        .map(|s| format!("{}.csv", s.to_string_lossy()))
        .ok_or("result path has no file name")?;
    let mut script = String::new();
    script.push_str(&format!("# plot for scenario {}\n", result.scenario));
    script.push_str("set datafile separator ','\n");
    script.push_str("set key left bottom\n");
    let cols = &result.columns;
    match result.scenario.as_str() {
        "toy-ode" => {
            let x = column_index(cols, "alpha")?;
            let y = column_index(cols, "trailing_mean_abs")?;
            let z = column_index(cols, "exact_abs")?;
            script.push_str("set logscale xy\nset xlabel 'alpha'\nset ylabel '|z|'\n");
            script.push_str(&format!(
                "plot '{csv}' using {x}:{y} with points title 'simulated', \\\n     '{csv}' using {x}:{z} with lines title 'exact'\n"
            ));
        }
        "burgers-scaling" | "nse2d-scaling" => {
            let x = column_index(cols, "alpha")?;
            let y = column_index(cols, "trailing_sup")?;
            script.push_str("set logscale xy\nset xlabel 'alpha'\nset ylabel 'trailing sup'\n");
            script.push_str(&format!(
                "plot '{csv}' using {x}:{y} with linespoints title 'response amplitude'\n"
            ));
        }
        "averaging-gap" => {
            let x = column_index(cols, "alpha")?;
            let y = column_index(cols, "sup_gap")?;
            let z = column_index(cols, "delta")?;
            script.push_str("set logscale xy\nset xlabel 'alpha'\nset ylabel 'gap'\n");
            script.push_str(&format!(
                "plot '{csv}' using {x}:{y} with linespoints title 'measured gap', \\\n     '{csv}' using {x}:{z} with lines title 'certified bound'\n"
            ));
        }
        "attraction-rate" => {
            let series = result
                .series
                .iter()
                .find(|s| s.name == "pair_distance")
                .ok_or("attraction result carries no pair_distance series")?;
            let series_csv = format!(
                "{}_pair_distance.csv",
                stem.file_name().unwrap().to_string_lossy()
            );
            script.push_str("set logscale y\nset xlabel 't'\nset ylabel '||x - y||'\n");
            let mut plots = Vec::new();
            for (i, c) in series.columns.iter().enumerate().skip(1) {
                plots.push(format!(
                    "'{series_csv}' using 1:{} with lines title '{c}'",
                    i + 1
                ));
            }
            script.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
        }
        "ibp-identity" => {
            let x = column_index(cols, "omega")?;
            let y = column_index(cols, "diff")?;
            script.push_str("set logscale xy\nset xlabel 'omega'\nset ylabel 'defect'\n");
            script.push_str(&format!(
                "plot '{csv}' using {x}:{y} with linespoints title 'quadrature vs ibp'\n"
            ));
        }
        other => return Err(format!("no plot layout for scenario {other}")),
    }
    let out = result_path.with_extension("gp");
    std::fs::write(&out, script).map_err(|e| format!("cannot write script: {e}"))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{Check, ScenarioResult};

    fn write_result(dir: &Path, result: &ScenarioResult) -> PathBuf {
        let path = dir.join(format!("{}.json", result.scenario));
        crate::io::write_json(&path, result).unwrap();
        path
    }

    #[test]
    fn scaling_script_references_existing_columns_with_log_axes() {
        let dir = std::env::temp_dir().join("avglab_plot_test");
        std::fs::create_dir_all(&dir).unwrap();
        let mut r = ScenarioResult::new("burgers-scaling", 0, serde_json::json!({}));
        r.columns =
            vec!["alpha".into(), "trailing_sup".into(), "energy_ineq_violation".into(), "amplitude_bound".into()];
        r.points.push(vec![16.0, 0.1, -1.0, 1.0]);
        r.push_check(Check::range("loglog_slope", -1.0, -1.2, -0.8));
        let path = write_result(&dir, &r);
        let script_path = emit_plot_script(&path).unwrap();
        let script = std::fs::read_to_string(script_path).unwrap();
        assert!(script.contains("set logscale xy"));
        assert!(script.contains("using 1:2"));
        // only existing columns appear
        assert!(!script.contains("using 9"));
    }

    #[test]
    fn empty_result_is_an_error() {
        let dir = std::env::temp_dir().join("avglab_plot_test_empty");
        std::fs::create_dir_all(&dir).unwrap();
        let r = ScenarioResult::new("burgers-scaling", 0, serde_json::json!({}));
        let path = write_result(&dir, &r);
        assert!(emit_plot_script(&path).is_err());
    }
}
