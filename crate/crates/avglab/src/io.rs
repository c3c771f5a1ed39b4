//! File formats: CSV time series and point tables, the line-oriented state
//! format, and JSON reports.

use std::fs;
use std::path::Path;

use avglab_core::bounds::BoundsReport;
use avglab_core::modes::{ModeIndex, ModeSet};
use avglab_core::{SpectralState, TrajectoryRecord, C64};

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text)
}

pub fn write_csv(path: &Path, columns: &[String], rows: &[Vec<f64>]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut out = String::new();
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)
}

/// Trajectory CSV: `t,energy,enstrophy,l2norm,gradbound,reality_defect[,gap]`.
pub fn trajectory_csv(record: &TrajectoryRecord) -> String {
    let mut out = String::new();
    let has_gap = record.gap.is_some();
    out.push_str("t,energy,enstrophy,l2norm,gradbound,reality_defect");
    if has_gap {
        out.push_str(",gap");
    }
    out.push('\n');
    for i in 0..record.len() {
        out.push_str(&format!(
            "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            record.times[i],
            record.energy[i],
            record.enstrophy[i],
            record.l2[i],
            record.grad_bound[i],
            record.reality_defect[i],
        ));
        if let Some(gap) = &record.gap {
            out.push_str(&format!(",{:.17e}", gap[i]));
        }
        out.push('\n');
    }
    out
}

/// Serialize a state to the line-oriented text format: a header row
/// `d m n mean...` followed by one `k_components... re im [re im ...]` row
/// per mode.
pub fn state_to_text(state: &SpectralState) -> String {
    let set = state.mode_set();
    let d = set.dim();
    let nc = set.ncomp();
    let mut out = format!("{} {} {}", d, set.cutoff(), nc);
    for c in 0..nc {
        out.push_str(&format!(" {:.17e}", state.mean()[c]));
    }
    out.push('\n');
    for (i, k) in set.modes().iter().enumerate() {
        let mut line = String::new();
        for c in 0..d {
            line.push_str(&format!("{} ", k.comp(c)));
        }
        for c in 0..nc {
            let z = state.amplitudes()[i * nc + c];
            line.push_str(&format!("{:.17e} {:.17e} ", z.re, z.im));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Parse the line-oriented state format produced by `state_to_text`.
pub fn state_from_text(text: &str) -> Result<SpectralState, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or("empty state file")?;
    let heads: Vec<f64> = header
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| format!("bad header token {t}: {e}")))
        .collect::<Result<_, _>>()?;
    if heads.len() < 3 {
        return Err("header needs at least d, m, n".into());
    }
    let d = heads[0] as usize;
    let m = heads[1] as u32;
    let nc = heads[2] as usize;
    if heads.len() != 3 + nc {
        return Err(format!("header must carry {nc} mean components"));
    }
    let mut mean = [0.0; 3];
    for c in 0..nc {
        mean[c] = heads[3 + c];
    }
    let set = std::sync::Arc::new(ModeSet::new(d, m, nc));
    let mut state = SpectralState::zeros(set.clone());
    state.set_mean(mean);
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != d + 2 * nc {
            return Err(format!("mode row has {} tokens, expected {}", toks.len(), d + 2 * nc));
        }
        let mut comps = [0i32; 3];
        for c in 0..d {
            comps[c] = toks[c].parse::<i32>().map_err(|e| format!("bad index: {e}"))?;
        }
        let k = ModeIndex::new(comps);
        if set.index_of(&k).is_none() {
            return Err(format!("mode {comps:?} outside the cutoff"));
        }
        let mut amp = Vec::with_capacity(nc);
        for c in 0..nc {
            let re: f64 = toks[d + 2 * c].parse().map_err(|e| format!("bad value: {e}"))?;
            let im: f64 = toks[d + 2 * c + 1].parse().map_err(|e| format!("bad value: {e}"))?;
            amp.push(C64::new(re, im));
        }
        state.set_amp(&k, &amp);
    }
    Ok(state)
}

/// JSON shape of a bounds report: a list of {name, value, origin, inputs}.
#[derive(serde::Serialize, serde::Deserialize)]
pub struct BoundsReportJson {
    pub entries: Vec<BoundEntryJson>,
}

#[derive(serde::Serialize, serde::Deserialize)]
pub struct BoundEntryJson {
    pub name: String,
    pub value: f64,
    pub origin: String,
    pub inputs: std::collections::BTreeMap<String, f64>,
}

impl From<&BoundsReport> for BoundsReportJson {
    fn from(rep: &BoundsReport) -> Self {
        BoundsReportJson {
            entries: rep
                .entries
                .iter()
                .map(|e| BoundEntryJson {
                    name: e.name.clone(),
                    value: e.value,
                    origin: e.origin.clone(),
                    inputs: e.inputs.iter().cloned().collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use avglab_core::modes::ModeIndex;
    use std::sync::Arc;

    #[test]
    fn state_text_round_trip() {
        let set = Arc::new(ModeSet::new(2, 3, 2));
        let mut st = SpectralState::zeros(set.clone());
        st.set_mean([1.5, -0.25, 0.0]);
        st.set_pair(&ModeIndex::new_2d(1, 2), &[C64::new(0.1, -0.2), C64::new(0.3, 0.4)]);
        st.set_pair(&ModeIndex::new_2d(3, 0), &[C64::new(-0.7, 0.0), C64::new(0.0, 0.05)]);
        let text = state_to_text(&st);
        let back = state_from_text(&text).unwrap();
        assert_eq!(back.dim(), 2);
        assert_eq!(back.mean(), st.mean());
        assert!(back.distance(&st) < 1e-15);
    }

    #[test]
    fn state_text_rejects_garbage() {
        assert!(state_from_text("").is_err());
        assert!(state_from_text("1 2 1 0\n9 0.0 0.0").is_err()); // |k| > m
        assert!(state_from_text("1 2 1 0\n1 0.0").is_err()); // short row
    }

    #[test]
    fn trajectory_csv_has_contract_columns() {
        let mut rec = TrajectoryRecord::default();
        rec.times = vec![0.0, 0.5];
        rec.energy = vec![1.0, 0.5];
        rec.enstrophy = vec![2.0, 1.0];
        rec.l2 = vec![1.0, 0.7];
        rec.grad_bound = vec![3.0, 2.0];
        rec.reality_defect = vec![0.0, 0.0];
        rec.envelope_max = vec![0.0, 0.0];
        let csv = trajectory_csv(&rec);
        assert!(csv.starts_with("t,energy,enstrophy,l2norm,gradbound,reality_defect\n"));
        assert_eq!(csv.lines().count(), 3);
        rec.gap = Some(vec![0.0, 0.1]);
        let csv = trajectory_csv(&rec);
        assert!(csv.starts_with("t,energy,enstrophy,l2norm,gradbound,reality_defect,gap\n"));
    }
}
