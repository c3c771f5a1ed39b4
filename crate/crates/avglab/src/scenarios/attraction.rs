//! Exponential attraction: pairs of trajectories started from distinct
//! initial conditions must approach each other at a negative fitted rate.

use avglab_core::bounds::{find_negative_lognorm_radius, LognormScan};
use avglab_core::integrate::{integrate_two, IntegratorConfig};
use avglab_core::model::leray_project;
use avglab_core::rng::Rng64;
use avglab_core::state::EnvelopeBound;
use avglab_core::{Frame, Model, SimParams, SpectralState, C64};
use rayon::prelude::*;

use super::{Check, ScenarioResult, SeriesTable};
use crate::config::Validated;
use crate::fit::{linear_fit, Fit};

/// Random reality-respecting state with the given energy, modes damped
/// like 1/(1 + |k|^2).
pub fn random_state(params: &SimParams, energy: f64, seed: u64) -> SpectralState {
    let set = params.mode_set();
    let nc = set.ncomp();
    let mut rng = Rng64::new(seed);
    let mut st = SpectralState::zeros(set.clone());
    for i in set.canonical_indices() {
        let k = set.mode(i);
        let damp = 1.0 / (1.0 + k.norm_sq() as f64);
        let mut v: Vec<C64> =
            (0..nc).map(|_| C64::new(rng.normal(), rng.normal()) * damp).collect();
        if params.model == Model::Nse2d {
            v = leray_project(&k, &v).unwrap();
        }
        st.set_pair(&k, &v);
    }
    let norm = st.l2_norm().max(1e-300);
    let scale = energy.sqrt() / norm;
    for z in st.amplitudes_mut() {
        *z *= scale;
    }
    st
}

pub struct PairFit {
    pub fit: Fit,
    pub times: Vec<f64>,
    pub gap: Vec<f64>,
}

/// Distance decay of one trajectory pair, fitted on log distance past the
/// transient cut (first half of the run). Points below the floating-point
/// floor are excluded from the fit; identical trajectories yield `None`.
pub fn run_pair(
    v: &Validated,
    alpha: f64,
    ic_energy: f64,
    seed: u64,
) -> Result<Option<PairFit>, String> {
    let params = v.params_at(alpha);
    let a0 = random_state(&params, ic_energy, seed);
    let b0 = random_state(&params, ic_energy, seed ^ 0x5bd1e995);
    run_pair_states(v, alpha, &a0, &b0)
}

/// The same fit, from explicit initial states.
pub fn run_pair_states(
    v: &Validated,
    alpha: f64,
    a0: &SpectralState,
    b0: &SpectralState,
) -> Result<Option<PairFit>, String> {
    let params = v.params_at(alpha);
    let cfg = IntegratorConfig { sample_every: v.integrator.t_end / 400.0, ..v.integrator };
    let pair = integrate_two(
        a0, b0, 0.0, cfg.t_end, &cfg, &params, &v.forcing, &v.forcing, Frame::Moving,
    )
    .map_err(|e| e.to_string())?;
    let cut = 0.5 * cfg.t_end;
    let mut ts = Vec::new();
    let mut ys = Vec::new();
    for (&t, &g) in pair.times.iter().zip(pair.gap.iter()) {
        if t >= cut && g > 1e-14 {
            ts.push(t);
            ys.push(g.ln());
        }
    }
    if ys.is_empty() {
        // identical initial data: nothing to fit
        return Ok(None);
    }
    let fit = linear_fit(&ts, &ys)?;
    Ok(Some(PairFit { fit, times: pair.times, gap: pair.gap }))
}

/// Several random pairs at the largest grid velocity: every fitted rate must
/// be negative with a clean exponential signature (R^2 >= 0.95). The sampled
/// logarithmic-norm radius is reported next to the observed rates.
pub fn run(v: &Validated) -> Result<ScenarioResult, String> {
    let alpha = v.alphas.iter().cloned().fold(f64::NAN, f64::max);
    if !alpha.is_finite() {
        return Err("attraction scenario needs a mean velocity".into());
    }
    let ic_energy = 0.05;
    let mut result = ScenarioResult::new(
        "attraction-rate",
        v.seed,
        serde_json::json!({
            "nu": v.nu, "m": v.m, "alpha": alpha, "pairs": v.ic_pairs,
            "ic_energy": ic_energy, "t_end": v.integrator.t_end,
            "transient_cut": 0.5, "r2_threshold": 0.95,
        }),
    );
    result.columns = vec!["pair".into(), "rate".into(), "r2".into(), "initial_gap".into()];
    let fits: Result<Vec<Option<PairFit>>, String> = (0..v.ic_pairs)
        .into_par_iter()
        .map(|i| run_pair(v, alpha, ic_energy, v.seed.wrapping_add(1 + i as u64)))
        .collect();
    let fits = fits?;
    let mut series = SeriesTable {
        name: "pair_distance".into(),
        columns: vec!["t".into()],
        rows: Vec::new(),
    };
    for (i, pf) in fits.iter().enumerate() {
        let Some(pf) = pf else { continue };
        result.points.push(vec![i as f64, pf.fit.slope, pf.fit.r2, pf.gap[0]]);
        result.push_check(Check::at_most(&format!("rate(pair={i})"), pf.fit.slope, 0.0));
        result.push_check(Check::at_least(&format!("r2(pair={i})"), pf.fit.r2, 0.95));
        series.columns.push(format!("gap{i}"));
        if series.rows.is_empty() {
            for (&t, &g) in pf.times.iter().zip(pf.gap.iter()) {
                series.rows.push(vec![t, g]);
            }
        } else {
            for (row, &g) in series.rows.iter_mut().zip(pf.gap.iter()) {
                row.push(g);
            }
        }
    }
    // sampled contraction radius, reported alongside the observed rates
    let params = v.params_at(alpha);
    let scan = LognormScan { samples: 40, seed: v.seed, ..Default::default() };
    if let Ok(est) =
        find_negative_lognorm_radius(&params, EnvelopeBound::new(1.0, 4.0), &scan)
    {
        result.push_check(
            Check::at_most("sampled_mu_on_contraction_set", est.mu, 0.0).advisory(),
        );
    }
    result.series.push(series);
    Ok(result)
}
