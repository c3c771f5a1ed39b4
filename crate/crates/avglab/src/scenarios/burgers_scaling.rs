//! Response amplitude of the moving-frame Burgers system versus the mean
//! velocity: trailing sup ||a|| should decay like 1/|alpha|.

use avglab_core::bounds::burgers_e1;
use avglab_core::integrate::{
    auto_dt, energy_inequality_max_violation, integrate, DtSpec, IntegratorConfig,
    TrajectoryRecord,
};
use avglab_core::{Frame, SpectralState};
use rayon::prelude::*;

use super::{doubling_ratios, Check, ScenarioResult};
use crate::config::Validated;
use crate::fit::loglog_fit;

pub const TRAILING_FRACTION: f64 = 0.25;
pub const ENERGY_INEQ_TOL: f64 = 1e-3;

/// The discrete energy-inequality monitor compares a forward difference over
/// one sample spacing against the continuous bound; from rest the first
/// differences grow like (forcing energy) * dt, so the step must stay below
/// tol-scale / forcing energy for the monitor to resolve the inequality.
pub fn monitor_dt_cap(forcing_sup: f64) -> f64 {
    0.4 * ENERGY_INEQ_TOL / forcing_sup.max(1e-12)
}

pub struct ScalingPoint {
    pub alpha: f64,
    pub trailing_sup: f64,
    pub energy_ineq_violation: f64,
    pub sqrt_e1_bound: f64,
    pub record: TrajectoryRecord,
}

pub fn run_point(v: &Validated, alpha: f64, c_hat: f64) -> Result<ScalingPoint, String> {
    let params = v.params_at(alpha);
    let dt = match v.integrator.dt {
        DtSpec::Fixed(x) => DtSpec::Fixed(x),
        DtSpec::Auto => DtSpec::Fixed(
            auto_dt(&params, &v.forcing, v.integrator.method)
                .min(monitor_dt_cap(v.forcing.energy_sup())),
        ),
    };
    let cfg = IntegratorConfig { dt, ..v.integrator };
    let rest = SpectralState::zeros(params.mode_set());
    let out = integrate(&rest, 0.0, &cfg, &params, &v.forcing, Frame::Moving)
        .map_err(|e| format!("alpha = {alpha}: {e}"))?;
    let trailing_sup =
        TrajectoryRecord::trailing_sup(&out.record.l2, &out.record.times, TRAILING_FRACTION);
    let violation =
        energy_inequality_max_violation(&out.record, &v.forcing, v.nu, ENERGY_INEQ_TOL);
    let sqrt_e1 = burgers_e1(v.forcing.a_v(), v.forcing.b_v(), v.forcing.s_v(), v.nu, alpha, c_hat)
        .map_err(|e| format!("alpha = {alpha}: {e}"))?;
    Ok(ScalingPoint {
        alpha,
        trailing_sup,
        energy_ineq_violation: violation,
        sqrt_e1_bound: 5.0 * sqrt_e1 / 3.0,
        record: out.record,
    })
}

/// Sweep over mean velocities from rest past the transient; fit the log-log
/// slope of the trailing sup and monitor the discrete energy inequality along
/// every run. The certified 5 sqrt(E_1)/3 amplitude bound is compared as an
/// advisory check (the constants behind it are deliberately conservative).
pub fn run(v: &Validated) -> Result<ScenarioResult, String> {
    let (c_hat, e_tilde) = super::averaging_gap::default_c_hat(&v.forcing, v.nu);
    let mut result = ScenarioResult::new(
        "burgers-scaling",
        v.seed,
        serde_json::json!({
            "nu": v.nu, "m": v.m, "alphas": v.alphas, "t_end": v.integrator.t_end,
            "trailing_fraction": TRAILING_FRACTION, "energy_ineq_tol": ENERGY_INEQ_TOL,
            "c_hat": c_hat, "e_tilde": e_tilde,
        }),
    );
    result.columns = vec![
        "alpha".into(),
        "trailing_sup".into(),
        "energy_ineq_violation".into(),
        "amplitude_bound".into(),
    ];
    let points: Result<Vec<ScalingPoint>, String> =
        v.alphas.par_iter().map(|&alpha| run_point(v, alpha, c_hat)).collect();
    let mut points = points?;
    if let Some(p) = points.iter_mut().max_by(|a, b| a.alpha.total_cmp(&b.alpha)) {
        result.trajectory = Some(super::thin_record(&p.record, 5000));
    }
    for p in &points {
        result.points.push(vec![p.alpha, p.trailing_sup, p.energy_ineq_violation, p.sqrt_e1_bound]);
        result.push_check(Check::at_most(
            &format!("energy_inequality(alpha={})", p.alpha),
            p.energy_ineq_violation,
            0.0,
        ));
        result.push_check(
            Check::at_most(
                &format!("below_certified_amplitude(alpha={})", p.alpha),
                p.trailing_sup,
                p.sqrt_e1_bound,
            )
            .advisory(),
        );
    }
    let alphas: Vec<f64> = points.iter().map(|p| p.alpha).collect();
    let sups: Vec<f64> = points.iter().map(|p| p.trailing_sup).collect();
    if alphas.len() >= 4 {
        let fit = loglog_fit(&alphas, &sups)?;
        result.push_check(Check::range("loglog_slope", fit.slope, -1.2, -0.8));
        result.fit = Some(fit);
    }
    for (alpha, ratio) in doubling_ratios(&alphas, &sups) {
        result.push_check(
            Check::range(&format!("sup_ratio({alpha}/{})", 2.0 * alpha), ratio, 1.5, 2.5)
                .advisory(),
        );
    }
    Ok(result)
}
