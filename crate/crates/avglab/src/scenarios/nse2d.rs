//! 2D Navier-Stokes response scaling along a nonresonant mean direction,
//! with the enstrophy inequality monitored and the gradient smallness
//! criterion evaluated on the trailing window.

use avglab_core::integrate::{
    enstrophy_inequality_max_violation, integrate, DtSpec, IntegratorConfig, TrajectoryRecord,
    OSCILLATION_RESOLUTION,
};
use avglab_core::{Frame, SpectralState};
use rayon::prelude::*;

use super::{Check, ScenarioResult};
use crate::config::Validated;
use crate::fit::loglog_fit;

pub const TRAILING_FRACTION: f64 = 0.25;
pub const ENSTROPHY_INEQ_TOL: f64 = 1e-3;

pub struct NsePoint {
    pub alpha: f64,
    pub trailing_sup: f64,
    pub trailing_grad: f64,
    pub enstrophy_ineq_violation: f64,
    pub record: TrajectoryRecord,
}

pub fn run_point(v: &Validated, alpha: f64) -> Result<NsePoint, String> {
    let params = v.params_at(alpha);
    // largest step that still resolves the forcing phase and keeps the
    // discrete enstrophy monitor sharp
    let j_max = v.forcing.max_mode_norm();
    let cap = crate::scenarios::burgers_scaling::monitor_dt_cap(v.forcing.enstrophy_sup());
    let dt = match v.integrator.dt {
        DtSpec::Fixed(x) => DtSpec::Fixed(x),
        DtSpec::Auto => {
            let omega = params.alpha_norm() * j_max;
            if omega > 0.0 {
                DtSpec::Fixed((OSCILLATION_RESOLUTION / omega).min(cap))
            } else {
                DtSpec::Auto
            }
        }
    };
    let cfg = IntegratorConfig { dt, sample_every: 0.0, ..v.integrator };
    let rest = SpectralState::zeros(params.mode_set());
    let out = integrate(&rest, 0.0, &cfg, &params, &v.forcing, Frame::Moving)
        .map_err(|e| format!("alpha = {alpha}: {e}"))?;
    let trailing_sup =
        TrajectoryRecord::trailing_sup(&out.record.l2, &out.record.times, TRAILING_FRACTION);
    let trailing_grad = TrajectoryRecord::trailing_sup(
        &out.record.grad_bound,
        &out.record.times,
        TRAILING_FRACTION,
    );
    let violation =
        enstrophy_inequality_max_violation(&out.record, &v.forcing, v.nu, ENSTROPHY_INEQ_TOL);
    Ok(NsePoint {
        alpha,
        trailing_sup,
        trailing_grad,
        enstrophy_ineq_violation: violation,
        record: out.record,
    })
}

/// Sweep the mean speed along the (normalized) nonresonant direction. The
/// trailing response must scale like 1/|alpha| and at the largest speed the
/// certified gradient bound must drop below nu, which is the global
/// attraction criterion.
pub fn run(v: &Validated) -> Result<ScenarioResult, String> {
    let mut result = ScenarioResult::new(
        "nse2d-scaling",
        v.seed,
        serde_json::json!({
            "nu": v.nu, "m": v.m, "alphas": v.alphas, "alpha_dir": v.alpha_dir,
            "t_end": v.integrator.t_end, "trailing_fraction": TRAILING_FRACTION,
            "enstrophy_ineq_tol": ENSTROPHY_INEQ_TOL,
        }),
    );
    result.columns = vec![
        "alpha".into(),
        "trailing_sup".into(),
        "trailing_gradbound".into(),
        "enstrophy_ineq_violation".into(),
    ];
    let points: Result<Vec<NsePoint>, String> =
        v.alphas.par_iter().map(|&alpha| run_point(v, alpha)).collect();
    let mut points = points?;
    if let Some(p) = points.iter_mut().max_by(|a, b| a.alpha.total_cmp(&b.alpha)) {
        result.trajectory = Some(super::thin_record(&p.record, 5000));
    }
    for p in &points {
        result.points.push(vec![
            p.alpha,
            p.trailing_sup,
            p.trailing_grad,
            p.enstrophy_ineq_violation,
        ]);
        result.push_check(Check::at_most(
            &format!("enstrophy_inequality(alpha={})", p.alpha),
            p.enstrophy_ineq_violation,
            0.0,
        ));
    }
    let alphas: Vec<f64> = points.iter().map(|p| p.alpha).collect();
    let sups: Vec<f64> = points.iter().map(|p| p.trailing_sup).collect();
    if alphas.len() >= 4 {
        let fit = loglog_fit(&alphas, &sups)?;
        result.push_check(Check::range("loglog_slope", fit.slope, -1.3, -0.7));
        result.fit = Some(fit);
    }
    if let Some(largest) = points.iter().max_by(|a, b| a.alpha.total_cmp(&b.alpha)) {
        result.push_check(Check::at_most(
            "gradient_criterion_at_largest_alpha",
            largest.trailing_grad,
            v.nu,
        ));
    }
    Ok(result)
}
