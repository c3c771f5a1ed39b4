//! The dissipative test oscillator z' = -nu z + e^{i alpha t}, whose
//! attracting solution e^{i alpha t}/(nu + i alpha) is known exactly.

use avglab_core::bounds::toy_ode_attractor;
use avglab_core::integrate::{Method, SemilinearSystem, Stepper};
use avglab_core::C64;
use rayon::prelude::*;

use super::{Check, ScenarioResult};
use crate::fit::loglog_fit;

struct ToyOde {
    nu: f64,
    alpha: f64,
}

impl SemilinearSystem for ToyOde {
    fn len(&self) -> usize {
        1
    }
    fn linear(&self, out: &mut [C64]) {
        out[0] = C64::new(-self.nu, 0.0);
    }
    fn rest(&self, t: f64, _u: &[C64], out: &mut [C64]) {
        out[0] = C64::new(0.0, self.alpha * t).exp();
    }
}

pub struct ToyPoint {
    pub alpha: f64,
    pub trailing_mean: f64,
    pub exact: f64,
    pub rel_err: f64,
}

/// Integrate to t = 20/nu and average |z| over the trailing quarter of the run.
pub fn run_point(nu: f64, alpha: f64, z0: C64) -> ToyPoint {
    let sys = ToyOde { nu, alpha };
    let t_end = 20.0 / nu;
    let dt = (0.02 / (1.0 + alpha.abs())).min(0.01);
    let n = (t_end / dt).ceil() as usize;
    let dt = t_end / n as f64;
    let mut stepper = Stepper::new(&sys, dt, Method::IfRk4);
    let mut u = vec![z0];
    let cut = (0.75 * n as f64) as usize;
    let mut acc = 0.0;
    let mut count = 0usize;
    for step in 0..n {
        stepper.step(&sys, step as f64 * dt, &mut u);
        if step >= cut {
            acc += u[0].norm();
            count += 1;
        }
    }
    let trailing_mean = acc / count.max(1) as f64;
    let exact = toy_ode_attractor(nu, alpha).norm();
    let rel_err = (trailing_mean - exact).abs() / exact;
    ToyPoint { alpha, trailing_mean, exact, rel_err }
}

/// Sweep over mean-rotation rates: the simulated trailing amplitude must match
/// 1/sqrt(nu^2 + alpha^2) to 1e-6 relative, stay below the looser 1/|alpha|
/// bound, and (with at least 4 rates) fit a log-log slope of -1.
pub fn run(nu: f64, alphas: &[f64], seed: u64) -> ScenarioResult {
    let mut result = ScenarioResult::new(
        "toy-ode",
        seed,
        serde_json::json!({ "nu": nu, "alphas": alphas }),
    );
    result.columns = vec![
        "alpha".into(),
        "trailing_mean_abs".into(),
        "exact_abs".into(),
        "rel_err".into(),
        "inv_alpha_bound".into(),
    ];
    let points: Vec<ToyPoint> = alphas
        .par_iter()
        .map(|&alpha| run_point(nu, alpha, C64::new(1.0, 0.5)))
        .collect();
    for p in &points {
        let inv = if p.alpha != 0.0 { 1.0 / p.alpha.abs() } else { f64::INFINITY };
        result.points.push(vec![p.alpha, p.trailing_mean, p.exact, p.rel_err, inv]);
        result.push_check(Check::at_most(
            &format!("rel_err(alpha={})", p.alpha),
            p.rel_err,
            1e-6,
        ));
        if p.alpha != 0.0 {
            // slack of twice the rel-err budget for the simulated value
            result.push_check(Check::at_most(
                &format!("below_inv_alpha(alpha={})", p.alpha),
                p.trailing_mean,
                inv * (1.0 + 2e-6),
            ));
        }
    }
    let xs: Vec<f64> = points.iter().map(|p| p.alpha).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.trailing_mean).collect();
    if xs.iter().filter(|&&a| a > 0.0).count() >= 4 {
        if let Ok(fit) = loglog_fit(&xs, &ys) {
            result.push_check(Check::range("loglog_slope", fit.slope, -1.02, -0.98));
            result.fit = Some(fit);
        }
    }
    result
}
