//! Fixed-step time integration of the Galerkin ODEs.
//!
//! The default method is integrating-factor (Lawson) RK4: the diagonal linear
//! part exp(lambda_k dt) is applied exactly, which removes the nu m^2
//! stiffness restriction; the rapid forcing oscillation |alpha| J_max is the
//! only scale the step must resolve. A classical RK4 path is kept for
//! cross-checks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::forcing::ForcingSpec;
use crate::model::{self, Frame, SimParams};
use crate::state::SpectralState;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Integrating-factor RK4 (exact on the diagonal linear part).
    IfRk4,
    /// Classical RK4 on the full right-hand side.
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DtSpec {
    Auto,
    Fixed(f64),
}

/// Auto-step constants: dt = min(c1/(nu m^2) [classical RK4 only],
/// c2/(1 + |alpha| J_max), c3).
pub const DT_C1: f64 = 0.5;
pub const DT_C2: f64 = 0.05;
pub const DT_C3: f64 = 0.01;

/// The fastest forcing phase |alpha| J_max must satisfy dt * |alpha| * J_max <= 0.1.
pub const OSCILLATION_RESOLUTION: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: DtSpec,
    /// Approximate spacing of recorded samples; clamped to at least one step.
    pub sample_every: f64,
    pub t_end: f64,
    /// Keep full states at every sample (costly; off by default).
    pub store_states: bool,
}

impl IntegratorConfig {
    pub fn new(t_end: f64) -> Self {
        IntegratorConfig {
            method: Method::IfRk4,
            dt: DtSpec::Auto,
            sample_every: 0.0,
            t_end,
            store_states: false,
        }
    }
}

/// Step size from the auto rule.
pub fn auto_dt(params: &SimParams, forcing: &ForcingSpec, method: Method) -> f64 {
    let omega = params.alpha_norm() * forcing.max_mode_norm();
    let mut dt = (DT_C2 / (1.0 + omega)).min(DT_C3);
    if method == Method::Rk4 {
        dt = dt.min(DT_C1 / (params.nu * (params.m as f64).powi(2)));
    }
    dt
}

/// Sampled diagnostics along a trajectory.
#[derive(Clone, Debug, Default)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub enstrophy: Vec<f64>,
    pub l2: Vec<f64>,
    pub grad_bound: Vec<f64>,
    pub reality_defect: Vec<f64>,
    /// max_k |k|^{s_V} |u_k|, the residual against the forcing envelope.
    pub envelope_max: Vec<f64>,
    /// ||x - y|| for pair integrations.
    pub gap: Option<Vec<f64>>,
    pub states: Option<Vec<SpectralState>>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        for w in self.times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(CoreError::Invalid("sample times must be strictly increasing".into()));
            }
        }
        let all = [&self.energy, &self.enstrophy, &self.l2, &self.grad_bound, &self.reality_defect];
        for series in all {
            if series.iter().any(|v| !v.is_finite()) {
                return Err(CoreError::Invalid("non-finite diagnostic".into()));
            }
        }
        Ok(())
    }

    /// Sup of a series over the trailing fraction of the time span.
    pub fn trailing_sup(series: &[f64], times: &[f64], fraction: f64) -> f64 {
        if times.is_empty() {
            return 0.0;
        }
        let t0 = times[0];
        let t1 = *times.last().unwrap();
        let cut = t1 - fraction * (t1 - t0);
        series
            .iter()
            .zip(times.iter())
            .filter(|(_, &t)| t >= cut)
            .map(|(&v, _)| v)
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct IntegrationOutcome {
    pub record: TrajectoryRecord,
    pub final_state: SpectralState,
}

/// Gap profile of a pair integration on [0, h].
#[derive(Clone, Debug)]
pub struct PairOutcome {
    pub times: Vec<f64>,
    pub gap: Vec<f64>,
    pub sup_gap: f64,
    pub final_x: SpectralState,
    pub final_y: SpectralState,
}

/// A semilinear system u' = diag(lambda) u + G(t, u) on flat complex vectors.
pub trait SemilinearSystem {
    fn len(&self) -> usize;
    fn linear(&self, out: &mut [C64]);
    /// Everything except the diagonal linear part (nonlinearity + forcing).
    fn rest(&self, t: f64, u: &[C64], out: &mut [C64]);
}

/// Spectral model as a semilinear system over its flat amplitudes. The
/// quadratic convolution runs through a precomputed pair plan that fills the
/// conjugate half by mirroring, so states must satisfy the reality condition.
pub struct ModelSystem<'a> {
    pub params: &'a SimParams,
    pub forcing: &'a ForcingSpec,
    pub frame: Frame,
    pub set: alloc::sync::Arc<crate::modes::ModeSet>,
    plan: model::ConvolutionPlan,
}

impl<'a> ModelSystem<'a> {
    pub fn new(
        params: &'a SimParams,
        forcing: &'a ForcingSpec,
        frame: Frame,
        set: alloc::sync::Arc<crate::modes::ModeSet>,
    ) -> Self {
        let plan = model::ConvolutionPlan::new(&set, params.model);
        ModelSystem { params, forcing, frame, set, plan }
    }
}

impl<'a> SemilinearSystem for ModelSystem<'a> {
    fn len(&self) -> usize {
        self.set.len() * self.set.ncomp()
    }

    fn linear(&self, out: &mut [C64]) {
        model::linear_coeffs(&self.set, self.params, self.frame, out);
    }

    fn rest(&self, t: f64, u: &[C64], out: &mut [C64]) {
        out.fill(C64::new(0.0, 0.0));
        if self.params.nonlinear {
            self.plan.accumulate(u, out);
        }
        let phase = match self.frame {
            Frame::Moving => Some(&self.params.alpha),
            Frame::Lab => None,
        };
        self.forcing.accumulate(t, &self.set, phase, out);
    }
}

/// One-step workspace shared across steps.
pub struct Stepper {
    lambda: Vec<C64>,
    exp_full: Vec<C64>,
    exp_half: Vec<C64>,
    dt: f64,
    method: Method,
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    stage: Vec<C64>,
}

impl Stepper {
    pub fn new<S: SemilinearSystem>(sys: &S, dt: f64, method: Method) -> Self {
        let n = sys.len();
        let mut lambda = vec![C64::new(0.0, 0.0); n];
        sys.linear(&mut lambda);
        let exp_full: Vec<C64> = lambda.iter().map(|l| (l * dt).exp()).collect();
        let exp_half: Vec<C64> = lambda.iter().map(|l| (l * (0.5 * dt)).exp()).collect();
        Stepper {
            lambda,
            exp_full,
            exp_half,
            dt,
            method,
            k1: vec![C64::new(0.0, 0.0); n],
            k2: vec![C64::new(0.0, 0.0); n],
            k3: vec![C64::new(0.0, 0.0); n],
            k4: vec![C64::new(0.0, 0.0); n],
            stage: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance u from t by one step of length dt.
    pub fn step<S: SemilinearSystem>(&mut self, sys: &S, t: f64, u: &mut [C64]) {
        let dt = self.dt;
        let h2 = 0.5 * dt;
        match self.method {
            Method::IfRk4 => {
                sys.rest(t, u, &mut self.k1);
                for i in 0..u.len() {
                    self.stage[i] = self.exp_half[i] * (u[i] + h2 * self.k1[i]);
                }
                sys.rest(t + h2, &self.stage, &mut self.k2);
                for i in 0..u.len() {
                    self.stage[i] = self.exp_half[i] * u[i] + h2 * self.k2[i];
                }
                sys.rest(t + h2, &self.stage, &mut self.k3);
                for i in 0..u.len() {
                    self.stage[i] = self.exp_full[i] * u[i] + dt * self.exp_half[i] * self.k3[i];
                }
                sys.rest(t + dt, &self.stage, &mut self.k4);
                for i in 0..u.len() {
                    u[i] = self.exp_full[i] * u[i]
                        + dt / 6.0
                            * (self.exp_full[i] * self.k1[i]
                                + 2.0 * self.exp_half[i] * (self.k2[i] + self.k3[i])
                                + self.k4[i]);
                }
            }
            Method::Rk4 => {
                fn full<S: SemilinearSystem>(
                    lambda: &[C64],
                    sys: &S,
                    t: f64,
                    v: &[C64],
                    out: &mut [C64],
                ) {
                    sys.rest(t, v, out);
                    for i in 0..v.len() {
                        out[i] += lambda[i] * v[i];
                    }
                }
                full(&self.lambda, sys, t, u, &mut self.k1);
                for i in 0..u.len() {
                    self.stage[i] = u[i] + h2 * self.k1[i];
                }
                full(&self.lambda, sys, t + h2, &self.stage, &mut self.k2);
                for i in 0..u.len() {
                    self.stage[i] = u[i] + h2 * self.k2[i];
                }
                full(&self.lambda, sys, t + h2, &self.stage, &mut self.k3);
                for i in 0..u.len() {
                    self.stage[i] = u[i] + dt * self.k3[i];
                }
                full(&self.lambda, sys, t + dt, &self.stage, &mut self.k4);
                for i in 0..u.len() {
                    u[i] += dt / 6.0
                        * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
                }
            }
        }
    }
}

fn check_reality(state: &SpectralState) -> Result<(), CoreError> {
    let defect = state.reality_defect();
    if defect > 1e-8 * (1.0 + state.l2_norm()) {
        return Err(CoreError::Invalid(format!(
            "integration requires a reality-consistent initial state (defect {defect:e})"
        )));
    }
    Ok(())
}

fn resolve_dt(
    cfg: &IntegratorConfig,
    params: &SimParams,
    forcing: &ForcingSpec,
    span: f64,
) -> Result<(f64, usize), CoreError> {
    if !(span > 0.0) {
        return Err(CoreError::Invalid(format!("integration span must be positive, got {span}")));
    }
    let raw = match cfg.dt {
        DtSpec::Auto => auto_dt(params, forcing, cfg.method),
        DtSpec::Fixed(v) => {
            if !(v > 0.0) {
                return Err(CoreError::Invalid("dt must be positive".into()));
            }
            v
        }
    };
    let omega = params.alpha_norm() * forcing.max_mode_norm();
    let limit = if omega > 0.0 { OSCILLATION_RESOLUTION / omega } else { f64::INFINITY };
    if raw > limit * (1.0 + 1e-9) {
        return Err(CoreError::StepTooLarge { dt: raw, limit });
    }
    let n_steps = (span / raw).ceil().max(1.0) as usize;
    Ok((span / n_steps as f64, n_steps))
}

fn push_sample(
    record: &mut TrajectoryRecord,
    t: f64,
    state: &SpectralState,
    s_v: f64,
    store_states: bool,
) {
    record.times.push(t);
    record.energy.push(state.energy());
    record.enstrophy.push(state.enstrophy());
    record.l2.push(state.l2_norm());
    record.grad_bound.push(state.grad_supnorm_bound());
    record.reality_defect.push(state.reality_defect());
    record.envelope_max.push(state.envelope_weighted_max(s_v));
    if store_states {
        record.states.get_or_insert_with(Vec::new).push(state.clone());
    }
}

/// Integrate the Galerkin ODEs from `initial` over [t0, t0 + t_end].
pub fn integrate(
    initial: &SpectralState,
    t0: f64,
    cfg: &IntegratorConfig,
    params: &SimParams,
    forcing: &ForcingSpec,
    frame: Frame,
) -> Result<IntegrationOutcome, CoreError> {
    params.validate()?;
    check_reality(initial)?;
    let set = initial.mode_set().clone();
    let sys = ModelSystem::new(params, forcing, frame, set.clone());
    let (dt, n_steps) = resolve_dt(cfg, params, forcing, cfg.t_end)?;
    let stride = if cfg.sample_every > 0.0 {
        (cfg.sample_every / dt).round().max(1.0) as usize
    } else {
        1
    };
    let mut stepper = Stepper::new(&sys, dt, cfg.method);
    let mut u = initial.amplitudes().to_vec();
    let mut record = TrajectoryRecord::default();
    if cfg.store_states {
        record.states = Some(Vec::new());
    }
    let e0 = initial.energy();
    let blowup = 1e6 * (1.0 + e0);
    let mean = initial.mean();
    let view = |amps: &[C64]| SpectralState::from_amplitudes(set.clone(), amps.to_vec(), mean);
    push_sample(&mut record, t0, &view(&u), forcing.s_v(), cfg.store_states);
    for step in 0..n_steps {
        let t = t0 + step as f64 * dt;
        stepper.step(&sys, t, &mut u);
        if step + 1 == n_steps || (step + 1) % stride == 0 {
            let st = view(&u);
            let e = st.energy();
            if !e.is_finite() || e > blowup {
                return Err(CoreError::BlowUp { t: t + dt, energy: e });
            }
            push_sample(&mut record, t + dt, &st, forcing.s_v(), cfg.store_states);
        }
    }
    record.validate()?;
    Ok(IntegrationOutcome { record, final_state: view(&u) })
}

/// Integrate two systems in lockstep from their own initial data and record
/// the gap ||x(t) - y(t)|| on [0, h]. The x side carries `forcing_x`, the y
/// side `forcing_y`; both share params and frame.
#[allow(clippy::too_many_arguments)]
pub fn integrate_two(
    initial_x: &SpectralState,
    initial_y: &SpectralState,
    t0: f64,
    h: f64,
    cfg: &IntegratorConfig,
    params: &SimParams,
    forcing_x: &ForcingSpec,
    forcing_y: &ForcingSpec,
    frame: Frame,
) -> Result<PairOutcome, CoreError> {
    params.validate()?;
    check_reality(initial_x)?;
    check_reality(initial_y)?;
    let set = initial_x.mode_set().clone();
    let sys_x = ModelSystem::new(params, forcing_x, frame, set.clone());
    let sys_y = ModelSystem::new(params, forcing_y, frame, set.clone());
    // the x side sets the resolution requirement (it carries the oscillation)
    let (dt, n_steps) = resolve_dt(cfg, params, forcing_x, h)?;
    let stride = if cfg.sample_every > 0.0 {
        (cfg.sample_every / dt).round().max(1.0) as usize
    } else {
        1
    };
    let mut stepper_x = Stepper::new(&sys_x, dt, cfg.method);
    let mut stepper_y = Stepper::new(&sys_y, dt, cfg.method);
    let mut x = initial_x.amplitudes().to_vec();
    let mut y = initial_y.amplitudes().to_vec();
    let gap_of = |x: &[C64], y: &[C64]| -> f64 {
        x.iter().zip(y.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    };
    let mut times = vec![t0];
    let mut gap = vec![gap_of(&x, &y)];
    let blowup = 1e6 * (1.0 + initial_x.energy());
    for step in 0..n_steps {
        let t = t0 + step as f64 * dt;
        stepper_x.step(&sys_x, t, &mut x);
        stepper_y.step(&sys_y, t, &mut y);
        if step + 1 == n_steps || (step + 1) % stride == 0 {
            let e: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            if !e.is_finite() || e > blowup {
                return Err(CoreError::BlowUp { t: t + dt, energy: e });
            }
            times.push(t + dt);
            gap.push(gap_of(&x, &y));
        }
    }
    let sup_gap = gap.iter().fold(0.0f64, |a, &b| a.max(b));
    let mean = initial_x.mean();
    let final_x = SpectralState::from_amplitudes(set.clone(), x, mean);
    let final_y = SpectralState::from_amplitudes(set, y, initial_y.mean());
    Ok(PairOutcome { times, gap, sup_gap, final_x, final_y })
}

/// Gap profile between the oscillatory system and its oscillation-free
/// reference started from the same initial condition.
#[allow(clippy::too_many_arguments)]
pub fn integrate_pair(
    initial: &SpectralState,
    t0: f64,
    h: f64,
    cfg: &IntegratorConfig,
    params: &SimParams,
    forcing_full: &ForcingSpec,
    forcing_reduced: &ForcingSpec,
    frame: Frame,
) -> Result<PairOutcome, CoreError> {
    integrate_two(initial, initial, t0, h, cfg, params, forcing_full, forcing_reduced, frame)
}

/// Largest violation of the discrete energy inequality
/// (E(t+d) - E(t))/d <= -2 nu E + 2 sqrt(E) sqrt(E_f) + tol (1 + E)
/// over consecutive samples; <= 0 means the inequality holds everywhere.
pub fn energy_inequality_max_violation(
    record: &TrajectoryRecord,
    forcing: &ForcingSpec,
    nu: f64,
    tol: f64,
) -> f64 {
    series_inequality_violation(&record.times, &record.energy, nu, tol, |t| forcing.energy_at(t))
}

/// Enstrophy analogue, identically formed with V and V(F).
pub fn enstrophy_inequality_max_violation(
    record: &TrajectoryRecord,
    forcing: &ForcingSpec,
    nu: f64,
    tol: f64,
) -> f64 {
    series_inequality_violation(&record.times, &record.enstrophy, nu, tol, |t| {
        forcing.enstrophy_at(t)
    })
}

fn series_inequality_violation(
    times: &[f64],
    series: &[f64],
    nu: f64,
    tol: f64,
    mut forcing_at: impl FnMut(f64) -> f64,
) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for i in 0..times.len().saturating_sub(1) {
        let d = times[i + 1] - times[i];
        let e = series[i];
        let lhs = (series[i + 1] - e) / d;
        let rhs = -2.0 * nu * e + 2.0 * e.sqrt() * forcing_at(times[i]).sqrt() + tol * (1.0 + e);
        worst = worst.max(lhs - rhs);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forcing::{ForcedMode, TemporalProfile};
    use crate::modes::ModeIndex;
    use crate::rng::Rng64;

    fn decay_setup(m: u32) -> (SimParams, ForcingSpec, SpectralState) {
        let params = SimParams::burgers(1.0, 0.0, m);
        let forcing = ForcingSpec::none(1, 1, 6.0);
        let set = params.mode_set();
        let mut st = SpectralState::zeros(set.clone());
        let mut rng = Rng64::new(17);
        for i in set.canonical_indices() {
            let k = set.mode(i);
            let v = rng.complex_ball(1.0 / (1.0 + k.norm_sq() as f64));
            st.set_pair(&k, &[v]);
        }
        (params, forcing, st)
    }

    #[test]
    fn integrating_factor_is_exact_on_pure_decay() {
        let (mut params, forcing, st) = decay_setup(8);
        params.nonlinear = false;
        let cfg = IntegratorConfig { sample_every: 0.25, ..IntegratorConfig::new(1.0) };
        let out = integrate(&st, 0.0, &cfg, &params, &forcing, Frame::Moving).unwrap();
        let set = st.mode_set();
        for (i, k) in set.modes().iter().enumerate() {
            let lam = -params.nu * k.norm_sq() as f64;
            let want = st.amplitudes()[i] * (lam * 1.0).exp();
            let got = out.final_state.amplitudes()[i];
            assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn if_rk4_reduces_to_rk4_when_linear_part_vanishes() {
        // nu -> 0 is not allowed; emulate lambda = 0 with a custom system
        struct NoLinear;
        impl SemilinearSystem for NoLinear {
            fn len(&self) -> usize {
                2
            }
            fn linear(&self, out: &mut [C64]) {
                out.fill(C64::new(0.0, 0.0));
            }
            fn rest(&self, t: f64, u: &[C64], out: &mut [C64]) {
                // a mildly nonlinear, time-dependent field
                out[0] = u[1] * u[1] + C64::new(t.cos(), 0.0);
                out[1] = u[0] * C64::new(0.0, 1.0) - u[1] * u[0];
            }
        }
        let sys = NoLinear;
        let u0 = [C64::new(0.3, -0.2), C64::new(0.1, 0.4)];
        let mut a = u0.to_vec();
        let mut b = u0.to_vec();
        Stepper::new(&sys, 0.01, Method::IfRk4).step(&sys, 0.0, &mut a);
        Stepper::new(&sys, 0.01, Method::Rk4).step(&sys, 0.0, &mut b);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    /// z' = -nu z + e^{i alpha t} as a one-component system.
    pub struct ToyOde {
        pub nu: f64,
        pub alpha: f64,
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

    #[test]
    fn toy_ode_matches_closed_form() {
        let (nu, alpha) = (1.0, 10.0);
        let sys = ToyOde { nu, alpha };
        let z0 = C64::new(0.7, -0.3);
        let dt = DT_C2 / (1.0 + alpha);
        let n = (10.0 / dt).ceil() as usize;
        let dt = 10.0 / n as f64;
        let mut u = vec![z0];
        let mut stepper = Stepper::new(&sys, dt, Method::IfRk4);
        for step in 0..n {
            stepper.step(&sys, step as f64 * dt, &mut u);
        }
        let t = 10.0;
        let denom = C64::new(nu, alpha);
        let exact = (z0 - 1.0 / denom) * (-nu * t).exp() + C64::new(0.0, alpha * t).exp() / denom;
        assert!((u[0] - exact).norm() < 1e-8, "err = {:e}", (u[0] - exact).norm());
    }

    #[test]
    fn step_halving_shows_fourth_order() {
        let (params, _, st) = decay_setup(8);
        let forcing = ForcingSpec::new(
            1,
            1,
            vec![ForcedMode {
                k: ModeIndex::new_1d(1),
                amplitude: vec![C64::new(0.4, 0.1)],
                profile: TemporalProfile::Constant,
            }],
            6.0,
            false,
        )
        .unwrap();
        let run = |dt: f64| {
            let cfg = IntegratorConfig {
                dt: DtSpec::Fixed(dt),
                sample_every: 1.0,
                ..IntegratorConfig::new(1.0)
            };
            integrate(&st, 0.0, &cfg, &params, &forcing, Frame::Moving).unwrap().final_state
        };
        let reference = run(0.04 / 16.0);
        let err = |dt: f64| run(dt).distance(&reference);
        let e1 = err(0.04);
        let e2 = err(0.02);
        let ratio = e1 / e2;
        assert!(
            (12.0..22.0).contains(&ratio),
            "order-4 self-convergence ratio {ratio} out of range (e1={e1:e}, e2={e2:e})"
        );
    }

    #[test]
    fn reality_defect_does_not_amplify() {
        let (params, forcing, st) = decay_setup(10);
        let d0 = st.reality_defect();
        let cfg = IntegratorConfig { sample_every: 0.5, ..IntegratorConfig::new(2.0) };
        let out = integrate(&st, 0.0, &cfg, &params, &forcing, Frame::Moving).unwrap();
        for &d in &out.record.reality_defect {
            assert!(d <= 10.0 * d0 + 1e-12);
        }
    }

    #[test]
    fn energy_inequality_holds_along_forced_run() {
        let params = SimParams::burgers(1.0, 30.0, 12);
        let forcing = ForcingSpec::new(
            1,
            1,
            vec![ForcedMode {
                k: ModeIndex::new_1d(1),
                amplitude: vec![C64::new(0.3, 0.0)],
                profile: TemporalProfile::Constant,
            }],
            6.0,
            false,
        )
        .unwrap();
        let st = SpectralState::zeros(params.mode_set());
        let cfg = IntegratorConfig { sample_every: 0.0, ..IntegratorConfig::new(3.0) };
        let out = integrate(&st, 0.0, &cfg, &params, &forcing, Frame::Moving).unwrap();
        let v = energy_inequality_max_violation(&out.record, &forcing, params.nu, 1e-3);
        assert!(v <= 0.0, "violation {v:e}");
    }

    #[test]
    fn pair_gap_zero_for_identical_forcings_and_at_t0() {
        let params = SimParams::burgers(1.0, 40.0, 8);
        let forcing = ForcingSpec::new(
            1,
            1,
            vec![ForcedMode {
                k: ModeIndex::new_1d(1),
                amplitude: vec![C64::new(0.25, 0.0)],
                profile: TemporalProfile::Constant,
            }],
            6.0,
            false,
        )
        .unwrap();
        let st = SpectralState::zeros(params.mode_set());
        let cfg = IntegratorConfig { sample_every: 0.01, ..IntegratorConfig::new(0.2) };
        let same =
            integrate_pair(&st, 0.0, 0.2, &cfg, &params, &forcing, &forcing, Frame::Moving)
                .unwrap();
        assert!(same.sup_gap <= 1e-14);
        let none = ForcingSpec::none(1, 1, 6.0);
        let pair =
            integrate_pair(&st, 0.0, 0.2, &cfg, &params, &forcing, &none, Frame::Moving).unwrap();
        assert_eq!(pair.gap[0], 0.0);
        assert!(pair.sup_gap > 0.0);
    }

    #[test]
    fn pair_gap_scales_inversely_with_alpha() {
        let mk = |alpha: f64| {
            let params = SimParams::burgers(1.0, alpha, 16);
            let forcing = ForcingSpec::new(
                1,
                1,
                vec![ForcedMode {
                    k: ModeIndex::new_1d(1),
                    amplitude: vec![C64::new(0.25, 0.0)],
                    profile: TemporalProfile::Constant,
                }],
                6.0,
                false,
            )
            .unwrap();
            let st = SpectralState::zeros(params.mode_set());
            let none = ForcingSpec::none(1, 1, 6.0);
            let cfg = IntegratorConfig { sample_every: 0.0, ..IntegratorConfig::new(0.1) };
            integrate_pair(&st, 0.0, 0.1, &cfg, &params, &forcing, &none, Frame::Moving)
                .unwrap()
                .sup_gap
        };
        let ratio = mk(50.0) / mk(100.0);
        assert!((1.6..=2.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn blow_up_is_detected_and_reported() {
        // classical RK4 far outside its stability region
        let (params, forcing, st) = decay_setup(16);
        let cfg = IntegratorConfig {
            method: Method::Rk4,
            dt: DtSpec::Fixed(0.5),
            sample_every: 0.0,
            t_end: 30.0,
            store_states: false,
        };
        match integrate(&st, 0.0, &cfg, &params, &forcing, Frame::Moving) {
            Err(CoreError::BlowUp { .. }) => {}
            other => panic!("expected blow-up, got {other:?}"),
        }
    }

    #[test]
    fn unresolved_oscillation_is_rejected() {
        let params = SimParams::burgers(1.0, 100.0, 8);
        let forcing = ForcingSpec::new(
            1,
            1,
            vec![ForcedMode {
                k: ModeIndex::new_1d(2),
                amplitude: vec![C64::new(0.1, 0.0)],
                profile: TemporalProfile::Constant,
            }],
            6.0,
            false,
        )
        .unwrap();
        let st = SpectralState::zeros(params.mode_set());
        let cfg = IntegratorConfig {
            dt: DtSpec::Fixed(0.01), // dt * |alpha| * J_max = 2 > 0.1
            sample_every: 0.0,
            ..IntegratorConfig::new(1.0)
        };
        assert!(matches!(
            integrate(&st, 0.0, &cfg, &params, &forcing, Frame::Moving),
            Err(CoreError::StepTooLarge { .. })
        ));
        // auto dt always resolves it
        let dt = auto_dt(&params, &forcing, Method::IfRk4);
        assert!(dt * 100.0 * 2.0 <= OSCILLATION_RESOLUTION + 1e-12);
    }

    #[test]
    fn galilean_equivariance_lab_vs_moving() {
        let alpha = 8.0;
        let params = SimParams::burgers(1.0, alpha, 16);
        let forcing = ForcingSpec::new(
            1,
            1,
            vec![ForcedMode {
                k: ModeIndex::new_1d(1),
                amplitude: vec![C64::new(0.3, 0.15)],
                profile: TemporalProfile::Constant,
            }],
            6.0,
            false,
        )
        .unwrap();
        let set = params.mode_set();
        let mut moving0 = SpectralState::zeros(set.clone());
        let mut rng = Rng64::new(5);
        for i in set.canonical_indices() {
            let k = set.mode(i);
            let v = rng.complex_ball(0.5 / (1.0 + k.norm_sq() as f64));
            moving0.set_pair(&k, &[v]);
        }
        let lab0 =
            model::frame_transform(&moving0, &params.alpha, 0.0, model::TransformDirection::ToLab);
        let cfg = IntegratorConfig { sample_every: 1.0, ..IntegratorConfig::new(1.0) };
        let mov = integrate(&moving0, 0.0, &cfg, &params, &forcing, Frame::Moving).unwrap();
        let lab = integrate(&lab0, 0.0, &cfg, &params, &forcing, Frame::Lab).unwrap();
        let lab_in_moving = model::frame_transform(
            &lab.final_state,
            &params.alpha,
            1.0,
            model::TransformDirection::ToMoving,
        );
        let gap = lab_in_moving.distance(&mov.final_state);
        assert!(gap <= 1e-6, "equivariance gap {gap:e}");
    }
}
