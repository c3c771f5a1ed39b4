//! Run configuration: JSON schema, validation (all errors reported, not just
//! the first), and conversion into the core parameter types.

use avglab_core::forcing::{ForcedMode, ForcingSpec, TemporalProfile};
use avglab_core::integrate::{DtSpec, IntegratorConfig, Method};
use avglab_core::modes::ModeIndex;
use avglab_core::{Model, SimParams, C64};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "toy-ode")]
    ToyOde,
    #[serde(rename = "averaging-gap")]
    AveragingGap,
    #[serde(rename = "burgers-scaling")]
    BurgersScaling,
    #[serde(rename = "attraction-rate")]
    AttractionRate,
    #[serde(rename = "nse2d-scaling")]
    Nse2dScaling,
    #[serde(rename = "ibp-identity")]
    IbpIdentity,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::ToyOde => "toy-ode",
            Scenario::AveragingGap => "averaging-gap",
            Scenario::BurgersScaling => "burgers-scaling",
            Scenario::AttractionRate => "attraction-rate",
            Scenario::Nse2dScaling => "nse2d-scaling",
            Scenario::IbpIdentity => "ibp-identity",
        }
    }

    /// Scenarios whose bound machinery needs the envelope exponent condition
    /// s_V > d + p + r + 1 (= d + 4 for the quadratic models).
    pub fn needs_averaging_envelope(&self) -> bool {
        matches!(
            self,
            Scenario::AveragingGap | Scenario::BurgersScaling | Scenario::AttractionRate
                | Scenario::Nse2dScaling
        )
    }

    /// Scenarios that require every forced mode to oscillate in the moving
    /// frame ((k . alpha) != 0).
    pub fn needs_nonresonance(&self) -> bool {
        matches!(self, Scenario::AveragingGap | Scenario::Nse2dScaling)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "burgers")]
    Burgers,
    #[serde(rename = "nse2d")]
    Nse2d,
}

fn scalar_or_vec<'de, D>(de: D) -> Result<Vec<f64>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum V {
        One(f64),
        Many(Vec<f64>),
    }
    Ok(match V::deserialize(de)? {
        V::One(x) => vec![x],
        V::Many(v) => v,
    })
}

fn int_scalar_or_vec<'de, D>(de: D) -> Result<Vec<i32>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum V {
        One(i32),
        Many(Vec<i32>),
    }
    Ok(match V::deserialize(de)? {
        V::One(x) => vec![x],
        V::Many(v) => v,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcedModeConfig {
    #[serde(deserialize_with = "int_scalar_or_vec")]
    pub k: Vec<i32>,
    #[serde(deserialize_with = "scalar_or_vec")]
    pub re: Vec<f64>,
    #[serde(deserialize_with = "scalar_or_vec")]
    pub im: Vec<f64>,
    #[serde(default = "default_profile")]
    pub profile: String,
    #[serde(default)]
    pub omega_slow: f64,
    #[serde(default)]
    pub phase: f64,
}

fn default_profile() -> String {
    "constant".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingConfig {
    pub s_v: f64,
    #[serde(default)]
    pub modes: Vec<ForcedModeConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfigJson {
    #[serde(default = "default_method")]
    pub method: String,
    /// "auto" or a positive number.
    #[serde(default = "default_dt")]
    pub dt: serde_json::Value,
    #[serde(default)]
    pub sample_every: f64,
    pub t_end: f64,
}

fn default_method() -> String {
    "if-rk4".into()
}

fn default_dt() -> serde_json::Value {
    serde_json::Value::String("auto".into())
}

impl Default for IntegratorConfigJson {
    fn default() -> Self {
        IntegratorConfigJson {
            method: default_method(),
            dt: default_dt(),
            sample_every: 0.0,
            t_end: 20.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub model: ModelKind,
    pub nu: f64,
    pub m: u32,
    #[serde(default)]
    pub alphas: Vec<f64>,
    /// Direction of the mean velocity for 2D runs; normalized at validation.
    #[serde(default)]
    pub alpha_dir: Option<[f64; 2]>,
    #[serde(default)]
    pub forcing: Option<ForcingConfig>,
    #[serde(default)]
    pub integrator: IntegratorConfigJson,
    /// Averaging window for gap scenarios.
    #[serde(default)]
    pub h0: Option<f64>,
    /// Number of random initial-condition pairs for attraction scenarios.
    #[serde(default = "default_ic_pairs")]
    pub ic_pairs: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    #[serde(default)]
    pub seed: u64,
}

fn default_ic_pairs() -> usize {
    3
}

fn default_out_dir() -> String {
    "out".into()
}

/// Everything a scenario needs, fully typed.
#[derive(Clone, Debug)]
pub struct Validated {
    pub scenario: Scenario,
    pub model: Model,
    pub nu: f64,
    pub m: u32,
    pub alphas: Vec<f64>,
    pub alpha_dir: [f64; 2],
    pub forcing: ForcingSpec,
    pub integrator: IntegratorConfig,
    pub h0: f64,
    pub ic_pairs: usize,
    pub out_dir: String,
    pub seed: u64,
}

impl Validated {
    /// Parameters for one grid point (alpha magnitude).
    pub fn params_at(&self, alpha: f64) -> SimParams {
        match self.model {
            Model::Burgers => SimParams::burgers(self.nu, alpha, self.m),
            Model::Nse2d => SimParams::nse2d(
                self.nu,
                [alpha * self.alpha_dir[0], alpha * self.alpha_dir[1]],
                self.m,
            ),
        }
    }
}

/// Parse a JSON document into a `RunConfig`. Unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<RunConfig, Vec<String>> {
    serde_json::from_str::<RunConfig>(text).map_err(|e| vec![format!("config parse error: {e}")])
}

/// Validate and lower a parsed config; returns every violation found.
pub fn validate(cfg: &RunConfig) -> Result<Validated, Vec<String>> {
    let mut errors: Vec<String> = Vec::new();
    let model = match cfg.model {
        ModelKind::Burgers => Model::Burgers,
        ModelKind::Nse2d => Model::Nse2d,
    };
    if !(cfg.nu > 0.0) {
        errors.push(format!("nu: viscosity must be positive, got {}", cfg.nu));
    }
    if cfg.m == 0 {
        errors.push("m: cutoff must be at least 1".into());
    }
    match (cfg.scenario, cfg.model) {
        (Scenario::BurgersScaling | Scenario::AttractionRate | Scenario::AveragingGap, ModelKind::Nse2d)
        | (Scenario::Nse2dScaling, ModelKind::Burgers) => {
            errors.push(format!(
                "scenario: {} does not run on model {:?}",
                cfg.scenario.name(),
                cfg.model
            ));
        }
        _ => {}
    }
    let dim = model.dim();
    let ncomp = model.ncomp();
    let mut alpha_dir = [1.0, 0.0];
    if model == Model::Nse2d {
        match cfg.alpha_dir {
            Some(d) => {
                let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
                if n == 0.0 {
                    errors.push("alpha_dir: direction must be nonzero".into());
                } else {
                    alpha_dir = [d[0] / n, d[1] / n];
                }
            }
            None => {
                // badly approximable default direction
                let n = (1.0f64 + 2.0).sqrt();
                alpha_dir = [1.0 / n, 2.0f64.sqrt() / n];
            }
        }
    }
    // forcing
    let s_v_default = if model == Model::Burgers { 6.0 } else { 7.0 };
    let (s_v, entries) = match &cfg.forcing {
        None => (s_v_default, Vec::new()),
        Some(f) => {
            let mut entries = Vec::new();
            for (i, e) in f.modes.iter().enumerate() {
                if e.k.len() != dim {
                    errors.push(format!(
                        "forcing.modes[{i}].k: has {} components, model needs {dim}",
                        e.k.len()
                    ));
                    continue;
                }
                if e.re.len() != ncomp || e.im.len() != ncomp {
                    errors.push(format!(
                        "forcing.modes[{i}]: re/im need {ncomp} components each"
                    ));
                    continue;
                }
                let mut comps = [0i32; 3];
                comps[..dim].copy_from_slice(&e.k);
                let k = ModeIndex::new(comps);
                if k.is_zero() {
                    errors.push(format!("forcing.modes[{i}].k: the zero mode cannot be forced"));
                    continue;
                }
                if k.norm_sq() > (cfg.m as i64) * (cfg.m as i64) {
                    errors.push(format!(
                        "forcing.modes[{i}].k: |k| exceeds the cutoff m = {}",
                        cfg.m
                    ));
                    continue;
                }
                let profile = match e.profile.as_str() {
                    "constant" => TemporalProfile::Constant,
                    "slow-cosine" => {
                        TemporalProfile::SlowCosine { omega: e.omega_slow, phase: e.phase }
                    }
                    other => {
                        errors.push(format!(
                            "forcing.modes[{i}].profile: unknown profile {other:?}"
                        ));
                        continue;
                    }
                };
                let amplitude: Vec<C64> =
                    e.re.iter().zip(e.im.iter()).map(|(&r, &m)| C64::new(r, m)).collect();
                entries.push(ForcedMode { k, amplitude, profile });
            }
            (f.s_v, entries)
        }
    };
    if cfg.scenario.needs_averaging_envelope() && !entries.is_empty() {
        let s_min = dim as f64 + 4.0;
        if !(s_v > s_min) {
            errors.push(format!(
                "forcing.s_v: averaging scenarios need s_V > {s_min}, got {s_v}"
            ));
        }
    }
    let forcing = match ForcingSpec::new(dim, ncomp, entries, s_v, model == Model::Nse2d) {
        Ok(f) => f,
        Err(e) => {
            errors.push(format!("forcing: {e}"));
            ForcingSpec::none(dim, ncomp, s_v)
        }
    };
    if cfg.scenario.needs_nonresonance() {
        for e in forcing.modes() {
            let alpha3 = [alpha_dir[0], alpha_dir[1], 0.0];
            let omega = if model == Model::Burgers { e.k.comp(0) as f64 } else { e.k.dot(&alpha3) };
            if omega.abs() < 1e-12 {
                errors.push(format!(
                    "forcing: mode {:?} is resonant with the mean direction",
                    &e.k.components()[..dim]
                ));
            }
        }
    }
    // scenario grid (ibp-identity falls back to default probe frequencies)
    if cfg.scenario != Scenario::IbpIdentity && cfg.alphas.is_empty() {
        errors.push("alphas: scenario needs at least one mean-velocity magnitude".into());
    }
    // integrator
    let method = match cfg.integrator.method.as_str() {
        "if-rk4" => Method::IfRk4,
        "rk4" => Method::Rk4,
        other => {
            errors.push(format!("integrator.method: unknown method {other:?}"));
            Method::IfRk4
        }
    };
    let dt = match &cfg.integrator.dt {
        serde_json::Value::String(s) if s == "auto" => DtSpec::Auto,
        serde_json::Value::Number(n) => {
            let v = n.as_f64().unwrap_or(-1.0);
            if v > 0.0 {
                DtSpec::Fixed(v)
            } else {
                errors.push(format!("integrator.dt: must be positive, got {v}"));
                DtSpec::Auto
            }
        }
        other => {
            errors.push(format!("integrator.dt: expected \"auto\" or a number, got {other}"));
            DtSpec::Auto
        }
    };
    if !(cfg.integrator.t_end > 0.0) {
        errors.push(format!("integrator.t_end: must be positive, got {}", cfg.integrator.t_end));
    }
    if cfg.integrator.sample_every < 0.0 {
        errors.push("integrator.sample_every: must be nonnegative".into());
    }
    let h0 = cfg.h0.unwrap_or(0.1);
    if !(h0 > 0.0) {
        errors.push(format!("h0: must be positive, got {h0}"));
    }
    if cfg.scenario == Scenario::AttractionRate && cfg.ic_pairs == 0 {
        errors.push("ic_pairs: attraction scenario needs at least one pair".into());
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    Ok(Validated {
        scenario: cfg.scenario,
        model,
        nu: cfg.nu,
        m: cfg.m,
        alphas: cfg.alphas.clone(),
        alpha_dir,
        forcing,
        integrator: IntegratorConfig {
            method,
            dt,
            sample_every: cfg.integrator.sample_every,
            t_end: cfg.integrator.t_end,
            store_states: false,
        },
        h0,
        ic_pairs: cfg.ic_pairs,
        out_dir: cfg.out_dir.clone(),
        seed: cfg.seed,
    })
}
