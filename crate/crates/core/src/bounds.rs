//! Calculators for the explicit constants controlling trapping regions,
//! absorbing sets, logarithmic-norm contraction, and the averaging bound on
//! the oscillatory-vs-averaged trajectory gap.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::forcing::ForcingSpec;
use crate::model::{jacobian, leray_project, Frame, Model, SimParams};
use crate::modes::ModeIndex;
use crate::rng::Rng64;
use crate::state::{EnvelopeBound, SpectralState};
use crate::sums::{estimate_c2, lattice_tail_upper, sum_s};
use crate::C64;

pub use crate::linalg::{gershgorin_log_norm, log_norm_euclidean};

/// One named constant with its provenance and the inputs it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundEntry {
    pub name: String,
    pub value: f64,
    /// Which result the constant comes from; sampled estimators are tagged
    /// "(non-rigorous)".
    pub origin: String,
    pub inputs: Vec<(String, f64)>,
}

/// A list of named constants; every value must be finite.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundsReport {
    pub entries: Vec<BoundEntry>,
}

impl BoundsReport {
    pub fn push(
        &mut self,
        name: &str,
        value: f64,
        origin: &str,
        inputs: &[(&str, f64)],
    ) {
        self.entries.push(BoundEntry {
            name: name.into(),
            value,
            origin: origin.into(),
            inputs: inputs.iter().map(|(k, v)| (String::from(*k), *v)).collect(),
        });
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.value)
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        for e in &self.entries {
            if !e.value.is_finite() {
                return Err(CoreError::Invalid(format!("entry {} is not finite", e.name)));
            }
            if e.origin.is_empty() {
                return Err(CoreError::Invalid(format!("entry {} has no origin tag", e.name)));
            }
        }
        Ok(())
    }
}

/// D(s) = 2^{s - 1/2} + 2^{s-1} / sqrt(2s - 1), the convolution constant of
/// the trapping estimate. Requires s > 1/2.
pub fn trapping_d(s: f64) -> f64 {
    2.0f64.powf(s - 0.5) + 2.0f64.powf(s - 1.0) / (2.0 * s - 1.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BurgersTrapping {
    /// Forcing floor: sup_t E(f) / nu^2; the energy bound must exceed it.
    pub e0: f64,
    pub d: f64,
    /// Mode threshold: beyond |k| > N the envelope contracts pointwise.
    pub n: f64,
    /// Smallest admissible envelope constant.
    pub c_min: f64,
    /// Slack of nu sqrt|k| > D sqrt(E~) + sup(|k|^{s-3/2}|f_k|)/C at
    /// |k| = ceil(N) + 1 (positive when the trapping inequality holds).
    pub tail_margin: f64,
}

/// Constants making W(E~, C, s) forward invariant for the Burgers ladder.
pub fn burgers_trapping_constants(
    e_tilde: f64,
    s: f64,
    nu: f64,
    forcing: &ForcingSpec,
) -> Result<BurgersTrapping, CoreError> {
    if !(nu > 0.0) {
        return Err(CoreError::Precondition("viscosity must be positive".into()));
    }
    if !(s > 0.5) {
        return Err(CoreError::Precondition(format!("need s > 1/2, got {s}")));
    }
    let e0 = forcing.energy_sup() / (nu * nu);
    if !(e_tilde > e0) {
        return Err(CoreError::Precondition(format!(
            "energy bound {e_tilde} must exceed E_0 = {e0}"
        )));
    }
    let d = trapping_d(s);
    let root_e = e_tilde.sqrt();
    let n = ((root_e * d + 1.0) / nu).powi(2);
    let f_sup = forcing.weighted_sup(s - 1.5);
    let c_min = (root_e * n.powf(s)).max(f_sup);
    let k_probe = n.ceil() + 1.0;
    let tail_margin = nu * k_probe.sqrt() - d * root_e - f_sup / c_min.max(1e-300);
    if tail_margin <= 0.0 {
        return Err(CoreError::Precondition(format!(
            "trapping inequality failed at |k| = {k_probe} (margin {tail_margin})"
        )));
    }
    Ok(BurgersTrapping { e0, d, n, c_min, tail_margin })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbsorbingLevel {
    pub i: u32,
    pub s_i: f64,
    pub d_i: f64,
    pub c_i: f64,
    /// Envelope constant making W(E~, C_s, s_i) forward invariant as well:
    /// max(C_i, sqrt(E~) N_i^{s_i}).
    pub c_s: f64,
}

/// The absorbing-set recursion: s_i = i/2, C_2 from the energy bound, then
/// C_i = eps + (C_{i-1} sqrt(E~) D_{i-1} + sup |k|^{s_i - 2} |f_k|) / nu,
/// with equality taken in each step.
pub fn burgers_absorbing_sequence(
    e_tilde: f64,
    nu: f64,
    forcing: &ForcingSpec,
    i_max: u32,
    eps: f64,
) -> Result<Vec<AbsorbingLevel>, CoreError> {
    if !(nu > 0.0) {
        return Err(CoreError::Precondition("viscosity must be positive".into()));
    }
    let e0 = forcing.energy_sup() / (nu * nu);
    if !(e_tilde > e0) {
        return Err(CoreError::Precondition(format!(
            "energy bound {e_tilde} must exceed E_0 = {e0}"
        )));
    }
    if i_max < 2 {
        return Err(CoreError::Precondition("need i_max >= 2".into()));
    }
    if eps < 0.0 {
        return Err(CoreError::Precondition("eps must be nonnegative".into()));
    }
    let root_e = e_tilde.sqrt();
    let mut levels: Vec<AbsorbingLevel> = Vec::new();
    for i in 2..=i_max {
        let s_i = i as f64 / 2.0;
        let d_i = trapping_d(s_i);
        let c_i = if i == 2 {
            eps + (0.5 * e_tilde + forcing.weighted_sup(-1.0)) / nu
        } else {
            let prev = levels.last().unwrap();
            eps + (prev.c_i * root_e * prev.d_i + forcing.weighted_sup(s_i - 2.0)) / nu
        };
        let n_i = ((root_e * d_i + 1.0) / nu).powi(2);
        let c_s = c_i.max(root_e * n_i.powf(s_i));
        levels.push(AbsorbingLevel { i, s_i, d_i, c_i, c_s });
    }
    Ok(levels)
}

/// (e^{lt} - 1) / l, continuous through l = 0.
pub fn phi_stable(l: f64, t: f64) -> f64 {
    if (l * t).abs() < 1e-8 {
        t * (1.0 + 0.5 * l * t)
    } else {
        (l * t).exp_m1() / l
    }
}

/// The per-mode gap kernel
/// b(t) = Cv Cg (1 + e^{lt}) + CDzFv Cg (e^{lt}-1)/l
///        + Cg (Cdvdt + CDzvF) (e^{lt}-1)/l.
pub fn bk_profile(
    cv: f64,
    cg: f64,
    c_dzf_v: f64,
    c_dvdt: f64,
    c_dzv_f: f64,
    l: f64,
    t: f64,
) -> f64 {
    let phi = phi_stable(l, t);
    cv * cg * (1.0 + (l * t).exp()) + c_dzf_v * cg * phi + cg * (c_dvdt + c_dzv_f) * phi
}

/// sup of b(t) over [0, h0]. For l < 0 the clean bounds 1 + e^{lt} <= 2 and
/// (e^{lt}-1)/l < t apply; for l >= 0 the profile is nondecreasing so the sup
/// sits at t = h0.
pub fn bk_sup(cv: f64, cg: f64, c_dzf_v: f64, c_dvdt: f64, c_dzv_f: f64, l: f64, h0: f64) -> f64 {
    if l < 0.0 {
        cg * (2.0 * cv + (c_dzf_v + c_dvdt + c_dzv_f) * h0)
    } else {
        bk_profile(cv, cg, c_dzf_v, c_dvdt, c_dzv_f, l, h0)
    }
}

/// The averaging bound Delta = sum over forced modes of
/// sup_{[0,h0]} b_k / |omega_k|, with omega_k = (k . alpha). Uses
/// Cv = A_V/|k|^{s_V}, Cdvdt = B_V/|k|^{s_V}, C(Dz v F) = 0, Cg = 1, and
/// C(DzF v_k) = A_V/|k|^{s_V-p} (nu + C^ S_d(s_V - r)) with p = 2, r = 1.
/// Errors on any resonant forced mode.
pub fn averaging_delta(
    forcing: &ForcingSpec,
    l: f64,
    h0: f64,
    params: &SimParams,
    c_hat: f64,
) -> Result<f64, CoreError> {
    params.validate()?;
    if forcing.is_empty() {
        return Ok(0.0);
    }
    let d = forcing.dim();
    let s_v = forcing.s_v();
    let (p, r) = (2.0, 1.0);
    if !(s_v - r > d as f64) {
        return Err(CoreError::Precondition(format!(
            "need s_V > {} for the mode sums to converge",
            d as f64 + r
        )));
    }
    let s_dr = sum_s(d, s_v - r)?.hi;
    let a_v = forcing.a_v();
    let b_v = forcing.b_v();
    let mut delta = 0.0;
    for e in forcing.modes() {
        let omega = e.k.dot(&params.alpha);
        if omega.abs() < 1e-14 {
            return Err(CoreError::ResonantMode(e.k));
        }
        let kn = e.k.norm();
        let cv = a_v / kn.powf(s_v);
        let c_dvdt = b_v / kn.powf(s_v);
        let c_dzf_v = a_v / kn.powf(s_v - p) * (params.nu + c_hat * s_dr);
        delta += bk_sup(cv, 1.0, c_dzf_v, c_dvdt, 0.0, l, h0) / omega.abs();
    }
    Ok(delta)
}

/// Size bound sqrt(E_1) for the attracting eternal solution at h0 = 1/nu:
///
///   sqrt(E_1) = e/((e-1)|alpha|) ( A_V (3 S_1(s_V+1) + 3/2 S_1(s_V-1))
///             + 3/(2 nu) (A_V S_1(s_V-1) C^ S_1(s_V-1) + B_V S_1(s_V+1)) ).
///
/// C^ is the nonlinearity constant of the chosen absorbing set; the quadratic
/// Burgers bound D(s) sqrt(E~) is the default choice for it.
pub fn burgers_e1(
    a_v: f64,
    b_v: f64,
    s_v: f64,
    nu: f64,
    alpha: f64,
    c_hat: f64,
) -> Result<f64, CoreError> {
    if !(s_v > 5.0) {
        return Err(CoreError::Precondition(format!("need s_V > 5, got {s_v}")));
    }
    if alpha == 0.0 {
        return Err(CoreError::Precondition("alpha must be nonzero".into()));
    }
    if !(nu > 0.0) {
        return Err(CoreError::Precondition("viscosity must be positive".into()));
    }
    let s1p = sum_s(1, s_v + 1.0)?.hi;
    let s1m = sum_s(1, s_v - 1.0)?.hi;
    let e = core::f64::consts::E;
    let front = e / ((e - 1.0) * alpha.abs());
    Ok(front
        * (a_v * (3.0 * s1p + 1.5 * s1m) + 1.5 / nu * (a_v * s1m * c_hat * s1m + b_v * s1p)))
}

/// The exactly known attracting solution of z' = -nu z + e^{i alpha t}:
/// amplitude 1/(nu + i alpha).
pub fn toy_ode_attractor(nu: f64, alpha: f64) -> C64 {
    let denom = C64::new(nu, alpha);
    denom.conj() / denom.norm_sqr()
}

/// Sampling controls for the negative-log-norm radius estimator.
#[derive(Clone, Copy, Debug)]
pub struct LognormScan {
    pub samples: usize,
    pub seed: u64,
    pub e_init: f64,
    pub bisect_iters: usize,
}

impl Default for LognormScan {
    fn default() -> Self {
        LognormScan { samples: 200, seed: 1, e_init: 1.0, bisect_iters: 24 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct NegativeLognorm {
    /// Largest tested energy with sampled max mu < 0.
    pub e_minus: f64,
    /// The sampled max mu at that energy.
    pub mu: f64,
}

fn sample_state_in_w(
    params: &SimParams,
    envelope: &EnvelopeBound,
    energy: f64,
    seed: u64,
) -> SpectralState {
    let set = params.mode_set();
    let nc = set.ncomp();
    let mut rng = Rng64::new(seed);
    let mut st = SpectralState::zeros(set.clone());
    // unit-energy direction, independent of the target energy
    for i in set.canonical_indices() {
        let k = set.mode(i);
        let mut v: Vec<C64> = (0..nc).map(|_| C64::new(rng.normal(), rng.normal())).collect();
        if params.model == Model::Nse2d {
            v = leray_project(&k, &v).unwrap();
        }
        st.set_pair(&k, &v);
    }
    let norm = st.l2_norm().max(1e-300);
    let scale = (energy.sqrt()) / norm;
    for z in st.amplitudes_mut() {
        *z *= scale;
    }
    // clamp each mode into the envelope, preserving phase
    let modes: Vec<ModeIndex> = st.mode_set().modes().to_vec();
    for (i, k) in modes.iter().enumerate() {
        let cap = envelope.at(k);
        let mut a2 = 0.0;
        for c in 0..nc {
            a2 += st.amplitudes()[i * nc + c].norm_sqr();
        }
        let a = a2.sqrt();
        if a > cap {
            let f = cap / a;
            for c in 0..nc {
                st.amplitudes_mut()[i * nc + c] *= f;
            }
        }
    }
    st
}

/// Largest energy radius E_- such that the sampled logarithmic norm of the
/// Jacobian stays negative on W(E, C, s). A sampled, non-rigorous estimate:
/// it probes at least `scan.samples` random states per energy level and
/// bisects on the energy. Errors when even E = 1e-8 shows mu >= 0.
pub fn find_negative_lognorm_radius(
    params: &SimParams,
    envelope: EnvelopeBound,
    scan: &LognormScan,
) -> Result<NegativeLognorm, CoreError> {
    params.validate()?;
    let max_mu = |energy: f64| -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..scan.samples {
            let st = sample_state_in_w(params, &envelope, energy, scan.seed ^ (i as u64) << 17);
            let j = jacobian(&st, params, Frame::Moving);
            worst = worst.max(log_norm_euclidean(&j));
        }
        worst
    };
    if max_mu(1e-8) >= 0.0 {
        return Err(CoreError::Precondition(
            "log norm nonnegative even at E = 1e-8; regime too hostile".into(),
        ));
    }
    let mut lo = 1e-8;
    let mut mu_lo = f64::NEG_INFINITY;
    let mut hi = scan.e_init;
    // grow until mu >= 0 or a cap
    let mut grew = false;
    for _ in 0..40 {
        let mu = max_mu(hi);
        if mu >= 0.0 {
            grew = true;
            break;
        }
        lo = hi;
        mu_lo = mu;
        hi *= 2.0;
        if hi > 1e8 {
            break;
        }
    }
    if !grew {
        return Ok(NegativeLognorm { e_minus: lo, mu: mu_lo });
    }
    for _ in 0..scan.bisect_iters {
        let mid = 0.5 * (lo + hi);
        let mu = max_mu(mid);
        if mu < 0.0 {
            lo = mid;
            mu_lo = mu;
        } else {
            hi = mid;
        }
    }
    if mu_lo == f64::NEG_INFINITY {
        mu_lo = max_mu(lo);
    }
    Ok(NegativeLognorm { e_minus: lo, mu: mu_lo })
}

/// Envelope constant making W(V_0, gamma, D) forward invariant for 2D NSE:
/// D_min = max( 2 A_gamma / nu, (4 C^2 V_0^{1 + 1/(2 gamma - 2)} / nu^2)^{gamma - 1} ),
/// the first branch evaluated at |k| = 1.
pub fn nse2d_trapping_d(
    v0: f64,
    gamma: f64,
    nu: f64,
    c_lemma: f64,
    a_gamma: f64,
) -> Result<f64, CoreError> {
    if !(gamma > 1.0) {
        return Err(CoreError::Precondition(format!("need gamma > 1, got {gamma}")));
    }
    if !(nu > 0.0) || !(v0 > 0.0) || c_lemma < 0.0 || a_gamma < 0.0 {
        return Err(CoreError::Precondition("invalid nse2d trapping inputs".into()));
    }
    let branch_force = 2.0 * a_gamma / nu;
    let branch_nl =
        (4.0 * c_lemma * c_lemma * v0.powf(1.0 + 1.0 / (2.0 * gamma - 2.0)) / (nu * nu))
            .powf(gamma - 1.0);
    Ok(branch_force.max(branch_nl))
}

/// Sampled estimate of the 2D nonlinearity constant C(eps, gamma) in
/// |N_k(u)| <= C sqrt(V_0) D / |k|^{gamma - 1 - eps}, over random states with
/// V <= V_0 and |u_k| <= D/|k|^gamma. Non-rigorous.
pub fn estimate_ns_nonlinearity_constant(
    gamma: f64,
    eps: f64,
    v0: f64,
    d_env: f64,
    sample_size: usize,
    m: u32,
    seed: u64,
) -> Result<f64, CoreError> {
    if !(gamma > 1.0) || !(v0 > 0.0) || !(d_env > 0.0) {
        return Err(CoreError::Precondition("invalid nonlinearity-constant inputs".into()));
    }
    let params = SimParams::nse2d(1.0, [0.0, 0.0], m);
    let set = params.mode_set();
    let nc = set.ncomp();
    let envelope = EnvelopeBound::new(d_env, gamma);
    let mut sup = 0.0f64;
    for i in 0..sample_size {
        let mut rng = Rng64::new(seed ^ ((i as u64) << 13));
        let mut st = SpectralState::zeros(set.clone());
        for ci in set.canonical_indices() {
            let k = set.mode(ci);
            let mut v: Vec<C64> = (0..nc).map(|_| C64::new(rng.normal(), rng.normal())).collect();
            v = leray_project(&k, &v).unwrap();
            st.set_pair(&k, &v);
        }
        let vn = st.enstrophy().max(1e-300);
        let scale = (v0 / vn).sqrt();
        for z in st.amplitudes_mut() {
            *z *= scale;
        }
        let modes: Vec<ModeIndex> = set.modes().to_vec();
        for (idx, k) in modes.iter().enumerate() {
            let cap = envelope.at(k);
            let a = (0..nc)
                .map(|c| st.amplitudes()[idx * nc + c].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if a > cap {
                let f = cap / a;
                for c in 0..nc {
                    st.amplitudes_mut()[idx * nc + c] *= f;
                }
            }
        }
        let n = crate::model::nse2d_nonlinearity(&st);
        for (idx, k) in set.modes().iter().enumerate() {
            let nn = (0..nc)
                .map(|c| n.amplitudes()[idx * nc + c].norm_sqr())
                .sum::<f64>()
                .sqrt();
            let ratio = nn * k.norm().powf(gamma - 1.0 - eps) / (v0.sqrt() * d_env);
            sup = sup.max(ratio);
        }
    }
    Ok(sup)
}

/// Largest envelope constant for which Z(C, s) traps unforced 3D NSE:
/// C_max = nu / C_2(3, s), with the C_2 estimate scanned up to `k_outer`.
pub fn ns3d_trap_c(nu: f64, s: f64, k_outer: u32) -> Result<f64, CoreError> {
    if !(s > 3.0) {
        return Err(CoreError::Precondition(format!("need s > 3, got {s}")));
    }
    if !(nu > 0.0) {
        return Err(CoreError::Precondition("viscosity must be positive".into()));
    }
    Ok(nu / estimate_c2(3, s, k_outer)?)
}

/// Smallest integer radius K_0 with |k|^{s_V - s + 1} (|k| - 1) > A_V C_2(3,s) / nu^2:
/// modes beyond K_0 contract pointwise on the boundary of Z(C, s).
pub fn ns3d_k0(nu: f64, s: f64, s_v: f64, a_v: f64, c2_3s: f64) -> Result<u32, CoreError> {
    if !(s > 3.0) || !(s_v >= s) {
        return Err(CoreError::Precondition("need s > 3 and s_V >= s".into()));
    }
    if !(nu > 0.0) || a_v < 0.0 || c2_3s < 0.0 {
        return Err(CoreError::Precondition("invalid K_0 inputs".into()));
    }
    let rhs = a_v * c2_3s / (nu * nu);
    for n in 1..=1_000_000u32 {
        let nf = n as f64;
        if nf.powf(s_v - s + 1.0) * (nf - 1.0) > rhs {
            return Ok(n);
        }
    }
    Err(CoreError::Precondition("K_0 search exceeded 1e6".into()))
}

/// Step bound h = (E_1 - E_2) / (sqrt(E_1) sup sqrt(E(f))) keeping
/// trajectories from R_2 inside R_1 over [0, h].
pub fn ns3d_time_step(e1: f64, e2: f64, sup_sqrt_ef: f64) -> Result<f64, CoreError> {
    if !(e1 > e2 && e2 > 0.0) {
        return Err(CoreError::Precondition(format!("need E1 > E2 > 0, got {e1}, {e2}")));
    }
    if !(sup_sqrt_ef > 0.0) {
        return Err(CoreError::Precondition("need sup sqrt(E(f)) > 0".into()));
    }
    Ok((e1 - e2) / (e1.sqrt() * sup_sqrt_ef))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnstrophyEnergyDelta {
    /// Cut index: the tail sum_{|k| > n} |k|^2 C^2 / |k|^{2s} drops below eps^2/4.
    pub n: u32,
    pub delta: f64,
}

/// delta(C, s, d) such that ||a - b|| < delta on Z(C, s) implies
/// ||a - b||_1 < eps: pick the minimal n with the enstrophy tail below
/// eps^2/4, then delta = eps / (sqrt(2) n).
pub fn enstrophy_energy_delta(
    c: f64,
    s: f64,
    d: usize,
    eps: f64,
) -> Result<EnstrophyEnergyDelta, CoreError> {
    if !(s > d as f64 + 1.0) {
        return Err(CoreError::Precondition(format!("need s > d + 1, got s = {s}")));
    }
    if !(eps > 0.0) || !(c > 0.0) {
        return Err(CoreError::Precondition("need positive C and eps".into()));
    }
    let p = 2.0 * s - 2.0;
    let start = if d == 1 { 1 } else { 2 };
    for n in start..=1_000_000u32 {
        let tail = c * c * lattice_tail_upper(d, p, n as f64);
        if tail < eps * eps / 4.0 {
            return Ok(EnstrophyEnergyDelta { n, delta: eps / (2.0f64.sqrt() * n as f64) });
        }
    }
    Err(CoreError::Precondition("tail cut search exceeded 1e6".into()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonresonanceScan {
    pub min_value: f64,
    pub argmin: ModeIndex,
}

/// min over 0 < |k| <= K of |(k, alpha)| in 2D and its argmin. Values come in
/// conjugate pairs; the representative with k_2 > 0 (or k_2 = 0, k_1 > 0) is
/// reported. For irrational slopes the minimum decays as K grows.
pub fn nonresonance_scan(alpha: [f64; 2], k_radius: u32) -> NonresonanceScan {
    let kr = k_radius as i64;
    let mut best = f64::INFINITY;
    let mut arg = ModeIndex::new_2d(0, 0);
    for k2 in 0..=kr {
        for k1 in -kr..=kr {
            if k2 == 0 && k1 <= 0 {
                continue;
            }
            if k1 * k1 + k2 * k2 > kr * kr {
                continue;
            }
            let v = (k1 as f64 * alpha[0] + k2 as f64 * alpha[1]).abs();
            if v < best {
                best = v;
                arg = ModeIndex::new_2d(k1 as i32, k2 as i32);
            }
        }
    }
    NonresonanceScan { min_value: best, argmin: arg }
}
