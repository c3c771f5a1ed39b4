//! Forcing specifications: finitely many forced modes with slow temporal
//! profiles and a power-law decay envelope (A_V, B_V, s_V).

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::model::leray_project;
use crate::modes::{ModeIndex, ModeSet};
use crate::C64;

/// Slow temporal profile of a forced mode; |profile| <= 1 always.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TemporalProfile {
    Constant,
    SlowCosine { omega: f64, phase: f64 },
}

impl TemporalProfile {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            TemporalProfile::Constant => 1.0,
            TemporalProfile::SlowCosine { omega, phase } => (omega * t + phase).cos(),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            TemporalProfile::Constant => 0.0,
            TemporalProfile::SlowCosine { omega, phase } => -omega * (omega * t + phase).sin(),
        }
    }

    pub fn sup_abs(&self) -> f64 {
        1.0
    }

    pub fn sup_abs_derivative(&self) -> f64 {
        match self {
            TemporalProfile::Constant => 0.0,
            TemporalProfile::SlowCosine { omega, .. } => omega.abs(),
        }
    }
}

/// One forced mode: f_k(t) = amplitude * profile(t).
#[derive(Clone, Debug, PartialEq)]
pub struct ForcedMode {
    pub k: ModeIndex,
    pub amplitude: Vec<C64>,
    pub profile: TemporalProfile,
}

impl ForcedMode {
    fn amp_norm(&self) -> f64 {
        self.amplitude.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// The full forcing: a reality-complete list of forced modes plus the decay
/// envelope data (A_V, B_V, s_V) computed at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ForcingSpec {
    dim: usize,
    ncomp: usize,
    modes: Vec<ForcedMode>,
    s_v: f64,
    a_v: f64,
    b_v: f64,
}

impl ForcingSpec {
    /// Empty forcing (f == 0).
    pub fn none(dim: usize, ncomp: usize, s_v: f64) -> Self {
        ForcingSpec { dim, ncomp, modes: Vec::new(), s_v, a_v: 0.0, b_v: 0.0 }
    }

    /// Build a forcing from listed entries.
    ///
    /// The zero mode is rejected (f_0 == 0 is required). For every listed k
    /// the conjugate entry at -k is auto-completed; if both halves are listed
    /// they must be consistent. With `project_incompressible` each amplitude
    /// is Leray-projected onto the plane orthogonal to k. The tightest
    /// envelope constants A_V = sup |k|^{s_V} |f_k(t)| and
    /// B_V = sup |k|^{s_V} |f'_k(t)| are computed for the given s_V.
    pub fn new(
        dim: usize,
        ncomp: usize,
        entries: Vec<ForcedMode>,
        s_v: f64,
        project_incompressible: bool,
    ) -> Result<Self, CoreError> {
        let mut modes: Vec<ForcedMode> = Vec::new();
        for mut e in entries {
            if e.k.is_zero() {
                return Err(CoreError::Invalid("forcing must have f_0 = 0".into()));
            }
            if e.amplitude.len() != ncomp {
                return Err(CoreError::DimensionMismatch(format!(
                    "forced mode amplitude has {} components, expected {ncomp}",
                    e.amplitude.len()
                )));
            }
            if project_incompressible {
                e.amplitude = leray_project(&e.k, &e.amplitude)?;
            }
            if let Some(prev) = modes.iter().find(|m| m.k == e.k) {
                let same = prev.profile == e.profile
                    && prev
                        .amplitude
                        .iter()
                        .zip(e.amplitude.iter())
                        .all(|(a, b)| (a - b).norm() <= 1e-12);
                if !same {
                    return Err(CoreError::Invalid(format!(
                        "conflicting entries for mode {:?}",
                        e.k.components()
                    )));
                }
                continue;
            }
            modes.push(e);
        }
        // complete conjugate halves
        let listed: Vec<ForcedMode> = modes.clone();
        for e in listed {
            let neg = e.k.neg();
            let conj_amp: Vec<C64> = e.amplitude.iter().map(|z| z.conj()).collect();
            if let Some(prev) = modes.iter().find(|m| m.k == neg) {
                let ok = prev.profile == e.profile
                    && prev
                        .amplitude
                        .iter()
                        .zip(conj_amp.iter())
                        .all(|(a, b)| (a - b).norm() <= 1e-12);
                if !ok {
                    return Err(CoreError::Invalid(format!(
                        "entries for {:?} and {:?} violate the reality condition",
                        e.k.components(),
                        neg.components()
                    )));
                }
            } else {
                modes.push(ForcedMode { k: neg, amplitude: conj_amp, profile: e.profile });
            }
        }
        let mut a_v = 0.0f64;
        let mut b_v = 0.0f64;
        for e in &modes {
            let w = e.k.norm().powf(s_v) * e.amp_norm();
            a_v = a_v.max(w * e.profile.sup_abs());
            b_v = b_v.max(w * e.profile.sup_abs_derivative());
        }
        Ok(ForcingSpec { dim, ncomp, modes, s_v, a_v, b_v })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn modes(&self) -> &[ForcedMode] {
        &self.modes
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn s_v(&self) -> f64 {
        self.s_v
    }

    pub fn a_v(&self) -> f64 {
        self.a_v
    }

    pub fn b_v(&self) -> f64 {
        self.b_v
    }

    /// Largest |k| among the forced modes (0 when unforced); the fast phase
    /// in the moving frame oscillates at most at |alpha| times this.
    pub fn max_mode_norm(&self) -> f64 {
        self.modes.iter().map(|e| e.k.norm()).fold(0.0, f64::max)
    }

    /// f_k(t) for a single listed mode.
    pub fn eval_mode(&self, idx: usize, t: f64) -> Vec<C64> {
        let e = &self.modes[idx];
        let s = e.profile.value(t);
        e.amplitude.iter().map(|z| z * s).collect()
    }

    /// Upper bound for sup_t of the forcing energy sum_k |f_k(t)|^2
    /// (per-mode sups; exact for constant profiles).
    pub fn energy_sup(&self) -> f64 {
        self.modes
            .iter()
            .map(|e| (e.amp_norm() * e.profile.sup_abs()).powi(2))
            .sum()
    }

    /// Forcing energy at a fixed time: sum_k |f_k(t)|^2.
    pub fn energy_at(&self, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|e| (e.amp_norm() * e.profile.value(t).abs()).powi(2))
            .sum()
    }

    /// Upper bound for sup_t of the forcing enstrophy sum_k |k|^2 |f_k(t)|^2.
    pub fn enstrophy_sup(&self) -> f64 {
        self.modes
            .iter()
            .map(|e| e.k.norm_sq() as f64 * (e.amp_norm() * e.profile.sup_abs()).powi(2))
            .sum()
    }

    /// Forcing enstrophy at a fixed time.
    pub fn enstrophy_at(&self, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|e| e.k.norm_sq() as f64 * (e.amp_norm() * e.profile.value(t).abs()).powi(2))
            .sum()
    }

    /// sup over listed modes and t of |k|^expo * |f_k(t)| (f vanishes off the
    /// list, so this is the global weighted sup).
    pub fn weighted_sup(&self, expo: f64) -> f64 {
        self.modes
            .iter()
            .map(|e| e.k.norm().powf(expo) * e.amp_norm() * e.profile.sup_abs())
            .fold(0.0, f64::max)
    }

    /// Add the forcing contribution at time `t` into a flat derivative
    /// vector. In the moving frame every mode carries the rapid phase
    /// exp(i (k . alpha) t).
    pub fn accumulate(
        &self,
        t: f64,
        set: &ModeSet,
        moving_phase: Option<&[f64; 3]>,
        out: &mut [C64],
    ) {
        let nc = set.ncomp();
        for e in &self.modes {
            let Some(i) = set.index_of(&e.k) else { continue };
            let mut factor = C64::new(e.profile.value(t), 0.0);
            if let Some(alpha) = moving_phase {
                factor *= C64::new(0.0, e.k.dot(alpha) * t).exp();
            }
            for c in 0..nc.min(e.amplitude.len()) {
                out[i * nc + c] += e.amplitude[c] * factor;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_mode_1d(k: i32, re: f64, im: f64, profile: TemporalProfile) -> ForcedMode {
        ForcedMode { k: ModeIndex::new_1d(k), amplitude: alloc::vec![C64::new(re, im)], profile }
    }

    #[test]
    fn zero_mode_rejected() {
        let r = ForcingSpec::new(
            1,
            1,
            alloc::vec![one_mode_1d(0, 1.0, 0.0, TemporalProfile::Constant)],
            6.0,
            false,
        );
        assert!(r.is_err());
    }

    #[test]
    fn conjugate_half_is_auto_completed() {
        let f = ForcingSpec::new(
            1,
            1,
            alloc::vec![one_mode_1d(1, 0.3, 0.4, TemporalProfile::Constant)],
            6.0,
            false,
        )
        .unwrap();
        assert_eq!(f.modes().len(), 2);
        let neg = f.modes().iter().find(|m| m.k == ModeIndex::new_1d(-1)).unwrap();
        assert!((neg.amplitude[0] - C64::new(0.3, -0.4)).norm() < 1e-15);
        // A_V = |k|^6 |amp| = 0.5
        assert!((f.a_v() - 0.5).abs() < 1e-15);
        assert_eq!(f.b_v(), 0.0);
    }

    #[test]
    fn inconsistent_pair_rejected() {
        let r = ForcingSpec::new(
            1,
            1,
            alloc::vec![
                one_mode_1d(1, 0.3, 0.4, TemporalProfile::Constant),
                one_mode_1d(-1, 0.3, 0.4, TemporalProfile::Constant), // not the conjugate
            ],
            6.0,
            false,
        );
        assert!(r.is_err());
    }

    #[test]
    fn envelope_bounds_hold_along_time() {
        let f = ForcingSpec::new(
            1,
            1,
            alloc::vec![
                one_mode_1d(1, 0.5, 0.25, TemporalProfile::SlowCosine { omega: 0.3, phase: 1.0 }),
                one_mode_1d(2, 0.0, 0.125, TemporalProfile::Constant),
            ],
            6.0,
            false,
        )
        .unwrap();
        for step in 0..400 {
            let t = -20.0 + step as f64 * 0.1;
            for (i, e) in f.modes().iter().enumerate() {
                let val: f64 = f.eval_mode(i, t).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let w = e.k.norm().powf(f.s_v());
                assert!(w * val <= f.a_v() + 1e-12);
                let dval = e.amp_norm() * e.profile.derivative(t).abs();
                assert!(w * dval <= f.b_v() + 1e-12);
            }
        }
    }

    #[test]
    fn nse_amplitudes_are_leray_projected() {
        let f = ForcingSpec::new(
            2,
            2,
            alloc::vec![ForcedMode {
                k: ModeIndex::new_2d(1, 0),
                amplitude: alloc::vec![C64::new(1.0, 0.0), C64::new(0.5, 0.0)],
                profile: TemporalProfile::Constant,
            }],
            7.0,
            true,
        )
        .unwrap();
        for e in f.modes() {
            let dot: C64 = e
                .amplitude
                .iter()
                .enumerate()
                .map(|(c, z)| z * e.k.comp(c) as f64)
                .sum();
            assert!(dot.norm() < 1e-14);
        }
    }
}
