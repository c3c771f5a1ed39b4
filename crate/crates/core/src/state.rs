//! Spectral states: complex Fourier amplitudes on a symmetric mode cutoff.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::modes::{ModeIndex, ModeSet};
use crate::C64;

/// The dynamical variable of a Galerkin projection.
///
/// Amplitudes are stored for every mode with 0 < |k| <= m (both halves of
/// each conjugate pair), so the reality condition u_{-k} = conj(u_k) is a
/// measurable diagnostic rather than a structural identity. The zero mode is
/// held separately in `mean` (the mean velocity; zero in the moving frame).
#[derive(Clone, Debug)]
pub struct SpectralState {
    set: Arc<ModeSet>,
    /// Flat amplitudes, `ncomp` entries per mode, ordered like `set.modes()`.
    amps: Vec<C64>,
    mean: [f64; 3],
}

impl SpectralState {
    pub fn zeros(set: Arc<ModeSet>) -> Self {
        let n = set.len() * set.ncomp();
        SpectralState { set, amps: vec![C64::new(0.0, 0.0); n], mean: [0.0; 3] }
    }

    pub fn from_amplitudes(set: Arc<ModeSet>, amps: Vec<C64>, mean: [f64; 3]) -> Self {
        assert_eq!(amps.len(), set.len() * set.ncomp());
        SpectralState { set, amps, mean }
    }

    pub fn mode_set(&self) -> &Arc<ModeSet> {
        &self.set
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    pub fn ncomp(&self) -> usize {
        self.set.ncomp()
    }

    pub fn mean(&self) -> [f64; 3] {
        self.mean
    }

    pub fn set_mean(&mut self, mean: [f64; 3]) {
        self.mean = mean;
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    /// Amplitude vector of the i-th mode in set order.
    pub fn amp(&self, i: usize) -> &[C64] {
        let nc = self.set.ncomp();
        &self.amps[i * nc..(i + 1) * nc]
    }

    pub fn amp_of(&self, k: &ModeIndex) -> Option<&[C64]> {
        self.set.index_of(k).map(|i| self.amp(i))
    }

    /// Overwrite the amplitude at `k` only.
    pub fn set_amp(&mut self, k: &ModeIndex, value: &[C64]) {
        let nc = self.set.ncomp();
        let i = self.set.index_of(k).expect("mode outside the cutoff");
        self.amps[i * nc..(i + 1) * nc].copy_from_slice(value);
    }

    /// Set the amplitude at `k` and the conjugate at `-k`, preserving reality.
    pub fn set_pair(&mut self, k: &ModeIndex, value: &[C64]) {
        self.set_amp(k, value);
        let conj: Vec<C64> = value.iter().map(|z| z.conj()).collect();
        self.set_amp(&k.neg(), &conj);
    }

    /// Energy excluding the mean: sum over 0 < |k| <= m of |u_k|^2.
    pub fn energy(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Full energy including the mean contribution |u_0|^2.
    pub fn energy_full(&self) -> f64 {
        let mean_sq: f64 = self.mean.iter().map(|&x| x * x).sum();
        self.energy() + mean_sq
    }

    /// l2 norm, the square root of the mean-free energy.
    pub fn l2_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    /// Enstrophy: sum of |k|^2 |u_k|^2. The mean never contributes.
    pub fn enstrophy(&self) -> f64 {
        let nc = self.set.ncomp();
        let mut v = 0.0;
        for (i, k) in self.set.modes().iter().enumerate() {
            let w = k.norm_sq() as f64;
            for c in 0..nc {
                v += w * self.amps[i * nc + c].norm_sqr();
            }
        }
        v
    }

    /// Largest violation of the reality condition: max_k |u_k - conj(u_{-k})|.
    pub fn reality_defect(&self) -> f64 {
        let nc = self.set.ncomp();
        let mut worst = 0.0f64;
        for (i, k) in self.set.modes().iter().enumerate() {
            let j = self.set.index_of(&k.neg()).expect("symmetric cutoff");
            let mut d2 = 0.0;
            for c in 0..nc {
                d2 += (self.amps[i * nc + c] - self.amps[j * nc + c].conj()).norm_sqr();
            }
            worst = worst.max(d2.sqrt());
        }
        worst
    }

    /// Triangle-inequality upper bound for ||grad u||_inf:
    /// sum over modes, components j and directions l of |k_l| |u_k^j|.
    pub fn grad_supnorm_bound(&self) -> f64 {
        let nc = self.set.ncomp();
        let dim = self.set.dim();
        let mut bound = 0.0;
        for (i, k) in self.set.modes().iter().enumerate() {
            let klsum: f64 = (0..dim).map(|l| (k.comp(l).abs()) as f64).sum();
            for c in 0..nc {
                bound += klsum * self.amps[i * nc + c].norm();
            }
        }
        bound
    }

    /// max over modes of |k|^s |u_k| (decay-envelope residual).
    pub fn envelope_weighted_max(&self, s: f64) -> f64 {
        let nc = self.set.ncomp();
        let mut worst = 0.0f64;
        for (i, k) in self.set.modes().iter().enumerate() {
            let mut a2 = 0.0;
            for c in 0..nc {
                a2 += self.amps[i * nc + c].norm_sqr();
            }
            worst = worst.max(k.norm().powf(s) * a2.sqrt());
        }
        worst
    }

    /// Largest violation of incompressibility: max_k |(u_k, k)| (NSE states).
    pub fn divergence_defect(&self) -> f64 {
        let nc = self.set.ncomp();
        let mut worst = 0.0f64;
        for (i, k) in self.set.modes().iter().enumerate() {
            let mut dot = C64::new(0.0, 0.0);
            for c in 0..nc {
                dot += self.amps[i * nc + c] * k.comp(c) as f64;
            }
            worst = worst.max(dot.norm());
        }
        worst
    }

    /// The conjugate-flip v_k = conj(u_{-k}); the identity on reality states.
    pub fn conj_flip(&self) -> SpectralState {
        let nc = self.set.ncomp();
        let mut out = self.clone();
        for (i, k) in self.set.modes().iter().enumerate() {
            let j = self.set.index_of(&k.neg()).unwrap();
            for c in 0..nc {
                out.amps[i * nc + c] = self.amps[j * nc + c].conj();
            }
        }
        out
    }

    /// l2 distance between the mode amplitudes of two states on the same set.
    pub fn distance(&self, other: &SpectralState) -> f64 {
        assert_eq!(self.amps.len(), other.amps.len());
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// A power-law decay envelope |a_k| <= C / |k|^s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeBound {
    pub c: f64,
    pub s: f64,
}

impl EnvelopeBound {
    pub fn new(c: f64, s: f64) -> Self {
        assert!(c >= 0.0, "envelope constant must be nonnegative");
        EnvelopeBound { c, s }
    }

    pub fn at(&self, k: &ModeIndex) -> f64 {
        self.c / k.norm_or_one().powf(self.s)
    }

    /// Largest ratio |u_k| / (C / |k|^s); <= 1 means the state is inside.
    pub fn violation(&self, state: &SpectralState) -> f64 {
        let nc = state.ncomp();
        let mut worst = 0.0f64;
        for (i, k) in state.mode_set().modes().iter().enumerate() {
            let mut a2 = 0.0;
            for c in 0..nc {
                a2 += state.amplitudes()[i * nc + c].norm_sqr();
            }
            worst = worst.max(a2.sqrt() / self.at(k));
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng64;

    fn random_real_state(set: Arc<ModeSet>, seed: u64) -> SpectralState {
        let mut rng = Rng64::new(seed);
        let mut st = SpectralState::zeros(set.clone());
        let nc = set.ncomp();
        for i in set.canonical_indices() {
            let k = set.mode(i);
            let v: Vec<C64> = (0..nc).map(|_| rng.complex_ball(1.0)).collect();
            st.set_pair(&k, &v);
        }
        st
    }

    #[test]
    fn two_half_modes_carry_energy_half() {
        let set = Arc::new(ModeSet::new(1, 4, 1));
        let mut st = SpectralState::zeros(set);
        st.set_pair(&ModeIndex::new_1d(1), &[C64::new(0.5, 0.0)]);
        assert!((st.energy() - 0.5).abs() < 1e-15);
        assert_eq!(SpectralState::zeros(st.mode_set().clone()).energy(), 0.0);
    }

    #[test]
    fn energy_matches_independent_reversed_sum() {
        let set = Arc::new(ModeSet::new(2, 6, 2));
        let st = random_real_state(set, 42);
        // independent loop order: reversed, component-major
        let nc = st.ncomp();
        let mut e = 0.0;
        for c in (0..nc).rev() {
            for i in (0..st.mode_set().len()).rev() {
                let z = st.amplitudes()[i * nc + c];
                e += z.re * z.re + z.im * z.im;
            }
        }
        let rel = (st.energy() - e).abs() / e;
        assert!(rel < 1e-15, "rel = {rel}");
    }

    #[test]
    fn enstrophy_of_unit_pair_and_scaling() {
        let set = Arc::new(ModeSet::new(2, 4, 2));
        let mut st = SpectralState::zeros(set.clone());
        let isq = 1.0 / 2.0f64.sqrt();
        st.set_pair(&ModeIndex::new_2d(1, 0), &[C64::new(0.0, 0.0), C64::new(0.0, isq)]);
        assert!((st.enstrophy() - 1.0).abs() < 1e-15);
        assert!((st.energy() - 1.0).abs() < 1e-15);

        // single pair at |k| = 3 in 1D: V = 9 E
        let set1 = Arc::new(ModeSet::new(1, 4, 1));
        let mut st1 = SpectralState::zeros(set1);
        st1.set_pair(&ModeIndex::new_1d(3), &[C64::new(0.2, 0.7)]);
        assert!((st1.enstrophy() - 9.0 * st1.energy()).abs() < 1e-13);
    }

    #[test]
    fn enstrophy_matches_bruteforce(){
        let set = Arc::new(ModeSet::new(2, 5, 2));
        let st = random_real_state(set, 7);
        let nc = st.ncomp();
        let mut v = 0.0;
        for (i, k) in st.mode_set().modes().iter().enumerate() {
            for c in 0..nc {
                let z = st.amplitudes()[i * nc + c];
                v += (k.norm() * z.norm()).powi(2);
            }
        }
        assert!((st.enstrophy() - v).abs() <= 1e-12 * v.max(1.0));
    }

    #[test]
    fn reality_defect_detects_violations() {
        let set = Arc::new(ModeSet::new(1, 2, 1));
        let mut st = SpectralState::zeros(set);
        // cosine field: u_1 = u_{-1} = 0.5 real
        st.set_pair(&ModeIndex::new_1d(1), &[C64::new(0.5, 0.0)]);
        assert!(st.reality_defect() <= 1e-15);

        // u_1 = i, u_{-1} = i violates: |i - conj(i)| = 2
        st.set_amp(&ModeIndex::new_1d(1), &[C64::new(0.0, 1.0)]);
        st.set_amp(&ModeIndex::new_1d(-1), &[C64::new(0.0, 1.0)]);
        assert!((st.reality_defect() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn energies_invariant_under_conj_flip() {
        // also on states that deliberately violate reality
        let set = Arc::new(ModeSet::new(2, 4, 2));
        let mut rng = Rng64::new(3);
        let mut st = SpectralState::zeros(set.clone());
        for z in st.amplitudes_mut() {
            *z = rng.complex_ball(1.0);
        }
        let flip = st.conj_flip();
        assert!((st.energy() - flip.energy()).abs() < 1e-12 * st.energy());
        assert!((st.enstrophy() - flip.enstrophy()).abs() < 1e-12 * st.enstrophy());
    }

    #[test]
    fn enstrophy_dominates_energy() {
        for seed in 0..5u64 {
            let set = Arc::new(ModeSet::new(2, 5, 2));
            let st = random_real_state(set, seed);
            assert!(st.enstrophy() >= st.energy() - 1e-12);
        }
    }

    #[test]
    fn grad_bound_single_cosine() {
        // u(x) = 2 cos x: u_1 = u_{-1} = 1; sup |u_x| = 2 and the bound is 2.
        let set = Arc::new(ModeSet::new(1, 3, 1));
        let mut st = SpectralState::zeros(set);
        st.set_pair(&ModeIndex::new_1d(1), &[C64::new(1.0, 0.0)]);
        assert!((st.grad_supnorm_bound() - 2.0).abs() < 1e-15);
        assert_eq!(SpectralState::zeros(st.mode_set().clone()).grad_supnorm_bound(), 0.0);
    }

    #[test]
    fn grad_bound_dominates_grid_sup_2d() {
        let m = 4u32;
        let set = Arc::new(ModeSet::new(2, m, 2));
        let st = random_real_state(set.clone(), 11);
        let bound = st.grad_supnorm_bound();
        // grid oracle: evaluate sum_{j,l} sup |d u^j / d x_l| on a 256^2 grid
        let n = 256usize;
        let nc = set.ncomp();
        let phase = |g: usize, k: i32| -> C64 {
            C64::new(0.0, k as f64 * 2.0 * core::f64::consts::PI * g as f64 / n as f64).exp()
        };
        let mut sup = vec![0.0f64; nc * 2];
        for gx in 0..n {
            let px: Vec<C64> = (-(m as i32)..=m as i32).map(|k| phase(gx, k)).collect();
            for gy in 0..n {
                let py: Vec<C64> = (-(m as i32)..=m as i32).map(|k| phase(gy, k)).collect();
                for j in 0..nc {
                    for l in 0..2usize {
                        let mut d = C64::new(0.0, 0.0);
                        for (i, k) in set.modes().iter().enumerate() {
                            let e = px[(k.comp(0) + m as i32) as usize]
                                * py[(k.comp(1) + m as i32) as usize];
                            d += C64::new(0.0, k.comp(l) as f64) * st.amplitudes()[i * nc + j] * e;
                        }
                        sup[j * 2 + l] = sup[j * 2 + l].max(d.re.abs());
                    }
                }
            }
        }
        let grid_norm: f64 = sup.iter().sum();
        assert!(
            bound >= grid_norm - 1e-10,
            "bound {bound} < grid sup {grid_norm}"
        );
    }
}
