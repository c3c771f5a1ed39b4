//! Wavevector indexing on the symmetric lattice cutoff 0 < |k| <= m.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// A wavevector in Z^d, d in {1, 2, 3}. Trailing unused components are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct ModeIndex([i32; 3]);

impl ModeIndex {
    pub fn new(components: [i32; 3]) -> Self {
        ModeIndex(components)
    }

    pub fn new_1d(k: i32) -> Self {
        ModeIndex([k, 0, 0])
    }

    pub fn new_2d(k1: i32, k2: i32) -> Self {
        ModeIndex([k1, k2, 0])
    }

    pub fn components(&self) -> &[i32; 3] {
        &self.0
    }

    pub fn comp(&self, i: usize) -> i32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    /// Euclidean length |k|.
    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// The paper convention for decay weights: |0| is read as 1.
    pub fn norm_or_one(&self) -> f64 {
        if self.is_zero() {
            1.0
        } else {
            self.norm()
        }
    }

    pub fn neg(&self) -> Self {
        ModeIndex([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn add(&self, other: &ModeIndex) -> Self {
        ModeIndex([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    pub fn sub(&self, other: &ModeIndex) -> Self {
        ModeIndex([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }

    /// Canonical representative of the conjugate pair {k, -k}: the first
    /// nonzero component is positive.
    pub fn is_canonical(&self) -> bool {
        for &c in self.0.iter() {
            if c != 0 {
                return c > 0;
            }
        }
        false
    }

    /// (k . alpha) with alpha given as a padded 3-vector.
    pub fn dot(&self, alpha: &[f64; 3]) -> f64 {
        self.0[0] as f64 * alpha[0] + self.0[1] as f64 * alpha[1] + self.0[2] as f64 * alpha[2]
    }
}

/// Enumerate the lattice {k in Z^d : 0 < |k| <= m}, calling `f` on each k.
pub fn for_each_mode(dim: usize, m: u32, mut f: impl FnMut(ModeIndex)) {
    let m = m as i32;
    let msq = (m as i64) * (m as i64);
    match dim {
        1 => {
            for k in -m..=m {
                if k != 0 {
                    f(ModeIndex::new_1d(k));
                }
            }
        }
        2 => {
            for k1 in -m..=m {
                for k2 in -m..=m {
                    let k = ModeIndex::new_2d(k1, k2);
                    if !k.is_zero() && k.norm_sq() <= msq {
                        f(k);
                    }
                }
            }
        }
        3 => {
            for k1 in -m..=m {
                for k2 in -m..=m {
                    for k3 in -m..=m {
                        let k = ModeIndex::new([k1, k2, k3]);
                        if !k.is_zero() && k.norm_sq() <= msq {
                            f(k);
                        }
                    }
                }
            }
        }
        _ => panic!("dimension must be 1, 2 or 3"),
    }
}

/// The dynamical mode set of a Galerkin projection: all k with 0 < |k| <= m,
/// with O(1) index lookup and a fixed canonical ordering (by |k|^2, then
/// lexicographic).
#[derive(Clone, Debug)]
pub struct ModeSet {
    dim: usize,
    m: u32,
    ncomp: usize,
    modes: Vec<ModeIndex>,
    /// Position+1 in `modes`, 0 if absent; indexed over the cube [-m, m]^dim.
    table: Vec<u32>,
    side: i32,
}

impl ModeSet {
    pub fn new(dim: usize, m: u32, ncomp: usize) -> Self {
        assert!((1..=3).contains(&dim), "dimension must be 1, 2 or 3");
        assert!(m >= 1, "cutoff must be positive");
        let mut modes = Vec::new();
        for_each_mode(dim, m, |k| modes.push(k));
        modes.sort_by(|a, b| {
            (a.norm_sq(), a.components()).cmp(&(b.norm_sq(), b.components()))
        });
        let side = 2 * m as i32 + 1;
        let mut table = vec![0u32; (side as usize).pow(dim as u32)];
        for (i, k) in modes.iter().enumerate() {
            let mut idx = 0usize;
            for c in 0..dim {
                idx = idx * side as usize + (k.comp(c) + m as i32) as usize;
            }
            table[idx] = i as u32 + 1;
        }
        ModeSet { dim, m, ncomp, modes, table, side }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> u32 {
        self.m
    }

    /// Components per mode amplitude (1 for Burgers, d for NSE).
    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[ModeIndex] {
        &self.modes
    }

    pub fn mode(&self, i: usize) -> ModeIndex {
        self.modes[i]
    }

    #[inline]
    pub fn index_of(&self, k: &ModeIndex) -> Option<usize> {
        let m = self.m as i32;
        let mut idx = 0usize;
        for c in 0..self.dim {
            let kc = k.comp(c);
            if kc < -m || kc > m {
                return None;
            }
            idx = idx * self.side as usize + (kc + m) as usize;
        }
        match self.table[idx] {
            0 => None,
            i => Some(i as usize - 1),
        }
    }

    pub fn contains(&self, k: &ModeIndex) -> bool {
        self.index_of(k).is_some()
    }

    /// Indices of the canonical (lexicographically positive) half.
    pub fn canonical_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.modes[i].is_canonical()).collect()
    }
}
