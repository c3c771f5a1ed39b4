//! Lattice sums: the decay sums S_d(p) with certified brackets and the
//! convolution constant estimator C_2(d, gamma).

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::modes::for_each_mode;

/// A two-sided enclosure [lo, hi].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Surface measure of the unit sphere in R^d.
fn sphere_surface(d: usize) -> f64 {
    match d {
        1 => 2.0,
        2 => 2.0 * core::f64::consts::PI,
        3 => 4.0 * core::f64::consts::PI,
        _ => unreachable!(),
    }
}

/// Upper bound for the tail sum_{|k| > radius} 1 / |k|^p over Z^d \ {0}.
///
/// Every unit cell centered at a lattice point with |k| > radius lies in
/// {|x| > radius - sqrt(d)/2} and satisfies |k| >= |x| - sqrt(d)/2, so the sum
/// is dominated by sigma_d * int_{radius - sqrt(d)}^inf (u + sqrt(d)/2)^{d-1} u^{-p} du.
/// In one dimension the sharper integral comparison from `radius` applies.
pub fn lattice_tail_upper(d: usize, p: f64, radius: f64) -> f64 {
    debug_assert!(p > d as f64);
    if d == 1 {
        return 2.0 * radius.powf(1.0 - p) / (p - 1.0);
    }
    let sq = (d as f64).sqrt();
    let r0 = radius - sq;
    assert!(r0 > 0.0, "tail radius too small for the integral comparison");
    let half = 0.5 * sq;
    let mut tail = 0.0;
    // expand (u + half)^{d-1} binomially; each term integrates in closed form
    for j in 0..d {
        let binom = match (d - 1, j) {
            (_, 0) => 1.0,
            (1, 1) => 1.0,
            (2, 1) => 2.0,
            (2, 2) => 1.0,
            _ => unreachable!(),
        };
        let expo = (d - 1 - j) as f64 - p; // u^{d-1-j-p}
        tail += binom * half.powi(j as i32) * r0.powf(expo + 1.0) / -(expo + 1.0);
    }
    sphere_surface(d) * tail
}

/// S_d(p) = 1 + sum_{k != 0} 1/|k|^p as a bracket: the lower end is the
/// truncated sum (every term is positive), the upper end adds the integral
/// tail bound. Truncation grows until the width target is met or the
/// per-dimension cap is reached.
pub fn sum_s(d: usize, p: f64) -> Result<Bracket, CoreError> {
    if !(1..=3).contains(&d) {
        return Err(CoreError::Invalid(alloc::format!("dimension {d} out of range")));
    }
    if p <= d as f64 {
        return Err(CoreError::DivergentSum { d, p });
    }
    let (target, cap) = match d {
        1 => (1e-8, 4_000_000u32),
        2 => (1e-6, 1024),
        3 => (1e-6, 96),
        _ => unreachable!(),
    };
    let mut radius = 16u32;
    loop {
        let tail = lattice_tail_upper(d, p, radius as f64);
        if tail <= target || radius >= cap {
            let mut partial = 0.0;
            if d == 1 {
                // symmetric pair sum, accumulated small-to-large
                let int_p = if p.fract() == 0.0 && p <= 64.0 { Some(p as i32) } else { None };
                for k in (1..=radius as i64).rev() {
                    partial += match int_p {
                        Some(q) => 2.0 / (k as f64).powi(q),
                        None => 2.0 / (k as f64).powf(p),
                    };
                }
            } else {
                for_each_mode(d, radius, |k| {
                    partial += k.norm().powf(-p);
                });
            }
            let lo = 1.0 + partial;
            return Ok(Bracket { lo, hi: lo + tail });
        }
        radius *= 2;
    }
}

/// Truncation radii for the inner convolution sum in `estimate_c2`. Fixed per
/// dimension (independent of the outer radius) so that enlarging the outer
/// scan can only grow the estimate.
pub fn c2_inner_radius(d: usize) -> u32 {
    match d {
        1 => 10_000,
        2 => 128,
        3 => 24,
        _ => unreachable!(),
    }
}

/// Numerical estimate of the convolution constant C_2(d, gamma):
///
///   sup_{0 < |k| <= K} |k|^gamma * sum_{k1 + k2 = k} 1/(|k1|^gamma |k2|^gamma),
///
/// with the convention that |0| is read as 1 inside the convolution, the k1
/// sum truncated at the fixed per-dimension radius plus an integral tail
/// bound. A floating-point diagnostic, not a proof: the sup over |k| <= K is
/// monotone nondecreasing in K and the true constant dominates every
/// truncated value.
pub fn estimate_c2(d: usize, gamma: f64, k_outer: u32) -> Result<f64, CoreError> {
    if !(1..=3).contains(&d) {
        return Err(CoreError::Invalid(alloc::format!("dimension {d} out of range")));
    }
    if gamma <= d as f64 {
        return Err(CoreError::DivergentSum { d, p: gamma });
    }
    let inner = c2_inner_radius(d);
    if k_outer == 0 || k_outer > inner / 2 {
        return Err(CoreError::Invalid(alloc::format!(
            "outer radius {k_outer} must lie in 1..={}",
            inner / 2
        )));
    }
    // tail of the k1 sum: |k1| > inner forces |k - k1| >= inner - |k|
    let tail_sum = lattice_tail_upper(d, gamma, inner as f64);

    let mut sup = 0.0f64;
    if d == 1 {
        // decay table indexed by |k|; entry 0 carries the |0| -> 1 convention
        let tab: alloc::vec::Vec<f64> = (0..=(inner + k_outer) as i64)
            .map(|q| if q == 0 { 1.0 } else { (q as f64).powf(-gamma) })
            .collect();
        for k in (-(k_outer as i64)..=k_outer as i64).filter(|&k| k != 0) {
            let mut conv = tab[k.unsigned_abs() as usize]; // k1 = 0 term
            for k1 in (-(inner as i64)..=inner as i64).filter(|&k1| k1 != 0) {
                conv += tab[k1.unsigned_abs() as usize] * tab[(k - k1).unsigned_abs() as usize];
            }
            let tail = tail_sum / (inner as f64 - k.abs() as f64).powf(gamma);
            let value = (k.abs() as f64).powf(gamma) * (conv + tail);
            sup = sup.max(value);
        }
    } else {
        // decay table indexed by |k|^2
        let max_nsq = (d as i64) * ((inner + k_outer) as i64).pow(2);
        let mut tab = alloc::vec::Vec::with_capacity(max_nsq as usize + 1);
        tab.push(1.0f64);
        for q in 1..=max_nsq {
            tab.push((q as f64).powf(-0.5 * gamma));
        }
        for_each_mode(d, k_outer, |k| {
            let mut conv = tab[k.norm_sq() as usize]; // k1 = 0 term
            for_each_mode(d, inner, |k1| {
                let k2 = k.sub(&k1);
                conv += tab[k1.norm_sq() as usize] * tab[k2.norm_sq() as usize];
            });
            let tail = tail_sum / ((inner as f64 - k.norm()).powf(gamma));
            let value = k.norm().powf(gamma) * (conv + tail);
            sup = sup.max(value);
        });
    }
    Ok(sup)
}
