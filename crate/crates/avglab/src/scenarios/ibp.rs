//! Integration-by-parts identity for oscillatory forcing of a linear system
//! x' = A x + cos(omega t) v(t): the Duhamel integral computed by direct
//! quadrature must match the integrated-by-parts expression (boundary terms
//! plus two integrals carrying the 1/omega factor).

use avglab_core::bounds::bk_profile;
use avglab_core::linalg::{jacobi_eigen, log_norm_euclidean, Matrix};

use super::{Check, ScenarioResult};

/// Gauss-Legendre 5-point nodes and weights on [-1, 1].
const GL_X: [f64; 5] = [
    -0.906179845938664,
    -0.5384693101056831,
    0.0,
    0.5384693101056831,
    0.906179845938664,
];
const GL_W: [f64; 5] = [
    0.23692688505618908,
    0.47862867049936636,
    0.5688888888888889,
    0.47862867049936636,
    0.23692688505618908,
];

/// Constant symmetric system matrix with its spectral decomposition, so the
/// fundamental matrix M(s) = exp(A s) is available in closed form.
pub struct LinearSystemSpec {
    pub a: Matrix,
    eigvals: Vec<f64>,
    eigvecs: Matrix,
    /// Slowly varying forcing direction v(t) = v0 (1 + depth sin(rate t)).
    pub v0: [f64; 2],
    pub depth: f64,
    pub rate: f64,
}

impl LinearSystemSpec {
    pub fn new(nu: f64, coupling: f64, v0: [f64; 2], depth: f64, rate: f64) -> Self {
        let a = Matrix::from_rows(&[&[-nu, coupling], &[coupling, -nu]]);
        let (eigvals, eigvecs) = jacobi_eigen(&a, true);
        LinearSystemSpec { a, eigvals, eigvecs: eigvecs.unwrap(), v0, depth, rate }
    }

    /// exp(A s) applied to a vector.
    pub fn propagate(&self, s: f64, x: [f64; 2]) -> [f64; 2] {
        let q = &self.eigvecs;
        // Q exp(D s) Q^t x
        let mut y = [0.0; 2];
        for r in 0..2 {
            let qtx: f64 = (0..2).map(|i| q.get(i, r) * x[i]).sum();
            let scaled = (self.eigvals[r] * s).exp() * qtx;
            for i in 0..2 {
                y[i] += q.get(i, r) * scaled;
            }
        }
        y
    }

    pub fn v(&self, t: f64) -> [f64; 2] {
        let f = 1.0 + self.depth * (self.rate * t).sin();
        [self.v0[0] * f, self.v0[1] * f]
    }

    pub fn v_prime(&self, t: f64) -> [f64; 2] {
        let f = self.depth * self.rate * (self.rate * t).cos();
        [self.v0[0] * f, self.v0[1] * f]
    }

    pub fn a_times(&self, x: [f64; 2]) -> [f64; 2] {
        [
            self.a.get(0, 0) * x[0] + self.a.get(0, 1) * x[1],
            self.a.get(1, 0) * x[0] + self.a.get(1, 1) * x[1],
        ]
    }
}

fn norm2(x: [f64; 2]) -> f64 {
    x[0].hypot(x[1])
}

/// Composite Gauss-Legendre quadrature of a vector integrand on [0, h].
fn quad(h: f64, panels: usize, mut f: impl FnMut(f64) -> [f64; 2]) -> [f64; 2] {
    let mut acc = [0.0; 2];
    let w = h / panels as f64;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * w;
        for (x, wt) in GL_X.iter().zip(GL_W.iter()) {
            let s = mid + 0.5 * w * x;
            let val = f(s);
            acc[0] += 0.5 * w * wt * val[0];
            acc[1] += 0.5 * w * wt * val[1];
        }
    }
    acc
}

pub struct IbpPoint {
    pub omega: f64,
    pub direct: [f64; 2],
    pub ibp: [f64; 2],
    pub diff: f64,
    pub magnitude_bound: f64,
}

/// Evaluate the oscillatory Duhamel integral both ways at one frequency.
pub fn run_point(sys: &LinearSystemSpec, omega: f64, t0: f64, h: f64) -> IbpPoint {
    let panels = 64.max((omega.abs() * h * 4.0).ceil() as usize);
    // direct: int_0^h M(h - s) cos(omega (t0 + s)) v(t0 + s) ds
    let direct = quad(h, panels, |s| {
        let c = (omega * (t0 + s)).cos();
        let v = sys.v(t0 + s);
        sys.propagate(h - s, [c * v[0], c * v[1]])
    });
    // integrated by parts with G = sin:
    //   (1/w)[ G(w(t0+h)) v(t0+h) - G(w t0) M(h) v(t0) ]
    // + (1/w) int G(w(t0+s)) M(h-s) A v(t0+s) ds
    // - (1/w) int G(w(t0+s)) M(h-s) v'(t0+s) ds
    let g_end = (omega * (t0 + h)).sin();
    let g_start = (omega * t0).sin();
    let v_end = sys.v(t0 + h);
    let mv0 = sys.propagate(h, sys.v(t0));
    let mut ibp = [
        (g_end * v_end[0] - g_start * mv0[0]) / omega,
        (g_end * v_end[1] - g_start * mv0[1]) / omega,
    ];
    let int_av = quad(h, panels, |s| {
        let g = (omega * (t0 + s)).sin();
        let av = sys.a_times(sys.v(t0 + s));
        sys.propagate(h - s, [g * av[0], g * av[1]])
    });
    let int_vp = quad(h, panels, |s| {
        let g = (omega * (t0 + s)).sin();
        let vp = sys.v_prime(t0 + s);
        sys.propagate(h - s, [g * vp[0], g * vp[1]])
    });
    ibp[0] += (int_av[0] - int_vp[0]) / omega;
    ibp[1] += (int_av[1] - int_vp[1]) / omega;
    let diff = norm2([direct[0] - ibp[0], direct[1] - ibp[1]]);

    // term-by-term magnitude bound of the transformed expression: the whole
    // package carries the 1/omega prefactor
    let l = log_norm_euclidean(&sys.a);
    let c_v = norm2(sys.v0) * (1.0 + sys.depth.abs());
    let c_av = {
        let av = sys.a_times(sys.v0);
        norm2(av) * (1.0 + sys.depth.abs())
    };
    let c_vp = norm2(sys.v0) * (sys.depth * sys.rate).abs();
    let magnitude_bound = bk_profile(c_v, 1.0, c_av, c_vp, 0.0, l, h) / omega.abs();
    IbpPoint { omega, direct, ibp, diff, magnitude_bound }
}

/// Check the identity across frequencies; doubling omega must halve the
/// transformed expression's magnitude bound exactly.
pub fn run(nu: f64, coupling: f64, omegas: &[f64], t0: f64, h: f64, seed: u64) -> ScenarioResult {
    let sys = LinearSystemSpec::new(nu, coupling, [0.8, -0.5], 0.0, 0.0);
    let mut result = ScenarioResult::new(
        "ibp-identity",
        seed,
        serde_json::json!({
            "nu": nu, "coupling": coupling, "omegas": omegas, "t0": t0, "h": h,
            "quad_tolerance": 1e-8,
        }),
    );
    result.columns =
        vec!["omega".into(), "diff".into(), "magnitude_bound".into(), "direct_norm".into()];
    for &omega in omegas {
        let p = run_point(&sys, omega, t0, h);
        result.points.push(vec![omega, p.diff, p.magnitude_bound, norm2(p.direct)]);
        result.push_check(Check::at_most(&format!("ibp_agreement(omega={omega})"), p.diff, 1e-8));
        let p2 = run_point(&sys, 2.0 * omega, t0, h);
        let ratio = p.magnitude_bound / p2.magnitude_bound;
        result.push_check(Check::range(
            &format!("bound_halves(omega={omega})"),
            ratio,
            2.0 - 1e-9,
            2.0 + 1e-9,
        ));
    }
    result
}
