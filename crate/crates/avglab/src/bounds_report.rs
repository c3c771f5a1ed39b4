//! Assemble the named-constant report for a run configuration: trapping and
//! absorbing constants, averaging bounds, sampled contraction radii, and the
//! 3D tail-trapping constants.

use avglab_core::bounds::{
    averaging_delta, burgers_absorbing_sequence, burgers_e1, burgers_trapping_constants,
    enstrophy_energy_delta, estimate_ns_nonlinearity_constant, find_negative_lognorm_radius,
    nonresonance_scan, ns3d_k0, ns3d_time_step, ns3d_trap_c, toy_ode_attractor, trapping_d,
    BoundsReport, LognormScan,
};
use avglab_core::state::EnvelopeBound;
use avglab_core::sums::{estimate_c2, sum_s};
use avglab_core::Model;

use crate::config::Validated;
use crate::scenarios::averaging_gap::default_c_hat;

/// Compute every constant that applies to the configured model and grid.
/// Sampled estimators are tagged non-rigorous in their origin.
pub fn assemble(v: &Validated) -> Result<BoundsReport, String> {
    let mut rep = BoundsReport::default();
    let nu = v.nu;
    rep.push("lambda_1", nu, "linear-decay-rate", &[("nu", nu)]);
    let (c_hat, e_tilde) = default_c_hat(&v.forcing, nu);
    let alpha_max = v.alphas.iter().cloned().fold(0.0f64, f64::max);

    match v.model {
        Model::Burgers => {
            let s = 2.0;
            let e0 = v.forcing.energy_sup() / (nu * nu);
            rep.push("E_0", e0, "trapping-region", &[("nu", nu)]);
            rep.push("E_tilde", e_tilde, "trapping-region", &[("E_0", e0)]);
            let trap = burgers_trapping_constants(e_tilde, s, nu, &v.forcing)
                .map_err(|e| e.to_string())?;
            rep.push("D", trap.d, "trapping-region", &[("s", s)]);
            rep.push("N", trap.n, "trapping-region", &[("E_tilde", e_tilde), ("nu", nu)]);
            rep.push("C_min", trap.c_min, "trapping-region", &[("s", s)]);
            let levels = burgers_absorbing_sequence(e_tilde, nu, &v.forcing, 6, 0.0)
                .map_err(|e| e.to_string())?;
            for l in &levels {
                rep.push(
                    &format!("C_{}", l.i),
                    l.c_i,
                    "absorbing-recursion",
                    &[("s_i", l.s_i), ("D_i", l.d_i)],
                );
            }
            rep.push("C_hat", c_hat, "quadratic-nonlinearity-bound", &[("E_tilde", e_tilde)]);
            for &alpha in &v.alphas {
                let params = v.params_at(alpha);
                if let Ok(delta) = averaging_delta(&v.forcing, 0.0, v.h0, &params, c_hat) {
                    rep.push(
                        &format!("Delta(alpha={alpha})"),
                        delta,
                        "averaging-bound",
                        &[("h0", v.h0), ("l", 0.0)],
                    );
                }
                if let Ok(sqrt_e1) =
                    burgers_e1(v.forcing.a_v(), v.forcing.b_v(), v.forcing.s_v(), nu, alpha, c_hat)
                {
                    rep.push(
                        &format!("sqrt_E_1(alpha={alpha})"),
                        sqrt_e1,
                        "eternal-solution-size",
                        &[("h0", 1.0 / nu)],
                    );
                }
            }
            let scan = LognormScan { samples: 60, seed: v.seed, ..Default::default() };
            let params0 = v.params_at(0.0);
            if let Ok(est) =
                find_negative_lognorm_radius(&params0, EnvelopeBound::new(1.0, 4.0), &scan)
            {
                rep.push(
                    "E_minus",
                    est.e_minus,
                    "log-norm-sample (non-rigorous)",
                    &[("C", 1.0), ("s", 4.0), ("samples", scan.samples as f64)],
                );
                rep.push("mu", est.mu, "log-norm-sample (non-rigorous)", &[("E", est.e_minus)]);
            }
            if alpha_max > 0.0 {
                rep.push(
                    "toy_attractor_abs",
                    toy_ode_attractor(nu, alpha_max).norm(),
                    "toy-attractor",
                    &[("alpha", alpha_max)],
                );
            }
            for p in [v.forcing.s_v() - 1.0, v.forcing.s_v() + 1.0] {
                if let Ok(b) = sum_s(1, p) {
                    rep.push(&format!("S_1({p})"), b.hi, "lattice-sum", &[("width", b.width())]);
                }
            }
        }
        Model::Nse2d => {
            let v_star = v.forcing.enstrophy_sup() / (nu * nu);
            rep.push("V_star", v_star, "enstrophy-decay", &[("nu", nu)]);
            let v0 = (2.0 * v_star).max(1.0);
            rep.push("V_0", v0, "enstrophy-trapping", &[("V_star", v_star)]);
            let gamma = 3.0;
            let c_lemma = estimate_ns_nonlinearity_constant(gamma, 0.5, v0, 1.0, 24, 8, v.seed)
                .map_err(|e| e.to_string())?;
            rep.push(
                "C(1/2,gamma)",
                c_lemma,
                "convolution-sample (non-rigorous)",
                &[("gamma", gamma), ("V_0", v0)],
            );
            let a_gamma = v.forcing.weighted_sup(gamma);
            if let Ok(d_min) = avglab_core::bounds::nse2d_trapping_d(v0, gamma, nu, c_lemma, a_gamma)
            {
                rep.push(
                    "D_min",
                    d_min,
                    "enstrophy-trapping",
                    &[("gamma", gamma), ("A_gamma", a_gamma)],
                );
            }
            for &alpha in &v.alphas {
                let params = v.params_at(alpha);
                if let Ok(delta) = averaging_delta(&v.forcing, 0.0, v.h0, &params, c_hat) {
                    rep.push(
                        &format!("Delta(alpha={alpha})"),
                        delta,
                        "averaging-bound",
                        &[("h0", v.h0)],
                    );
                }
            }
            let scan = nonresonance_scan(v.alpha_dir, v.m);
            rep.push(
                "min_k_dot_alpha",
                scan.min_value,
                "nonresonance-scan",
                &[("K", v.m as f64)],
            );
            if let Ok(d) = enstrophy_energy_delta(1.0, 4.0, 2, 0.1) {
                rep.push(
                    "delta(C=1,s=4,eps=0.1)",
                    d.delta,
                    "enstrophy-energy-bridge",
                    &[("n", d.n as f64)],
                );
            }
            // 3D tail-trapping constants (no 3D trajectories at desk scale)
            let s3 = 7.0;
            let c2 = estimate_c2(3, s3, 6).map_err(|e| e.to_string())?;
            rep.push("C_2(3,7)", c2, "convolution-tail (non-rigorous)", &[("K", 6.0)]);
            let c_max = ns3d_trap_c(nu, s3, 6).map_err(|e| e.to_string())?;
            rep.push("C_max_3d", c_max, "tail-trapping-3d", &[("s", s3)]);
            let s_v3 = s3 + 1.0;
            let k0 = ns3d_k0(nu, s3, s_v3, v.forcing.a_v(), c2).map_err(|e| e.to_string())?;
            rep.push("K_0", k0 as f64, "tail-trapping-3d", &[("s_V", s_v3)]);
            let c_work = 0.5 * c_max;
            let e1 = 0.9 * (c_work / (k0 as f64).powf(s3)).powi(2);
            let sup_sqrt_ef = v.forcing.energy_sup().sqrt();
            if sup_sqrt_ef > 0.0 {
                if let Ok(h) = ns3d_time_step(e1, 0.5 * e1, sup_sqrt_ef) {
                    rep.push(
                        "h_3d",
                        h,
                        "small-step-3d",
                        &[("E_1", e1), ("E_2", 0.5 * e1)],
                    );
                }
            }
            rep.push("D(2)", trapping_d(2.0), "trapping-region", &[("s", 2.0)]);
        }
    }
    rep.validate().map_err(|e| e.to_string())?;
    Ok(rep)
}
