//! Closed-form thermodynamics of the incompressible/compressible mixture.
//!
//! The mixture energy is
//! `U(τ,c) = Û(τ,c) + W(c,θ)`, `Û(τ,c) = (1-c)·f((τ-cτ₁)/(1-c))`,
//! with `f = -log` by default. Pressure and transformation rate derive as
//! `p = -U_τ`, `q = -U_c`. The Gibbs potential `Ĝ(p,c)` is the Legendre
//! transform of `Û` in `τ` and is affine in `c`.

use crate::error::{Error, Result};
use crate::params::{ModelParams, Phase2EnergySpec};
use crate::rootfind;

/// Inputs closer than this to the `τ = cτ₁` or `c ∈ {0,1}` singularities
/// are rejected rather than evaluated.
pub const DOMAIN_GUARD: f64 = 1e-12;

/// Checks `τ > cτ₁` and `c ∈ (0,1)` with the guard band.
pub fn check_domain(tau: f64, c: f64, params: &ModelParams) -> Result<()> {
    if !(c > DOMAIN_GUARD && 1.0 - c > DOMAIN_GUARD) {
        return Err(Error::domain(format!("c = {c} outside (0,1)")));
    }
    if !(tau - c * params.tau1 > DOMAIN_GUARD) {
        return Err(Error::domain(format!(
            "tau = {tau} with c = {c}: tau - c*tau1 = {} not positive",
            tau - c * params.tau1
        )));
    }
    Ok(())
}

/// Mixture energy `Û(τ,c)` without the mixing term.
pub fn u_hat(tau: f64, c: f64, params: &ModelParams) -> Result<f64> {
    check_domain(tau, c, params)?;
    let tau2 = (tau - c * params.tau1) / (1.0 - c);
    Ok((1.0 - c) * params.f_spec.f(tau2))
}

/// Mixing energy and its first two `c`-derivatives, `(W, W_c, W_cc)`.
pub fn mixing_w(c: f64, theta: f64, params: &ModelParams) -> Result<(f64, f64, f64)> {
    if !(c > DOMAIN_GUARD && 1.0 - c > DOMAIN_GUARD) {
        return Err(Error::domain(format!("c = {c} outside (0,1)")));
    }
    Ok(params.w_spec.eval(c, theta, params.theta_star))
}

/// Full internal energy `U(τ,c) = Û + W` (test oracle entry point).
pub fn internal_energy(tau: f64, c: f64, theta: f64, params: &ModelParams) -> Result<f64> {
    Ok(u_hat(tau, c, params)? + mixing_w(c, theta, params)?.0)
}

/// Pressure `p(ρ,c) = -U_τ`. Closed form `(1-c)/(τ-cτ₁)` for `-log`.
pub fn pressure(rho: f64, c: f64, params: &ModelParams) -> Result<f64> {
    let tau = 1.0 / rho;
    check_domain(tau, c, params)?;
    let tau2 = (tau - c * params.tau1) / (1.0 - c);
    Ok(-params.f_spec.df(tau2))
}

/// Pressure with its state derivatives, `(p, ∂p/∂ρ|_c, ∂p/∂c|_ρ)`.
pub fn pressure_derivs(rho: f64, c: f64, params: &ModelParams) -> Result<(f64, f64, f64)> {
    let tau = 1.0 / rho;
    check_domain(tau, c, params)?;
    let omc = 1.0 - c;
    let tau2 = (tau - c * params.tau1) / omc;
    let ddf = params.f_spec.ddf(tau2);
    let p = -params.f_spec.df(tau2);
    // p_τ = -f''(τ₂)/(1-c); p_ρ = -τ² p_τ.
    let p_tau = -ddf / omc;
    let p_rho = -tau * tau * p_tau;
    let p_c = -ddf * (tau - params.tau1) / (omc * omc);
    Ok((p, p_rho, p_c))
}

/// Squared isothermal sound speed `∂p/∂ρ` at fixed `c`.
pub fn sound_speed_sq(rho: f64, c: f64, params: &ModelParams) -> Result<f64> {
    Ok(pressure_derivs(rho, c, params)?.1)
}

/// Transformation rate `q(ρ,c) = -U_c`.
pub fn reaction_q(rho: f64, c: f64, theta: f64, params: &ModelParams) -> Result<f64> {
    let tau = 1.0 / rho;
    check_domain(tau, c, params)?;
    let omc = 1.0 - c;
    let tau2 = (tau - c * params.tau1) / omc;
    let (_, wc, _) = mixing_w(c, theta, params)?;
    Ok(params.f_spec.f(tau2) - params.f_spec.df(tau2) * (tau - params.tau1) / omc - wc)
}

/// Transformation rate with state derivatives, `(q, ∂q/∂ρ|_c, ∂q/∂c|_ρ)`.
pub fn reaction_q_derivs(
    rho: f64,
    c: f64,
    theta: f64,
    params: &ModelParams,
) -> Result<(f64, f64, f64)> {
    let tau = 1.0 / rho;
    check_domain(tau, c, params)?;
    let omc = 1.0 - c;
    let tau2 = (tau - c * params.tau1) / omc;
    let f = &params.f_spec;
    let (_, wc, wcc) = mixing_w(c, theta, params)?;
    let q = f.f(tau2) - f.df(tau2) * (tau - params.tau1) / omc - wc;
    let ddf = f.ddf(tau2);
    let dt1 = tau - params.tau1;
    // q_τ = -f''(τ₂)(τ-τ₁)/(1-c)²; q_ρ = -τ² q_τ.
    let q_tau = -ddf * dt1 / (omc * omc);
    let q_rho = -tau * tau * q_tau;
    let q_c = -ddf * dt1 * dt1 / (omc * omc * omc) - wcc;
    Ok((q, q_rho, q_c))
}

/// Gibbs potential `Ĝ(p,c) = min_τ [Û(τ,c) + pτ]`.
///
/// Closed form `(1-c)(1+log p) + cpτ₁` for `-log`; numeric Legendre
/// transform for a custom phase-2 energy.
pub fn gibbs_hat(p: f64, c: f64, params: &ModelParams) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain(format!("p = {p} must be positive")));
    }
    if !(c > DOMAIN_GUARD && 1.0 - c > DOMAIN_GUARD) {
        return Err(Error::domain(format!("c = {c} outside (0,1)")));
    }
    match &params.f_spec {
        Phase2EnergySpec::NegLog => Ok((1.0 - c) * (1.0 + p.ln()) + c * p * params.tau1),
        Phase2EnergySpec::Custom(_) => legendre_gibbs(&params.f_spec, p, c, params),
    }
}

/// Full Gibbs potential `G(p,c,θ) = Ĝ + W`.
pub fn gibbs(p: f64, c: f64, theta: f64, params: &ModelParams) -> Result<f64> {
    Ok(gibbs_hat(p, c, params)? + mixing_w(c, theta, params)?.0)
}

/// `c`-derivative of `G` at fixed pressure: `G_c = Ĝ_c + W_c`.
///
/// `Ĝ_c` is `c`-independent by the envelope identity
/// `Ĝ_c = pτ₁ - f(τ₂*) - pτ₂*` with `f'(τ₂*) = -p`.
pub fn gibbs_c(p: f64, c: f64, theta: f64, params: &ModelParams) -> Result<f64> {
    let (_, wc, _) = mixing_w(c, theta, params)?;
    Ok(gibbs_hat_c(p, params)? + wc)
}

/// The `c`-independent part `Ĝ_c(p)`; `τ₁p - log p - 1` for `-log`.
pub fn gibbs_hat_c(p: f64, params: &ModelParams) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain(format!("p = {p} must be positive")));
    }
    match &params.f_spec {
        Phase2EnergySpec::NegLog => Ok(params.tau1 * p - p.ln() - 1.0),
        Phase2EnergySpec::Custom(_) => {
            let tau2 = tau2_of_pressure(&params.f_spec, p, params.tau1)?;
            Ok(p * params.tau1 - params.f_spec.f(tau2) - p * tau2)
        }
    }
}

/// Legendre inverse `τ(p,c) = Ĝ_p = cτ₁ + (1-c)τ₂*(p)`.
pub fn tau_of(p: f64, c: f64, params: &ModelParams) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::domain(format!("p = {p} must be positive")));
    }
    if !(c > DOMAIN_GUARD && 1.0 - c > DOMAIN_GUARD) {
        return Err(Error::domain(format!("c = {c} outside (0,1)")));
    }
    match &params.f_spec {
        Phase2EnergySpec::NegLog => Ok(c * params.tau1 + (1.0 - c) / p),
        Phase2EnergySpec::Custom(_) => {
            let tau2 = tau2_of_pressure(&params.f_spec, p, params.tau1)?;
            Ok(c * params.tau1 + (1.0 - c) * tau2)
        }
    }
}

/// The critical pressure `p*`: the unique root in `(0,1)` of `Ĝ_c(p) = 0`
/// (`τ₁p - log p - 1 = 0` for `-log`).
pub fn critical_pressure(params: &ModelParams) -> Result<f64> {
    params.validate()?;
    match &params.f_spec {
        Phase2EnergySpec::NegLog => {
            let tau1 = params.tau1;
            let g = |p: f64| (tau1 * p - p.ln() - 1.0, tau1 - 1.0 / p);
            // g(0+) = +inf, g(1) = τ₁ - 1 < 0: sign change guaranteed.
            let coarse = rootfind::bisect(|p| g(p).0, 1e-12, 1.0, 1e-6)?;
            let p = rootfind::newton_bracketed(g, 1e-12, 1.0, coarse, 1e-14)?;
            let residual = g(p).0.abs();
            if residual > 1e-12 {
                return Err(Error::convergence(format!(
                    "critical pressure residual {residual} > 1e-12"
                )));
            }
            Ok(p)
        }
        Phase2EnergySpec::Custom(_) => {
            let g = |p: f64| gibbs_hat_c(p, params).unwrap_or(f64::NAN);
            let coarse = rootfind::bisect(g, 1e-9, 1.0 - 1e-12, 1e-14)?;
            Ok(coarse)
        }
    }
}

/// The convexity indicator `Δ = U_ττ U_cc - U_cτ²` by centered finite
/// differences of `U`, together with the structural sign checks
/// `sgn Δ = sgn W_cc` and `Ĝ_cc = 0`.
pub fn delta_identity(
    tau: f64,
    c: f64,
    theta: f64,
    params: &ModelParams,
) -> Result<(f64, bool)> {
    check_domain(tau, c, params)?;
    let h = 1e-4;
    let u = |t: f64, cc: f64| internal_energy(t, cc, theta, params);
    let u0 = u(tau, c)?;
    let u_tt = (u(tau + h, c)? - 2.0 * u0 + u(tau - h, c)?) / (h * h);
    let u_cc = (u(tau, c + h)? - 2.0 * u0 + u(tau, c - h)?) / (h * h);
    let u_tc = (u(tau + h, c + h)? - u(tau + h, c - h)? - u(tau - h, c + h)?
        + u(tau - h, c - h)?)
        / (4.0 * h * h);
    let delta = u_tt * u_cc - u_tc * u_tc;

    let (_, _, wcc) = mixing_w(c, theta, params)?;
    // FD truncation/roundoff deadband for sign comparison near Δ = 0.
    let band = 1e-5 * (1.0 + u_tt.abs());
    let sgn = |x: f64| {
        if x.abs() <= band {
            0i8
        } else {
            x.signum() as i8
        }
    };
    let sign_ok = sgn(delta) == sgn(wcc);

    // Ĝ affine in c at fixed p: second c-difference vanishes.
    let p = pressure(1.0 / tau, c, params)?;
    let gh = |cc: f64| gibbs_hat(p, cc, params);
    let g_cc = (gh(c + h)? - 2.0 * gh(c)? + gh(c - h)?) / (h * h);
    let gibbs_flat = g_cc.abs() <= 1e-6;

    Ok((delta, sign_ok && gibbs_flat))
}

/// Solves `f'(τ₂) = -p` on `(τ₁, ∞)`; the minimizer of the Legendre
/// transform. Fails with a range error when `p` is outside `(-f'(∞), -f'(τ₁⁺))`.
fn tau2_of_pressure(f_spec: &Phase2EnergySpec, p: f64, tau1: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Range(format!("p = {p} not in the range of -f'")));
    }
    let g = |t: f64| f_spec.df(t) + p;
    // g is strictly increasing (f'' > 0). Find a bracket by expansion.
    let lo = tau1 * (1.0 + 1e-9) + 1e-12;
    if g(lo) >= 0.0 {
        return Err(Error::Range(format!("p = {p} >= -f'(tau1+): no minimizer")));
    }
    let mut hi = tau1 + 1.0;
    let mut iter = 0;
    while g(hi) <= 0.0 {
        hi *= 2.0;
        iter += 1;
        if iter > 60 {
            return Err(Error::Range(format!("p = {p} <= -f'(inf): no minimizer")));
        }
    }
    rootfind::newton_bracketed(
        |t| (f_spec.df(t) + p, f_spec.ddf(t)),
        lo,
        hi,
        0.5 * (lo + hi),
        1e-13 * (1.0 + p),
    )
}

/// Numeric Legendre transform `Ĝ(p,c) = min_{τ₂} [(1-c)f(τ₂) + p(cτ₁+(1-c)τ₂)]`.
pub fn legendre_gibbs(
    f_spec: &Phase2EnergySpec,
    p: f64,
    c: f64,
    params: &ModelParams,
) -> Result<f64> {
    if !(c > DOMAIN_GUARD && 1.0 - c > DOMAIN_GUARD) {
        return Err(Error::domain(format!("c = {c} outside (0,1)")));
    }
    let tau2 = tau2_of_pressure(f_spec, p, params.tau1)?;
    Ok((1.0 - c) * f_spec.f(tau2) + p * (c * params.tau1 + (1.0 - c) * tau2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Phase2Energy;
    use std::sync::Arc;

    fn params() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn u_hat_pure_phase2_limit() {
        // c -> 0+: Û -> -log τ.
        let v = u_hat(1.5, 1e-9, &params()).unwrap();
        assert!((v - (-(1.5f64.ln()))).abs() < 1e-8, "{v}");
    }

    #[test]
    fn u_hat_mixture_value() {
        let v = u_hat(1.0, 0.5, &params()).unwrap();
        let expect = -0.5 * (0.75f64 / 0.5).ln();
        assert!((v - expect).abs() < 1e-14);
        // Cross-check against the mixture form cU₁ + (1-c)U₂ with τ₂ = 1.5.
        let mix = 0.5 * 0.0 + 0.5 * (-(1.5f64).ln());
        assert!((v - mix).abs() < 1e-14);
    }

    #[test]
    fn u_hat_domain_error() {
        assert!(matches!(u_hat(0.25, 0.5, &params()), Err(Error::Domain(_))));
    }

    #[test]
    fn mixing_w_examples() {
        let p = params();
        let (w, wc, wcc) = mixing_w(0.5, p.theta_star, &p).unwrap();
        assert_eq!((w, wc, wcc), (0.0, 0.0, 0.0));

        let (w, wc, _) = mixing_w(0.3, p.theta_star - 0.08, &p).unwrap();
        assert!((w - (-0.0016)).abs() < 1e-15, "{w}");
        assert!(wc.abs() < 1e-15, "{wc}");

        let (_, _, wcc) = mixing_w(0.5, p.theta_star + 0.16, &p).unwrap();
        assert!((wcc - 0.32).abs() < 1e-15);

        assert!(mixing_w(1.2, p.theta_star, &p).is_err());
    }

    #[test]
    fn pressure_ideal_gas_limit() {
        let v = pressure(0.5, 1e-12 * 2.0, &params()).unwrap();
        assert!((v - 0.5).abs() < 1e-9, "{v}");
    }

    #[test]
    fn pressure_mixture_value() {
        let v = pressure(1.0, 0.5, &params()).unwrap();
        assert!((v - 0.5 / 0.75).abs() < 1e-14);
    }

    #[test]
    fn reaction_q_closed_form_value() {
        let p = params();
        let q = reaction_q(1.0, 0.5, p.theta_star, &p).unwrap();
        let expect = -((0.75f64 / 0.5).ln()) + 0.5 / 0.75;
        assert!((q - expect).abs() < 1e-14, "{q} vs {expect}");
    }

    #[test]
    fn reaction_q_guard_band() {
        // τ = cτ₁ + guard/2 is inside the rejection band.
        let p = params();
        let c = 0.5;
        let tau = c * p.tau1 + 5e-13;
        assert!(matches!(
            reaction_q(1.0 / tau, c, p.theta_star, &p),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn gibbs_hat_value() {
        let v = gibbs_hat(1.0, 0.5, &params()).unwrap();
        assert!((v - 0.75).abs() < 1e-15);
        assert!(gibbs_hat(-1.0, 0.5, &params()).is_err());
    }

    #[test]
    fn gibbs_hat_at_critical_pressure_is_c_independent() {
        let p = params();
        let ps = critical_pressure(&p).unwrap();
        let a = gibbs_hat(ps, 0.1, &p).unwrap();
        let b = gibbs_hat(ps, 0.9, &p).unwrap();
        assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        assert!((a - p.tau1 * ps).abs() <= 1e-12);
    }

    #[test]
    fn tau_of_maxwell_under_state() {
        let p = params();
        let ps = critical_pressure(&p).unwrap();
        let t = tau_of(ps, 0.3, &p).unwrap();
        assert!((t - (0.15 + 0.7 / ps)).abs() < 1e-14);
        assert!((t - 1.65891).abs() < 1e-4, "{t}");
    }

    #[test]
    fn critical_pressure_against_bisection_oracle() {
        let mut p = params();
        for (tau1, approx) in [(0.5, 0.46391), (0.2, 0.3985)] {
            p.tau1 = tau1;
            let ps = critical_pressure(&p).unwrap();
            let oracle =
                rootfind::bisect(|x| tau1 * x - x.ln() - 1.0, 1e-6, 1.0, 1e-14).unwrap();
            assert!((ps - oracle).abs() < 1e-10, "tau1={tau1}: {ps} vs {oracle}");
            assert!((ps - approx).abs() < 1e-3);
            assert!((tau1 * ps - ps.ln() - 1.0).abs() <= 1e-12);
            assert!(ps > 0.0 && ps < 1.0);
        }
    }

    #[test]
    fn critical_pressure_near_unit_tau1() {
        let mut p = params();
        p.tau1 = 0.999;
        let ps = critical_pressure(&p).unwrap();
        assert!((ps - 1.0).abs() < 0.01, "{ps}");
    }

    #[test]
    fn delta_identity_three_regimes() {
        let p = params();
        let th = p.theta_star;
        let (d, ok) = delta_identity(1.2, 0.4, th + 0.16, &p).unwrap();
        assert!(d > 0.0 && ok, "convex: d={d}, ok={ok}");
        let (d, ok) = delta_identity(1.2, 0.5, th - 0.08, &p).unwrap();
        assert!(d < 0.0 && ok, "spinodal: d={d}, ok={ok}");
        let (d, ok) = delta_identity(1.2, 0.5, th, &p).unwrap();
        assert!(d.abs() < 1e-4 && ok, "critical: d={d}, ok={ok}");
    }

    struct Inverse;
    impl Phase2Energy for Inverse {
        fn f(&self, t: f64) -> f64 {
            1.0 / t
        }
        fn df(&self, t: f64) -> f64 {
            -1.0 / (t * t)
        }
        fn ddf(&self, t: f64) -> f64 {
            2.0 / (t * t * t)
        }
    }

    #[test]
    fn legendre_gibbs_neg_log_matches_closed_form() {
        let p = params();
        let v = legendre_gibbs(&Phase2EnergySpec::NegLog, 1.0, 0.5, &p).unwrap();
        assert!((v - 0.75).abs() < 1e-10, "{v}");
    }

    #[test]
    fn legendre_gibbs_inverse_energy_hand_value() {
        // f(τ) = 1/τ, p = 0.25: minimizer τ₂ = 2, value 0.5625.
        let p = params();
        let spec = Phase2EnergySpec::Custom(Arc::new(Inverse));
        let v = legendre_gibbs(&spec, 0.25, 0.5, &p).unwrap();
        assert!((v - 0.5625).abs() < 1e-12, "{v}");

        // Dense 1D scan oracle over τ₂.
        let mut best = f64::INFINITY;
        let mut t = p.tau1 + 1e-4;
        while t < 40.0 {
            let val = 0.5 * (1.0 / t) + 0.25 * (0.25 + 0.5 * t);
            best = best.min(val);
            t += 1e-4;
        }
        assert!((v - best).abs() < 1e-8, "{v} vs scan {best}");
    }

    #[test]
    fn legendre_gibbs_range_error_at_zero_pressure() {
        let p = params();
        assert!(matches!(
            legendre_gibbs(&Phase2EnergySpec::NegLog, 0.0, 0.5, &p),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn custom_spec_agrees_with_neg_log_everywhere() {
        struct NegLogF;
        impl Phase2Energy for NegLogF {
            fn f(&self, t: f64) -> f64 {
                -t.ln()
            }
            fn df(&self, t: f64) -> f64 {
                -1.0 / t
            }
            fn ddf(&self, t: f64) -> f64 {
                1.0 / (t * t)
            }
        }
        let p = params();
        let mut pc = params();
        pc.f_spec = Phase2EnergySpec::Custom(Arc::new(NegLogF));
        for &(rho, c) in &[(0.7, 0.3), (1.1, 0.6), (0.9, 0.45)] {
            let a = pressure(rho, c, &p).unwrap();
            let b = pressure(rho, c, &pc).unwrap();
            assert!((a - b).abs() < 1e-12);
            let a = reaction_q(rho, c, p.theta_star - 0.05, &p).unwrap();
            let b = reaction_q(rho, c, p.theta_star - 0.05, &pc).unwrap();
            assert!((a - b).abs() < 1e-12);
            let a = gibbs_hat(0.8, c, &p).unwrap();
            let b = gibbs_hat(0.8, c, &pc).unwrap();
            assert!((a - b).abs() < 1e-10);
            let a = tau_of(0.8, c, &p).unwrap();
            let b = tau_of(0.8, c, &pc).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }
}
