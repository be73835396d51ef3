//! Maxwell states: chemical equilibria at fixed pressure, the
//! equal-saddle-level pressure `π*(θ)` and the equilibrium state pair
//! connected by planar phase boundaries.
//!
//! Everything works in the Gibbs picture: equilibrium concentrations are
//! the roots of `G_c(π,·,θ)` and levels are `G` values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rootfind;
use crate::thermo;

/// One equilibrium fluid state (zero velocity implied).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxwellState {
    pub rho: f64,
    pub c: f64,
}

/// The two equilibrium states of a planar phase boundary, the pressure
/// `π*(θ)` at which their saddles share a level, and that level.
#[derive(Debug, Clone, Serialize)]
pub struct MaxwellPair {
    pub pi_star: f64,
    /// Shared saddle value of `Γ` (equivalently `G`).
    pub level: f64,
    /// State with the smaller density.
    pub under: MaxwellState,
    /// State with the larger density.
    pub over: MaxwellState,
    #[serde(skip)]
    pub theta: f64,
}

const STRUCTURE_MSG: &str = "no two-saddle configuration";

/// All roots of `G_c(π,c,θ) = Ĝ_c(π) + W_c(c,θ) = 0` in `(0,1)`, sorted.
///
/// Sign-change scan on a `1e-4` grid followed by bracketed Newton to
/// `|G_c| ≤ 1e-12`; duplicates within `1e-8` are merged.
pub fn equilibrium_c(pi: f64, theta: f64, params: &ModelParams) -> Result<Vec<f64>> {
    let k = thermo::gibbs_hat_c(pi, params)?;
    let eps = 1e-4;
    let n = ((1.0 - 2.0 * eps) / 1e-4_f64).round() as usize;
    let gc = |c: f64| k + params.w_spec.eval(c, theta, params.theta_star).1;
    let mut roots: Vec<f64> = Vec::new();
    for (a, b) in rootfind::scan_sign_changes(gc, eps, 1.0 - eps, n) {
        let root = if a == b {
            a
        } else {
            rootfind::newton_bracketed(
                |c| {
                    let (_, wc, wcc) = params.w_spec.eval(c, theta, params.theta_star);
                    (k + wc, wcc)
                },
                a,
                b,
                0.5 * (a + b),
                1e-14,
            )?
        };
        if !roots.iter().any(|r| (r - root).abs() < 1e-8) {
            roots.push(root);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}

/// Outermost equilibrium roots for a two-saddle configuration.
fn outer_roots(pi: f64, theta: f64, params: &ModelParams) -> Result<(f64, f64)> {
    let roots = equilibrium_c(pi, theta, params)?;
    if roots.len() < 3 {
        return Err(Error::structure(format!(
            "{STRUCTURE_MSG}: {} equilibrium root(s) at pi = {pi}",
            roots.len()
        )));
    }
    if roots.len() > 3 {
        eprintln!(
            "warning: {} equilibrium roots at pi = {pi}; using the outermost saddles",
            roots.len()
        );
    }
    Ok((roots[0], *roots.last().unwrap()))
}

/// Level difference `G(π, c_high, θ) - G(π, c_low, θ)` between the two
/// outer saddles.
pub fn saddle_gap(pi: f64, theta: f64, params: &ModelParams) -> Result<f64> {
    let (c_lo, c_hi) = outer_roots(pi, theta, params)?;
    Ok(thermo::gibbs(pi, c_hi, theta, params)? - thermo::gibbs(pi, c_lo, theta, params)?)
}

fn assemble_pair(pi: f64, theta: f64, params: &ModelParams) -> Result<MaxwellPair> {
    let (c_lo, c_hi) = outer_roots(pi, theta, params)?;
    let rho_lo = 1.0 / thermo::tau_of(pi, c_lo, params)?;
    let rho_hi = 1.0 / thermo::tau_of(pi, c_hi, params)?;
    let (under, over) = if rho_lo < rho_hi {
        (MaxwellState { rho: rho_lo, c: c_lo }, MaxwellState { rho: rho_hi, c: c_hi })
    } else {
        (MaxwellState { rho: rho_hi, c: c_hi }, MaxwellState { rho: rho_lo, c: c_lo })
    };
    let level = thermo::gibbs(pi, under.c, theta, params)?;
    Ok(MaxwellPair { pi_star: pi, level, under, over, theta })
}

/// The unique pressure `π*(θ)` with vanishing saddle gap, plus the Maxwell
/// pair at that pressure.
///
/// Bracketed in `π` starting from `p*` with geometrically expanded steps
/// (capped to `[1e-4, 10]`, shrinking the step where the two-saddle
/// structure is lost), then bisection to `|gap| ≤ 1e-12`.
pub fn pi_star(theta: f64, params: &ModelParams) -> Result<(f64, MaxwellPair)> {
    params.validate()?;
    let p_star = thermo::critical_pressure(params)?;
    let dth = theta - params.theta_star;
    if dth > 1e-12 {
        return Err(Error::structure(format!(
            "{STRUCTURE_MSG}: theta exceeds the critical temperature by {dth}"
        )));
    }
    if dth.abs() <= 1e-12 {
        // Coalesced pair at the critical temperature.
        let roots = equilibrium_c(p_star, theta, params)?;
        let c = roots
            .first()
            .copied()
            .ok_or_else(|| Error::structure(format!("{STRUCTURE_MSG}: no equilibria")))?;
        let rho = 1.0 / thermo::tau_of(p_star, c, params)?;
        let level = thermo::gibbs(p_star, c, theta, params)?;
        let s = MaxwellState { rho, c };
        return Ok((p_star, MaxwellPair { pi_star: p_star, level, under: s, over: s, theta }));
    }

    let gap_tol = 1e-12;
    let g0 = saddle_gap(p_star, theta, params)?;
    if g0.abs() <= gap_tol {
        return Ok((p_star, assemble_pair(p_star, theta, params)?));
    }

    // The gap decreases in π, so the root lies in the direction sign(g0).
    let dir = g0.signum();
    let mut step = 1e-3;
    let mut a = p_star;
    let mut ga = g0;
    let mut b;
    let mut gb;
    let mut tried = 0;
    loop {
        tried += 1;
        if tried > 200 {
            return Err(Error::convergence(
                "no sign change of the saddle gap near p*".to_string(),
            ));
        }
        let cand = (a + dir * step).clamp(1e-4, 10.0);
        match saddle_gap(cand, theta, params) {
            Ok(g) => {
                if g.signum() != g0.signum() || g == 0.0 {
                    b = cand;
                    gb = g;
                    break;
                }
                a = cand;
                ga = g;
                step *= 2.0;
                if cand == 1e-4 || cand == 10.0 {
                    return Err(Error::convergence(
                        "saddle gap does not change sign within (1e-4, 10)".to_string(),
                    ));
                }
            }
            Err(Error::Structure(_)) => {
                // Stepped outside the three-root region; shrink.
                step *= 0.5;
                if step < 1e-13 {
                    return Err(Error::convergence(
                        "two-saddle region exhausted while bracketing pi*".to_string(),
                    ));
                }
            }
            Err(e) => return Err(e),
        }
    }

    // Bisection with a secant midpoint candidate.
    for _ in 0..300 {
        if ga.abs() <= gap_tol {
            return Ok((a, assemble_pair(a, theta, params)?));
        }
        if gb.abs() <= gap_tol {
            return Ok((b, assemble_pair(b, theta, params)?));
        }
        let mid = {
            let secant = b - gb * (b - a) / (gb - ga);
            let lo = a.min(b);
            let hi = a.max(b);
            if secant.is_finite() && secant > lo && secant < hi {
                secant
            } else {
                0.5 * (a + b)
            }
        };
        if (b - a).abs() < f64::EPSILON * (1.0 + b.abs()) {
            return Ok((mid, assemble_pair(mid, theta, params)?));
        }
        let gm = saddle_gap(mid, theta, params)?;
        if gm.signum() == ga.signum() {
            a = mid;
            ga = gm;
        } else {
            b = mid;
            gb = gm;
        }
    }
    Err(Error::convergence("pi* bisection did not converge".to_string()))
}
