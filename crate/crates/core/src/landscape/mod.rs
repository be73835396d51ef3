//! The reduced landscape `Γ^{θ,π}(c,y)` whose level sets carry all planar
//! no-flux phase boundaries.
//!
//! `Γ(c,y) = Ĝ(P^π(c,y), c) + W(c,θ) + y²/2` where `P^π(c,y)` is the unique
//! positive root of `(p-π)(cτ₁p + (1-c)) + y²p = 0` and `y = √δ·c'`. The
//! momentum constraint `p + ρy² = π` is an equivalent form of the same
//! equation, so `Γ` itself is `δ`-free.

mod contour;
mod figure;

pub use contour::{contours, polylines_to_csv, Polyline, Window};
pub use figure::{render_figure, FigureStyle};

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rootfind;
use crate::thermo;

/// A point `(c, y)` of the reduced phase plane; `y` is the scaled
/// concentration gradient `√δ·c'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub c: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(c: f64, y: f64) -> Self {
        PhasePoint { c, y }
    }
}

/// Far-field parameters of the landscape.
#[derive(Debug, Clone, Copy)]
pub struct LandscapeParams {
    /// Temperature `θ` (absolute, not an offset).
    pub theta: f64,
    /// Far-field pressure `π > 0`.
    pub pi: f64,
}

impl LandscapeParams {
    pub fn new(theta: f64, pi: f64) -> Self {
        LandscapeParams { theta, pi }
    }
}

/// Morse type of a critical point of `Γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalKind {
    Saddle,
    Maximum,
    Minimum,
    Degenerate,
}

/// A critical point of `Γ`; all of them lie on the `y = 0` axis.
#[derive(Debug, Clone, Copy)]
pub struct CriticalPoint {
    pub point: PhasePoint,
    pub kind: CriticalKind,
    pub level: f64,
}

/// Gradient and Hessian of `Γ` at a point.
#[derive(Debug, Clone, Copy)]
pub struct GammaDerivatives {
    /// `(∂Γ/∂c, ∂Γ/∂y)`.
    pub grad: [f64; 2],
    /// Symmetric `2×2` Hessian, row-major.
    pub hess: [[f64; 2]; 2],
}

fn check_landscape_inputs(c: f64, pi: f64, params: &ModelParams) -> Result<()> {
    if !params.f_spec.is_neg_log() {
        return Err(Error::domain(
            "the reduced landscape requires the -log phase-2 energy".to_string(),
        ));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::domain(format!("c = {c} outside (0,1)")));
    }
    if !(pi > 0.0) {
        return Err(Error::domain(format!("pi = {pi} must be positive")));
    }
    Ok(())
}

/// The unique positive root `P^π(c,y)` of
/// `cτ₁p² + (1-c-cτ₁π+y²)p - (1-c)π = 0`.
///
/// Evaluated in the cancellation-free q-form of the quadratic formula.
/// The constant term is negative, so the two roots straddle zero and the
/// positive one always exists.
pub fn p_root(c: f64, y: f64, pi: f64, params: &ModelParams) -> Result<f64> {
    check_landscape_inputs(c, pi, params)?;
    if y == 0.0 {
        return Ok(pi);
    }
    let tau1 = params.tau1;
    let a = c * tau1;
    let b = 1.0 - c - a * pi + y * y;
    let k = -(1.0 - c) * pi;
    let disc = (b * b - 4.0 * a * k).sqrt();
    let q = -0.5 * (b + b.signum() * disc);
    if b >= 0.0 {
        Ok(k / q)
    } else {
        Ok(q / a)
    }
}

/// The landscape value `Γ(c,y) = Ĝ(P,c) + W(c,θ) + y²/2`.
pub fn gamma(point: PhasePoint, lp: LandscapeParams, params: &ModelParams) -> Result<f64> {
    let p = p_root(point.c, point.y, lp.pi, params)?;
    let g = thermo::gibbs_hat(p, point.c, params)?;
    let (w, _, _) = thermo::mixing_w(point.c, lp.theta, params)?;
    Ok(g + w + 0.5 * point.y * point.y)
}

/// Analytic gradient and Hessian of `Γ` by implicit differentiation of the
/// `P^π` constraint. At `y = 0` the gradient reduces exactly to
/// `(G_c(π,c,θ), 0)`.
pub fn gamma_derivatives(
    point: PhasePoint,
    lp: LandscapeParams,
    params: &ModelParams,
) -> Result<GammaDerivatives> {
    let (c, y) = (point.c, point.y);
    let pi = lp.pi;
    let tau1 = params.tau1;
    let p = p_root(c, y, pi, params)?;
    let (_, wc, wcc) = thermo::mixing_w(c, lp.theta, params)?;

    // Gibbs data (NegLog closed forms).
    let omc = 1.0 - c;
    let g_p = c * tau1 + omc / p;
    let g_pp = -omc / (p * p);
    let g_c = -(1.0 + p.ln()) + p * tau1;
    let g_pc = tau1 - 1.0 / p;

    // Defining constraint F(p,c,y) = (p-π)(cτ₁p + 1-c) + y²p.
    let f_p = c * tau1 * p + omc + (p - pi) * c * tau1 + y * y;
    let f_c = (p - pi) * (tau1 * p - 1.0);
    let f_y = 2.0 * y * p;
    let f_pp = 2.0 * c * tau1;
    let f_pc = tau1 * p - 1.0 + (p - pi) * tau1;
    let f_py = 2.0 * y;
    let f_yy = 2.0 * p;

    let p_c = -f_c / f_p;
    let p_y = -f_y / f_p;
    let p_cc = -(f_pp * p_c * p_c + 2.0 * f_pc * p_c) / f_p;
    let p_cy = -(f_pp * p_c * p_y + f_pc * p_y + f_py * p_c) / f_p;
    let p_yy = -(f_pp * p_y * p_y + 2.0 * f_py * p_y + f_yy) / f_p;

    let gc = g_p * p_c + g_c + wc;
    let gy = g_p * p_y + y;
    let gcc = g_pp * p_c * p_c + 2.0 * g_pc * p_c + g_p * p_cc + wcc;
    let gcy = g_pp * p_c * p_y + g_pc * p_y + g_p * p_cy;
    let gyy = g_pp * p_y * p_y + g_p * p_yy + 1.0;

    Ok(GammaDerivatives { grad: [gc, gy], hess: [[gcc, gcy], [gcy, gyy]] })
}

/// Eigenvalues of a symmetric 2×2 matrix, ascending.
fn sym_eigenvalues(h: [[f64; 2]; 2]) -> (f64, f64) {
    let mean = 0.5 * (h[0][0] + h[1][1]);
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let d = (mean * mean - det).max(0.0).sqrt();
    (mean - d, mean + d)
}

/// Eigenvalue magnitudes below this count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-8;

fn classify(h: [[f64; 2]; 2]) -> CriticalKind {
    let (e1, e2) = sym_eigenvalues(h);
    if e1.abs() < DEGENERACY_TOL || e2.abs() < DEGENERACY_TOL {
        CriticalKind::Degenerate
    } else if e1 < 0.0 && e2 < 0.0 {
        CriticalKind::Maximum
    } else if e1 > 0.0 && e2 > 0.0 {
        CriticalKind::Minimum
    } else {
        CriticalKind::Saddle
    }
}

/// All critical points of `Γ` in the strip `c ∈ (1e-3, 1-1e-3)`, sorted by `c`.
///
/// Every critical point lies on `y = 0` (there `∂Γ/∂y = y·(…)`), so the
/// search scans `G_c(π,·,θ)` for sign changes and polishes each root by
/// bracketed Newton with `G_cc = W_cc`.
pub fn find_critical_points(
    lp: LandscapeParams,
    params: &ModelParams,
) -> Result<Vec<CriticalPoint>> {
    check_landscape_inputs(0.5, lp.pi, params)?;
    let k = thermo::gibbs_hat_c(lp.pi, params)?;
    let gc = |c: f64| k + params.w_spec.eval(c, lp.theta, params.theta_star).1;

    let eps = 1e-3;
    let n = ((1.0 - 2.0 * eps) / 1e-3_f64).round() as usize;
    let mut roots: Vec<f64> = Vec::new();
    for (a, b) in rootfind::scan_sign_changes(gc, eps, 1.0 - eps, n) {
        let root = if a == b {
            a
        } else {
            rootfind::newton_bracketed(
                |c| {
                    let (_, wc, wcc) = params.w_spec.eval(c, lp.theta, params.theta_star);
                    (k + wc, wcc)
                },
                a,
                b,
                0.5 * (a + b),
                // Tight residual so that near-degenerate roots land close
                // enough for the Hessian classification.
                1e-15,
            )?
        };
        if !roots.iter().any(|r| (r - root).abs() < 1e-8) {
            roots.push(root);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut out = Vec::with_capacity(roots.len());
    for c in roots {
        let point = PhasePoint::new(c, 0.0);
        let d = gamma_derivatives(point, lp, params)?;
        let grad_norm = (d.grad[0] * d.grad[0] + d.grad[1] * d.grad[1]).sqrt();
        debug_assert!(grad_norm <= 1e-9, "critical point gradient {grad_norm}");
        out.push(CriticalPoint {
            point,
            kind: classify(d.hess),
            level: gamma(point, lp, params)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (ModelParams, f64) {
        let params = ModelParams::default();
        let p_star = thermo::critical_pressure(&params).unwrap();
        (params, p_star)
    }

    #[test]
    fn p_root_is_pi_on_axis() {
        let (params, ps) = setup();
        for &c in &[0.1, 0.5, 0.9] {
            assert_eq!(p_root(c, 0.0, ps, &params).unwrap(), ps);
        }
    }

    #[test]
    fn p_root_dilute_limit() {
        let (params, ps) = setup();
        let y = 0.3;
        let p = p_root(1e-9, y, ps, &params).unwrap();
        assert!((p - ps / (1.0 + y * y)).abs() < 1e-8, "{p}");
    }

    #[test]
    fn p_root_matches_bisection_oracle() {
        let (params, ps) = setup();
        let (c, y) = (0.5, 0.1);
        let p = p_root(c, y, ps, &params).unwrap();
        let poly = |x: f64| (x - ps) * (c * params.tau1 * x + 1.0 - c) + y * y * x;
        let oracle = rootfind::bisect(poly, 1e-9, 10.0, 1e-15).unwrap();
        assert!((p - oracle).abs() < 1e-12, "{p} vs {oracle}");
        assert!((p - 0.45648).abs() < 1e-4, "{p}");
    }

    #[test]
    fn p_root_defining_polynomial_residual() {
        let (params, _) = setup();
        // Deterministic pseudo-random sample of the strip.
        let mut s = 0.123456789_f64;
        let mut next = move || {
            s = (s * 9301.0 + 49297.0) % 233280.0;
            s / 233280.0
        };
        for _ in 0..2500 {
            let c = 0.02 + 0.96 * next();
            let y = -0.5 + next();
            let pi = 0.1 + next();
            let p = p_root(c, y, pi, &params).unwrap();
            let res = (p - pi) * (c * params.tau1 * p + 1.0 - c) + y * y * p;
            assert!(res.abs() <= 1e-12, "residual {res} at ({c},{y},{pi})");
            assert!(p <= pi, "P = {p} exceeds pi = {pi}");
        }
    }

    #[test]
    fn gamma_at_saddle_abscissa() {
        let (params, ps) = setup();
        let lp = LandscapeParams::new(params.theta_star - 0.08, ps);
        let v = gamma(PhasePoint::new(0.3, 0.0), lp, &params).unwrap();
        let expect = params.tau1 * ps - 0.0016;
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
        assert!((v - 0.230355).abs() < 1e-5);
    }

    #[test]
    fn gamma_reduces_to_gibbs_on_axis() {
        let (params, ps) = setup();
        let th = params.theta_star + 0.03;
        let lp = LandscapeParams::new(th, ps);
        for &c in &[0.2, 0.5, 0.77] {
            let v = gamma(PhasePoint::new(c, 0.0), lp, &params).unwrap();
            let g = thermo::gibbs(ps, c, th, &params).unwrap();
            assert_eq!(v, g);
        }
    }

    #[test]
    fn gamma_leading_order_drop_in_y() {
        let (params, ps) = setup();
        let lp = LandscapeParams::new(params.theta_star, ps);
        let v1 = gamma(PhasePoint::new(0.5, 0.1), lp, &params).unwrap();
        let v0 = gamma(PhasePoint::new(0.5, 0.0), lp, &params).unwrap();
        // Γ ≈ Γ(c,0) - y²/2 to leading order.
        assert!((v1 - v0 + 0.005).abs() < 3e-4, "{}", v1 - v0);
    }

    #[test]
    fn gamma_even_in_y() {
        let (params, ps) = setup();
        let lp = LandscapeParams::new(params.theta_star - 0.08, ps);
        for &(c, y) in &[(0.3, 0.05), (0.5, 0.2), (0.8, 0.33)] {
            let a = gamma(PhasePoint::new(c, y), lp, &params).unwrap();
            let b = gamma(PhasePoint::new(c, -y), lp, &params).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn gradient_is_exact_on_axis() {
        let (params, ps) = setup();
        let lp = LandscapeParams::new(params.theta_star, ps);
        let d = gamma_derivatives(PhasePoint::new(0.5, 0.0), lp, &params).unwrap();
        assert_eq!(d.grad[1], 0.0);
        // G_c(p*, 0.5) = 0 by the p* definition plus W_c(0.5) = 0.
        assert!(d.grad[0].abs() < 1e-14, "{}", d.grad[0]);
        let d2 = gamma_derivatives(PhasePoint::new(0.31, 0.0), lp, &params).unwrap();
        let gc = thermo::gibbs_c(ps, 0.31, lp.theta, &params).unwrap();
        assert_eq!(d2.grad[0], gc);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let (params, ps) = setup();
        let lp = LandscapeParams::new(params.theta_star - 0.08, ps);
        let mut s = 0.5_f64;
        let mut next = move || {
            s = (s * 9301.0 + 49297.0) % 233280.0;
            s / 233280.0
        };
        let h = 1e-5;
        for _ in 0..100 {
            let c = 0.1 + 0.8 * next();
            let y = -0.3 + 0.6 * next();
            let pt = PhasePoint::new(c, y);
            let d = gamma_derivatives(pt, lp, &params).unwrap();
            let g = |cc: f64, yy: f64| gamma(PhasePoint::new(cc, yy), lp, &params).unwrap();
            let fd_c = (g(c + h, y) - g(c - h, y)) / (2.0 * h);
            let fd_y = (g(c, y + h) - g(c, y - h)) / (2.0 * h);
            let scale_c = d.grad[0].abs().max(1e-3);
            let scale_y = d.grad[1].abs().max(1e-3);
            assert!((d.grad[0] - fd_c).abs() / scale_c <= 1e-6, "c-grad at ({c},{y})");
            assert!((d.grad[1] - fd_y).abs() / scale_y <= 1e-6, "y-grad at ({c},{y})");
            let fd_cc = (g(c + h, y) - 2.0 * g(c, y) + g(c - h, y)) / (h * h);
            let fd_yy = (g(c, y + h) - 2.0 * g(c, y) + g(c, y - h)) / (h * h);
            let fd_cy = (g(c + h, y + h) - g(c + h, y - h) - g(c - h, y + h)
                + g(c - h, y - h))
                / (4.0 * h * h);
            assert!((d.hess[0][0] - fd_cc).abs() <= 1e-4 * (1.0 + fd_cc.abs()));
            assert!((d.hess[1][1] - fd_yy).abs() <= 1e-4 * (1.0 + fd_yy.abs()));
            assert!((d.hess[0][1] - fd_cy).abs() <= 1e-4 * (1.0 + fd_cy.abs()));
        }
    }

    #[test]
    fn no_off_axis_critical_points_in_default_window() {
        // ∂Γ/∂y = y·(factor); the factor stays negative across the window.
        let (params, ps) = setup();
        for &dth in &[0.16, 0.0, -0.08] {
            let lp = LandscapeParams::new(params.theta_star + dth, ps);
            for i in 0..=60 {
                let c = 0.02 + 0.96 * i as f64 / 60.0;
                for j in 1..=35 {
                    let y = 0.01 * j as f64;
                    let d = gamma_derivatives(PhasePoint::new(c, y), lp, &params).unwrap();
                    assert!(
                        d.grad[1] / y < 0.0,
                        "off-axis stationarity candidate at ({c},{y},{dth})"
                    );
                }
            }
        }
    }

    #[test]
    fn single_saddle_above_critical_temperature() {
        let (params, ps) = setup();
        let lp = LandscapeParams::new(params.theta_star + 0.16, ps);
        let cps = find_critical_points(lp, &params).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].kind, CriticalKind::Saddle);
        assert!((cps[0].point.c - 0.5).abs() < 1e-10);
    }

    #[test]
    fn saddle_maximum_saddle_below_critical_temperature() {
        let (params, ps) = setup();
        let lp = LandscapeParams::new(params.theta_star - 0.08, ps);
        let cps = find_critical_points(lp, &params).unwrap();
        assert_eq!(cps.len(), 3);
        // Closed-form roots 0.5 and 0.5 ± √((θ*-θ)/2) = 0.5 ± 0.2.
        assert!((cps[0].point.c - 0.3).abs() < 1e-8);
        assert!((cps[1].point.c - 0.5).abs() < 1e-8);
        assert!((cps[2].point.c - 0.7).abs() < 1e-8);
        assert_eq!(cps[0].kind, CriticalKind::Saddle);
        assert_eq!(cps[1].kind, CriticalKind::Maximum);
        assert_eq!(cps[2].kind, CriticalKind::Saddle);
        assert!((cps[0].level - cps[2].level).abs() <= 1e-10);
    }

    #[test]
    fn degenerate_point_at_critical_temperature() {
        let (params, ps) = setup();
        let lp = LandscapeParams::new(params.theta_star, ps);
        let cps = find_critical_points(lp, &params).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].kind, CriticalKind::Degenerate);
        assert!((cps[0].point.c - 0.5).abs() < 1e-4);
    }
}
