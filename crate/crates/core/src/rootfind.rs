//! Bracketed scalar root finding: bisection with a safeguarded Newton polish.

use crate::error::{Error, Result};

/// Root of `f` on a bracket `[a, b]` with `f(a)·f(b) ≤ 0`.
///
/// Bisection until the interval or residual is below tolerance. Robust
/// fallback used by the polished solvers below.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::convergence(format!(
            "no sign change on bracket [{a}, {b}]: f = ({fa}, {fb})"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() <= tol {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Newton iteration constrained to a bracket, with bisection steps whenever
/// the Newton update leaves the interval or fails to shrink the residual.
///
/// `f` returns `(value, derivative)`. Converges to `|value| <= f_tol`.
pub fn newton_bracketed<F: FnMut(f64) -> (f64, f64)>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    x0: f64,
    f_tol: f64,
) -> Result<f64> {
    let (fa, _) = f(a);
    let (fb, _) = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::convergence(format!(
            "no sign change on bracket [{a}, {b}] for Newton"
        )));
    }
    let mut x = x0.clamp(a.min(b), a.max(b));
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx.abs() <= f_tol {
            return Ok(x);
        }
        // Shrink the bracket around the root.
        if fx.signum() == fa.signum() {
            a = x;
        } else {
            b = x;
        }
        let newton = if dfx != 0.0 { x - fx / dfx } else { f64::NAN };
        let lo = a.min(b);
        let hi = a.max(b);
        x = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() < f64::EPSILON * (1.0 + hi.abs()) {
            return Ok(x);
        }
    }
    let (fx, _) = f(x);
    if fx.abs() <= f_tol.max(1e-9) {
        Ok(x)
    } else {
        Err(Error::convergence(format!(
            "Newton did not reach |f| <= {f_tol}: |f({x})| = {}",
            fx.abs()
        )))
    }
}

/// Locate all sign changes of `f` on a uniform grid over `[lo, hi]`.
///
/// Returns brackets `(a, b)` with `f(a)·f(b) < 0`, plus exact grid zeros
/// as degenerate brackets `(x, x)`.
pub fn scan_sign_changes<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    n: usize,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut xa = lo;
    let mut fa = f(xa);
    for i in 1..=n {
        let xb = lo + (hi - lo) * i as f64 / n as f64;
        let fb = f(xb);
        if fa == 0.0 {
            out.push((xa, xa));
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            out.push((xa, xb));
        }
        xa = xb;
        fa = fb;
    }
    if fa == 0.0 {
        out.push((xa, xa));
    }
    out
}
