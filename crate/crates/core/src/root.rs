//! Bracketed scalar root finders.

use crate::error::{Error, Result};

/// Safeguarded Newton iteration on a bracket `[lo, hi]` where `f(lo) <= 0 <= f(hi)`.
/// Falls back to bisection whenever Newton leaves the bracket; stops when the
/// bracket stops shrinking.
pub fn newton_bisect<F, D>(f: F, df: D, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::RootFinding(format!("no sign change on [{lo}, {hi}]: f = ({flo}, {fhi})")));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if next == x || next <= lo || next >= hi {
            // bracket exhausted at floating-point resolution
            return Ok(if f(hi).abs() < f(lo).abs() { hi } else { lo });
        }
        x = next;
    }
    Ok(x)
}

/// Illinois (modified regula falsi) on a sign-changing bracket, to absolute
/// tolerance `tol` in `x`.
pub fn illinois<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::RootFinding(format!("no sign change on [{a}, {b}]: f = ({fa}, {fb})")));
    }
    let mut side = 0;
    for _ in 0..300 {
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 || (b - a).abs() <= tol {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= tol {
            return Ok(0.5 * (a + b));
        }
    }
    Err(Error::RootFinding(format!("no convergence on [{a}, {b}]")))
}
