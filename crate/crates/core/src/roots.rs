//! Safeguarded Newton iteration for increasing functions.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Root of an increasing function on [lo, hi] with f(lo) ≤ 0 ≤ f(hi).
///
/// `f` returns the value and derivative. Newton steps that leave the current
/// bracket, or fail to halve the residual, are replaced by bisection. Stops
/// when |f| ≤ `f_tol` or the bracket collapses to adjacent floats.
pub fn bracketed_newton<F>(mut f: F, mut lo: f64, mut hi: f64, start: f64, f_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    if !(lo <= hi) {
        return Err(Error::Bracket(format!("empty bracket [{lo}, {hi}]")));
    }
    let mut x = start.clamp(lo, hi);
    let mut last_residual = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let (fx, dfx) = f(x)?;
        if fx.abs() <= f_tol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            return Ok(x);
        }
        let newton = x - fx / dfx;
        let stalled = fx.abs() > 0.5 * last_residual;
        x = if dfx > 0.0 && newton > lo && newton < hi && !stalled {
            newton
        } else {
            0.5 * (lo + hi)
        };
        last_residual = fx.abs();
    }
    Err(Error::Bracket(format!(
        "root not resolved to {f_tol:e} within {MAX_ITER} iterations on [{lo}, {hi}]"
    )))
}

/// Plain Newton steps from a converged `x`, kept while each step stays in
/// [lo, hi] and shrinks; stops once a step is below a few ulps.
pub fn newton_polish<F>(mut f: F, mut x: f64, lo: f64, hi: f64, max_steps: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut last_step = f64::INFINITY;
    for _ in 0..max_steps {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 || !(dfx > 0.0) {
            break;
        }
        let step = fx / dfx;
        let next = x - step;
        if !(step.abs() < last_step) || next < lo || next > hi {
            break;
        }
        x = next;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            break;
        }
        last_step = step.abs();
    }
    Ok(x)
}
