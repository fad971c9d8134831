//! Panel-halving Gauss–Legendre quadrature with an embedded order-8 error
//! estimate.
//!
//! Base panels are integrated independently (in parallel when a rayon pool
//! with more than one thread is available) and always reduced in ascending
//! panel order, so the result does not depend on the thread count.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss::{gauss16, gauss8};
use crate::error::{Error, Result};

/// Integrand evaluations allowed per integration call unless configured.
pub const DEFAULT_EVAL_BUDGET: u64 = 100_000_000;

/// Halving depth below a base panel.
const MAX_DEPTH: u32 = 40;

/// Relative size of |G16 − G8| treated as pure rounding noise.
const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Evaluations spent on one panel attempt (16 + 8).
const EVALS_PER_ATTEMPT: u64 = 24;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub err_bound: f64,
    pub panels: u64,
}

impl IntegralResult {
    pub const ZERO: IntegralResult = IntegralResult {
        value: 0.0,
        err_bound: 0.0,
        panels: 0,
    };
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    /// Requested bound: err_bound ≤ tol · max(1, b − a).
    pub tol: f64,
    pub budget: u64,
    /// Absolute evaluation noise of the integrand at t. A panel whose
    /// estimate is within twice this (times its width) is accepted, since
    /// halving cannot resolve below the noise.
    pub noise: fn(f64) -> f64,
}

fn noiseless(_: f64) -> f64 {
    0.0
}

impl AdaptiveOptions {
    pub fn new(tol: f64) -> Self {
        AdaptiveOptions {
            tol,
            budget: DEFAULT_EVAL_BUDGET,
            noise: noiseless,
        }
    }
}

/// Split [a, b] into base panels whose width at the left edge is `width(t)`.
pub fn base_panels(a: f64, b: f64, width: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    let mut panels = Vec::new();
    let mut t = a;
    while t < b {
        let w = width(t);
        debug_assert!(w > 0.0);
        let mut end = t + w;
        // avoid a sliver panel at the right end
        if end >= b || b - end < 1e-3 * w {
            end = b;
        }
        panels.push((t, end));
        t = end;
    }
    panels
}

/// Integrate `f` over [a, b] starting from the given base panels.
pub fn integrate_panels<F>(
    f: &F,
    a: f64,
    b: f64,
    panels: &[(f64, f64)],
    opts: AdaptiveOptions,
) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(opts.tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if panels.is_empty() {
        return Ok(IntegralResult::ZERO);
    }
    let length = b - a;
    let density = opts.tol * length.max(1.0) / length;
    let spent = AtomicU64::new(0);

    let results: Vec<Result<PanelSum>> = panels
        .par_iter()
        .with_min_len(64)
        .map(|&(lo, hi)| {
            let mut acc = PanelSum::default();
            refine(f, lo, hi, density, &opts, 0, &mut acc);
            let total = spent.fetch_add(acc.evaluations, Ordering::Relaxed) + acc.evaluations;
            if total > opts.budget {
                return Err(Error::PrecisionUnreachable {
                    a,
                    b,
                    evaluations: total,
                    budget: opts.budget,
                });
            }
            Ok(acc)
        })
        .collect();

    let mut out = IntegralResult::ZERO;
    for r in results {
        let p = r?;
        out.value += p.value;
        out.err_bound += p.err;
        out.panels += p.panels;
    }
    Ok(out)
}

#[derive(Debug, Default)]
struct PanelSum {
    value: f64,
    err: f64,
    panels: u64,
    evaluations: u64,
}

fn refine<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    density: f64,
    opts: &AdaptiveOptions,
    depth: u32,
    acc: &mut PanelSum,
) {
    let fine = gauss16().integrate(lo, hi, f);
    let coarse = gauss8().integrate(lo, hi, f);
    acc.evaluations += EVALS_PER_ATTEMPT;
    let diff = (fine - coarse).abs();
    // at the rounding or evaluation-noise floor halving cannot help
    let floor = (ROUNDING_FLOOR * fine.abs()).max(2.0 * (opts.noise)(hi) * (hi - lo));
    // an exhausted budget is reported by the caller
    let exhausted = acc.evaluations > opts.budget;
    if diff <= density * (hi - lo) || diff <= floor || depth >= MAX_DEPTH || exhausted {
        acc.value += fine;
        acc.err += diff;
        acc.panels += 1;
        return;
    }
    let mid = 0.5 * (lo + hi);
    refine(f, lo, mid, density, opts, depth + 1, acc);
    refine(f, mid, hi, density, opts, depth + 1, acc);
}

/// Adaptive integral of a smooth function with unit-width base panels.
pub fn integrate_smooth<F>(f: F, a: f64, b: f64, opts: AdaptiveOptions) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !(a <= b) {
        return Err(Error::Domain(format!("integration requires a <= b, got [{a}, {b}]")));
    }
    let panels = base_panels(a, b, |_| 1.0);
    integrate_panels(&f, a, b, &panels, opts)
}
