//! Riemann–Siegel theta function.

use std::f64::consts::{FRAC_PI_8, PI};

use num_complex::Complex64;

use super::gamma::ln_gamma_complex;
use crate::constants::LN_TWO_PI;
use crate::error::{Error, Result};

/// Below this height the asymptotic series is not trusted.
pub(crate) const ASYMPTOTIC_FLOOR: f64 = 10.0;

/// θ(t) for t ≥ 1.
///
/// Uses the asymptotic expansion through the t⁻⁹ correction for t ≥ 10 and the
/// exact log-gamma definition below that.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::Domain(format!(
            "riemann_siegel_theta requires finite t >= 1, got {t}"
        )));
    }
    Ok(theta_unchecked(t))
}

pub(crate) fn theta_unchecked(t: f64) -> f64 {
    if t >= ASYMPTOTIC_FLOOR {
        theta_asymptotic(t)
    } else {
        theta_exact(t)
    }
}

/// θ(t) = Im ln Γ(1/4 + it/2) − (t/2) ln π, valid for all t ≥ 0.
pub(crate) fn theta_exact(t: f64) -> f64 {
    ln_gamma_complex(Complex64::new(0.25, 0.5 * t)).im - 0.5 * t * PI.ln()
}

pub(crate) fn theta_asymptotic(t: f64) -> f64 {
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    // 1/48, 7/5760, 31/80640, 127/430080, 511/1216512
    let corrections = inv
        * (1.0 / 48.0
            + inv2
                * (7.0 / 5760.0
                    + inv2 * (31.0 / 80640.0 + inv2 * (127.0 / 430080.0 + inv2 * (511.0 / 1216512.0)))));
    0.5 * t * (t.ln() - LN_TWO_PI - 1.0) - FRAC_PI_8 + corrections
}
