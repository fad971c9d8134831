use std::f64::consts::PI;

use super::adaptive::{base_panels, integrate_panels, AdaptiveOptions, IntegralResult};
use crate::constants::{EULER_C, LN_TWO_PI};
use crate::error::{Error, Result};
use crate::special::hardy_z_unchecked;

/// Default relative tolerance for J(T) and its increments.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Widest base panel at height t: half the mean zero gap 2π / ln(t/2π),
/// measured one unit to the right so it bounds every point of the panel,
/// and never more than one unit.
pub fn max_panel_width(t: f64) -> f64 {
    let log_density = ((t + 1.0) / (2.0 * PI)).ln();
    if log_density > PI {
        PI / log_density
    } else {
        1.0
    }
}

/// Absolute evaluation noise of Z(t)² at height t.
///
/// Rounding in the Riemann–Siegel phases grows like ε·t·ln t and multiplies
/// the mean size ln(t/2π) of Z²; the factor 4 covers the measured spread
/// against an independent evaluation.
pub fn zeta_sq_noise(t: f64) -> f64 {
    let t = t.max(2.0 * PI * std::f64::consts::E);
    4.0 * f64::EPSILON * t * t.ln() * (t / (2.0 * PI)).ln()
}

/// ∫ₐᵇ |ζ(1/2 + it)|² dt.
pub fn integrate_zeta_sq(a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    integrate_zeta_sq_with(a, b, AdaptiveOptions::new(tol))
}

pub fn integrate_zeta_sq_with(a: f64, b: f64, opts: AdaptiveOptions) -> Result<IntegralResult> {
    if !(a >= 0.0 && a <= b && b.is_finite()) {
        return Err(Error::Domain(format!(
            "integrate_zeta_sq requires 0 <= a <= b < inf, got [{a}, {b}]"
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if a == b {
        return Ok(IntegralResult::ZERO);
    }
    let opts = AdaptiveOptions { noise: zeta_sq_noise, ..opts };
    let panels = base_panels(a, b, max_panel_width);
    let integrand = |t: f64| {
        let z = hardy_z_unchecked(t);
        z * z
    };
    integrate_panels(&integrand, a, b, &panels, opts)
}

/// Main term of the Hardy–Littlewood–Ingham formula, T ln T − (1 + ln 2π − 2c) T.
pub fn hli_reference(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("hli_reference requires T > 0, got {t}")));
    }
    Ok(t * t.ln() - (1.0 + LN_TWO_PI - 2.0 * EULER_C) * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_never_exceeds_half_gap() {
        for t in [11.0, 50.0, 150.0, 1e3, 1e4, 1e5, 1e6] {
            let w = max_panel_width(t);
            for s in [t, t + 0.5 * w, t + w] {
                if s > 10.0 {
                    let half_gap = PI / (s / (2.0 * PI)).ln();
                    assert!(w <= half_gap + 1e-12, "t = {t}");
                }
            }
        }
    }

    #[test]
    fn empty_and_invalid_intervals() {
        let r = integrate_zeta_sq(100.0, 100.0, 1e-8).unwrap();
        assert_eq!((r.value, r.err_bound), (0.0, 0.0));
        assert!(integrate_zeta_sq(5.0, 4.0, 1e-8).is_err());
        assert!(integrate_zeta_sq(-1.0, 4.0, 1e-8).is_err());
        assert!(integrate_zeta_sq(0.0, 4.0, 0.0).is_err());
    }

    #[test]
    fn additivity_at_fifty() {
        let whole = integrate_zeta_sq(0.0, 100.0, 1e-8).unwrap();
        let left = integrate_zeta_sq(0.0, 50.0, 1e-8).unwrap();
        let right = integrate_zeta_sq(50.0, 100.0, 1e-8).unwrap();
        let gap = (whole.value - left.value - right.value).abs();
        assert!(gap <= whole.err_bound + left.err_bound + right.err_bound + 1e-12);
        assert!(whole.err_bound <= 1e-8 * 100.0);
        assert!(whole.panels >= 1);
    }

    #[test]
    fn hli_reference_values() {
        let k = 1.0 + LN_TWO_PI - 2.0 * EULER_C;
        assert!((hli_reference(1.0).unwrap() + k).abs() < 1e-15);
        assert!((hli_reference(1.0).unwrap() + 1.6834457).abs() < 1e-7);
        // bisection for the root of the main term
        let (mut lo, mut hi) = (2.0, 10.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if hli_reference(mid).unwrap() < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - k.exp()).abs() < 1e-9);
        assert!(hli_reference(k.exp()).unwrap().abs() < 1e-9);
        assert!(hli_reference(0.0).is_err());
    }
}
