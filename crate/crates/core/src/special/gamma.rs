//! Log-gamma on the positive reals and in the right half-plane.
//!
//! Both routes shift the argument upward with the functional equation until
//! the Stirling series converges to double precision, then sum the series.

use num_complex::Complex64;

use crate::constants::LN_SQRT_TWO_PI;
use crate::error::{Error, Result};

/// Stirling series becomes accurate to ~1e-21 relative above this point.
const STIRLING_FLOOR: f64 = 15.0;

/// B_{2k} / (2k (2k-1)) for k = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires finite x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    let mut shifted = x;
    let mut log_shift = 0.0;
    while shifted < STIRLING_FLOOR {
        log_shift += shifted.ln();
        shifted += 1.0;
    }
    stirling(shifted) - log_shift
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = STIRLING_COEFFS
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * inv2 + c)
        * inv;
    (x - 0.5) * x.ln() - x + LN_SQRT_TWO_PI + series
}

/// Principal branch of ln Γ(z) for Re z > 0, continuous along vertical lines.
pub(crate) fn ln_gamma_complex(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut shifted = z;
    let mut log_shift = Complex64::new(0.0, 0.0);
    while shifted.re < STIRLING_FLOOR {
        log_shift += shifted.ln();
        shifted += 1.0;
    }
    let inv = shifted.inv();
    let inv2 = inv * inv;
    let series = STIRLING_COEFFS
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * inv2 + c)
        * inv;
    (shifted - 0.5) * shifted.ln() - shifted + LN_SQRT_TWO_PI + series - log_shift
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exact_values() {
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(ln_gamma(2.0).unwrap().abs() < 1e-14);
        assert!((ln_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5).unwrap() - PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn recurrence() {
        for x in [0.5, 1.5, 10.5, 1e3] {
            let lhs = ln_gamma(x + 1.0).unwrap();
            let rhs = ln_gamma(x).unwrap() + f64::ln(x);
            assert!((lhs - rhs).abs() < 1e-11, "x = {x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(matches!(ln_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(ln_gamma(-2.5), Err(Error::Domain(_))));
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn large_argument_matches_factorial_sum() {
        // ln Γ(101) = ln 100!
        let direct: f64 = (1..=100).map(|k| (k as f64).ln()).sum();
        assert!((ln_gamma(101.0).unwrap() - direct).abs() < 1e-11);
    }

    #[test]
    fn complex_agrees_with_real_axis() {
        for x in [0.25, 1.0, 3.7, 20.0, 150.0] {
            let z = ln_gamma_complex(Complex64::new(x, 0.0));
            assert!((z.re - ln_gamma_unchecked(x)).abs() < 1e-12);
            assert!(z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn complex_reflection_modulus() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for y in [0.5, 2.0, 7.0] {
            let z = ln_gamma_complex(Complex64::new(0.5, y));
            let expected = 0.5 * (PI / (PI * y).cosh()).ln();
            assert!((z.re - expected).abs() < 1e-12, "y = {y}");
        }
    }
}
