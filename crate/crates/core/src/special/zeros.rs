//! Sign changes and zeros of Z(t) on the real axis.

use super::zeta::hardy_z_unchecked;
use crate::error::{Error, Result};

/// Subintervals [tᵢ, tᵢ₊₁] of a uniform grid on [a, b] over which Z changes sign.
pub fn sign_change_brackets(a: f64, b: f64, steps: usize) -> Result<Vec<(f64, f64)>> {
    if !(0.0 <= a && a < b && b.is_finite()) || steps == 0 {
        return Err(Error::Domain(format!(
            "sign-change scan needs 0 <= a < b and steps >= 1, got [{a}, {b}] with {steps} steps"
        )));
    }
    let h = (b - a) / steps as f64;
    let point = |i: usize| if i == steps { b } else { a + i as f64 * h };
    let mut out = Vec::new();
    let mut prev = (point(0), hardy_z_unchecked(point(0)));
    for i in 1..=steps {
        let t = point(i);
        let z = hardy_z_unchecked(t);
        if prev.1 * z < 0.0 {
            out.push((prev.0, t));
        }
        prev = (t, z);
    }
    Ok(out)
}

/// Zero of Z inside a sign-change bracket, by bisection to adjacent floats.
pub fn locate_zero(lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut z_lo = hardy_z_unchecked(lo);
    if z_lo * hardy_z_unchecked(hi) > 0.0 {
        return Err(Error::Bracket(format!("Z has no sign change on [{lo}, {hi}]")));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let z = hardy_z_unchecked(mid);
        if z == 0.0 {
            return Ok(mid);
        }
        if (z < 0.0) == (z_lo < 0.0) {
            lo = mid;
            z_lo = z;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_zeros() {
        let brackets = sign_change_brackets(0.0, 100.0, 10_000).unwrap();
        assert_eq!(brackets.len(), 29);
        let z1 = locate_zero(brackets[0].0, brackets[0].1).unwrap();
        assert!((z1 - 14.134725141734693).abs() < 1e-9);
        let z2 = locate_zero(brackets[1].0, brackets[1].1).unwrap();
        assert!((z2 - 21.022039638771555).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_bracket() {
        assert!(locate_zero(15.0, 16.0).is_err());
        assert!(sign_change_brackets(5.0, 1.0, 10).is_err());
    }
}
