//! Hardy's Z-function on the critical line.
//!
//! Two independent evaluation routes are combined: an Euler–Maclaurin
//! summation of ζ(1/2 + it) at low height and the Riemann–Siegel main sum with
//! the C₀…C₄ remainder terms above [`RS_CROSSOVER`].

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use super::theta::theta_unchecked;
use crate::error::{Error, Result};

/// Height at which evaluation switches from Euler–Maclaurin to
/// Riemann–Siegel. The truncated Riemann–Siegel remainder exceeds 1e-10
/// absolute below roughly t = 1500.
pub const RS_CROSSOVER: f64 = 2000.0;

/// Hardy Z(t) for t ≥ 0.
pub fn hardy_z(t: f64) -> Result<f64> {
    check_height(t)?;
    Ok(hardy_z_unchecked(t))
}

/// |ζ(1/2 + it)|² = Z(t)².
pub fn zeta_sq_modulus(t: f64) -> Result<f64> {
    let z = hardy_z(t)?;
    Ok(z * z)
}

fn check_height(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Z(t) requires finite t >= 0, got {t}")))
    }
}

#[inline]
pub(crate) fn hardy_z_unchecked(t: f64) -> f64 {
    if t >= RS_CROSSOVER {
        riemann_siegel(t)
    } else {
        euler_maclaurin_z(t)
    }
}

// ---------------------------------------------------------------------------
// Riemann–Siegel
// ---------------------------------------------------------------------------

/// (ln n, n^{-1/2}) for n = 1..=MAIN_SUM_TABLE; covers t up to ~2.5e9.
const MAIN_SUM_TABLE: usize = 20_000;

fn main_sum_table() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (1..=MAIN_SUM_TABLE)
            .map(|n| {
                let n = n as f64;
                (n.ln(), 1.0 / n.sqrt())
            })
            .collect()
    })
}

pub(crate) fn riemann_siegel(t: f64) -> f64 {
    let a = (t / (2.0 * PI)).sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let theta = theta_unchecked(t);

    let mut sum = 0.0;
    if n <= MAIN_SUM_TABLE {
        for &(ln_k, inv_sqrt_k) in &main_sum_table()[..n] {
            sum += inv_sqrt_k * (theta - t * ln_k).cos();
        }
    } else {
        for k in 1..=n {
            let k = k as f64;
            sum += (theta - t * k.ln()).cos() / k.sqrt();
        }
    }

    let coeffs = rs_coefficients();
    let x = p - 0.5;
    let inv_a = 1.0 / a;
    let mut remainder = 0.0;
    let mut scale = 1.0;
    for poly in coeffs.iter() {
        remainder += scale * horner(poly, x);
        scale *= inv_a;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * sum + sign * remainder / a.sqrt()
}

fn horner(poly: &[f64], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Number of Taylor coefficients kept for Ψ about p = 1/2.
const PSI_DEGREE: usize = 72;
/// Sample count of the discrete Cauchy integral.
const PSI_SAMPLES: usize = 256;

/// C₀…C₄ as polynomials in x = p − 1/2.
fn rs_coefficients() -> &'static [Vec<f64>; 5] {
    static COEFFS: OnceLock<[Vec<f64>; 5]> = OnceLock::new();
    COEFFS.get_or_init(build_rs_coefficients)
}

/// Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp) written in x = p − 1/2.
fn psi(x: Complex64) -> Complex64 {
    let two_pi = 2.0 * PI;
    -((x * x - 5.0 / 16.0) * two_pi).cos() / (x * two_pi).cos()
}

/// Ψ is entire, so its Taylor coefficients about x = 0 follow from the
/// Cauchy integral on |x| = 1, discretised with the trapezoid rule.
fn psi_taylor() -> Vec<f64> {
    let samples: Vec<Complex64> = (0..PSI_SAMPLES)
        .map(|j| psi(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / PSI_SAMPLES as f64)))
        .collect();
    (0..PSI_DEGREE)
        .map(|k| {
            let acc: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, &s)| {
                    let angle = -2.0 * PI * (k * j % PSI_SAMPLES) as f64 / PSI_SAMPLES as f64;
                    s * Complex64::from_polar(1.0, angle)
                })
                .sum();
            acc.re / PSI_SAMPLES as f64
        })
        .collect()
}

fn derivative_poly(taylor: &[f64], order: usize) -> Vec<f64> {
    (order..taylor.len())
        .map(|k| {
            let falling: f64 = ((k - order + 1)..=k).map(|m| m as f64).product();
            taylor[k] * falling
        })
        .collect()
}

fn build_rs_coefficients() -> [Vec<f64>; 5] {
    let taylor = psi_taylor();
    let d = |order: usize| derivative_poly(&taylor, order);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;

    let combine = |terms: &[(f64, Vec<f64>)]| -> Vec<f64> {
        let len = terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0);
        let mut out = vec![0.0; len];
        for (w, p) in terms {
            for (o, c) in out.iter_mut().zip(p) {
                *o += w * c;
            }
        }
        out
    };

    [
        d(0),
        combine(&[(-1.0 / (96.0 * pi2), d(3))]),
        combine(&[(1.0 / (64.0 * pi2), d(2)), (1.0 / (18432.0 * pi4), d(6))]),
        combine(&[
            (-1.0 / (64.0 * pi2), d(1)),
            (-1.0 / (3840.0 * pi4), d(5)),
            (-1.0 / (5308416.0 * pi6), d(9)),
        ]),
        combine(&[
            (1.0 / (128.0 * pi2), d(0)),
            (19.0 / (24576.0 * pi4), d(4)),
            (11.0 / (5898240.0 * pi6), d(8)),
            (1.0 / (2038431744.0 * pi8), d(12)),
        ]),
    ]
}

// ---------------------------------------------------------------------------
// Euler–Maclaurin
// ---------------------------------------------------------------------------

/// B_{2k}/(2k)! for k = 1..=EM_MAX_TERMS.
const EM_MAX_TERMS: usize = 40;

fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_{2k}/(2k)! = (-1)^{k+1} 2 ζ(2k) / (2π)^{2k}
        let two_pi_sq = 4.0 * PI * PI;
        let mut scale = 1.0;
        (1..=EM_MAX_TERMS)
            .map(|k| {
                scale /= two_pi_sq;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta_even(k) * scale
            })
            .collect()
    })
}

/// ζ(2k) for k ≥ 1.
fn zeta_even(k: usize) -> f64 {
    if k == 1 {
        return PI * PI / 6.0;
    }
    let s = 2.0 * k as f64;
    let m = 200usize;
    let head: f64 = (1..m).rev().map(|n| (n as f64).powf(-s)).sum();
    let mf = m as f64;
    head + mf.powf(1.0 - s) / (s - 1.0) + 0.5 * mf.powf(-s) + s * mf.powf(-s - 1.0) / 12.0
}

/// ζ(1/2 + it) by Euler–Maclaurin summation.
pub(crate) fn zeta_euler_maclaurin(t: f64) -> Complex64 {
    let s = Complex64::new(0.5, t);
    let cutoff = ((t / PI).ceil() as usize + 8).max(20);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in (1..cutoff).rev() {
        let ln_n = (n as f64).ln();
        sum += Complex64::from_polar((-0.5 * ln_n).exp(), -t * ln_n);
    }
    let nf = cutoff as f64;
    let n_pow = Complex64::from_polar((-0.5 * nf.ln()).exp(), -t * nf.ln());
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;

    // term_k = B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let inv_n2 = 1.0 / (nf * nf);
    let mut rising = s * n_pow / nf;
    let mut previous = f64::INFINITY;
    for (k, &b) in bernoulli_over_factorial().iter().enumerate() {
        let term = rising * b;
        let size = term.norm();
        if size > previous {
            break;
        }
        sum += term;
        if size < 1e-18 * sum.norm() {
            break;
        }
        previous = size;
        let k = k as f64 + 1.0;
        rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k) * inv_n2;
    }
    sum
}

fn euler_maclaurin_z(t: f64) -> f64 {
    let phase = Complex64::from_polar(1.0, theta_unchecked(t));
    (phase * zeta_euler_maclaurin(t)).re
}
