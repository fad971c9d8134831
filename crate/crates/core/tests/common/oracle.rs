//! Independent reference values.
//!
//! |ζ(1/2 + it)|² by plain Euler–Maclaurin summation with exact Bernoulli
//! numbers; no theta function, no Riemann–Siegel, nothing shared with the
//! library.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

const TERMS: usize = 30;

/// B_{2k}/(2k)! for k = 1..=TERMS, from the Akiyama–Tanigawa recurrence.
fn bernoulli_over_factorial() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let m_max = 2 * TERMS;
        let mut a: Vec<BigRational> = Vec::with_capacity(m_max + 1);
        let mut b = Vec::with_capacity(m_max + 1);
        for m in 0..=m_max {
            a.push(BigRational::new(BigInt::from(1), BigInt::from(m as u64 + 1)));
            for j in (1..=m).rev() {
                let diff = &a[j - 1] - &a[j];
                a[j - 1] = diff * BigRational::from_integer(BigInt::from(j as u64));
            }
            b.push(a[0].clone());
        }
        let mut factorial = BigRational::from_integer(BigInt::from(1));
        let mut out = Vec::with_capacity(TERMS);
        for m in 1..=m_max {
            factorial = factorial * BigRational::from_integer(BigInt::from(m as u64));
            if m % 2 == 0 {
                let q = &b[m] / &factorial;
                assert!(!q.is_zero());
                out.push(q.to_f64().unwrap());
            }
        }
        out
    })
}

/// ζ(1/2 + it) for t ≥ 0.
pub fn zeta_half(t: f64) -> Complex64 {
    let s = Complex64::new(0.5, t);
    let n_cut = (t / 2.0).floor() as u64 + 30;

    // Kahan-compensated head sum
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for n in 1..n_cut {
        let ln = (n as f64).ln();
        let term = Complex64::from_polar((-0.5 * ln).exp(), -t * ln) - comp;
        let next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }

    let n = n_cut as f64;
    let n_pow = Complex64::from_polar(n.powf(-0.5), -t * n.ln());
    let mut total = sum + n * n_pow / (s - 1.0) + 0.5 * n_pow;
    let mut poch = s;
    let mut n_power = n_pow / n;
    for (k, coeff) in bernoulli_over_factorial().iter().enumerate() {
        if k > 0 {
            let j = (2 * k) as f64;
            poch = poch * (s + j - 1.0) * (s + j);
            n_power /= n * n;
        }
        total += *coeff * poch * n_power;
    }
    total
}

/// |ζ(1/2 + it)|².
pub fn zeta_sq(t: f64) -> f64 {
    zeta_half(t).norm_sqr()
}

/// Composite Simpson for ∫ₐᵇ |ζ|² with step near `h`.
pub fn simpson_zeta_sq(a: f64, b: f64, h: f64) -> f64 {
    let mut m = ((b - a) / h).ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    let step = (b - a) / m as f64;
    let mut acc = zeta_sq(a) + zeta_sq(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * zeta_sq(a + i as f64 * step);
    }
    acc * step / 3.0
}
