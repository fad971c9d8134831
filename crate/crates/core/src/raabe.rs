//! Raabe's integral and the decomposition of ladder increments.
//!
//! With φ₁ defined by root-solving y ln y + (c − ln 2π) y + c₀ = J(T), the
//! increment of J between consecutive tower levels equals a difference of
//! two Raabe integrals minus a rectangle term:
//!
//! ```text
//! ∫_{Tʳ}^{Tʳ⁺¹} Z² dt = R(Tʳ) − R(Tʳ⁻¹) − (ln 2π − 1 − c)(Tʳ − Tʳ⁻¹)
//! R(a) = ∫ₐ^{a+1} ln Γ(t) dt = a ln a − a + ln √(2π)
//! ```
//!
//! The left side is computed by live quadrature, the right side in closed
//! form, and the residual records how well the two meet.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::constants::{LN_SQRT_TWO_PI, LN_TWO_PI};
use crate::error::{Error, Result};
use crate::ladder::{Ladder, ReverseTower, MAX_TOWER_DEPTH};
use crate::quadrature::{integrate_smooth, AdaptiveOptions, IntegralResult};
use crate::report::{cell, Tabular};
use crate::special::ln_gamma_unchecked;

/// ∫ₐ^{a+1} ln Γ(t) dt in closed form.
pub fn raabe_integral(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("raabe_integral requires a > 0, got {a}")));
    }
    Ok(a * a.ln() - a + LN_SQRT_TWO_PI)
}

/// ∫ₐ^{a+1} ln Γ(t) dt by adaptive Gauss–Legendre quadrature.
pub fn raabe_integral_quadrature(a: f64, tol: f64) -> Result<IntegralResult> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "raabe_integral_quadrature requires a > 0, got {a}"
        )));
    }
    integrate_smooth(ln_gamma_unchecked, a, a + 1.0, AdaptiveOptions::new(tol))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionRow {
    pub r: usize,
    /// ∫_{Tʳ}^{Tʳ⁺¹} Z² dt by quadrature.
    pub lhs: f64,
    /// R(Tʳ) − R(Tʳ⁻¹) − (ln 2π − 1 − c)(Tʳ − Tʳ⁻¹).
    pub rhs: f64,
    pub residual: f64,
    /// Tʳ − Tʳ⁻¹.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    #[serde(rename = "base_T")]
    pub base_t: f64,
    pub k: usize,
    pub rows: Vec<DecompositionRow>,
    pub corollary_residual: f64,
    /// ln 2π − 1 − c as used in the rectangle term.
    pub constant_used: f64,
    #[serde(skip)]
    pub lhs_err_bounds: Vec<f64>,
    /// ∫_{T¹}^{Tᵏ⁺¹} Z² dt by one quadrature.
    #[serde(skip)]
    pub corollary_lhs: IntegralResult,
    #[serde(skip)]
    pub tower: Option<ReverseTower>,
}

impl DecompositionReport {
    pub fn row_residual_sum(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).sum()
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max)
    }
}

impl Tabular for DecompositionReport {
    fn csv_header(&self) -> &'static str {
        "r,lhs,rhs,residual,gap"
    }

    fn csv_rows(&self, out: &mut String) {
        for row in &self.rows {
            let _ = write!(out, "{},", row.r);
            for (i, v) in [row.lhs, row.rhs, row.residual, row.gap].into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell(out, v);
            }
            out.push('\n');
        }
    }
}

fn check_depth(k: usize) -> Result<()> {
    if (1..=MAX_TOWER_DEPTH).contains(&k) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("k must be in 1..={MAX_TOWER_DEPTH}, got {k}")))
    }
}

fn rectangle_coefficient(ladder: &Ladder) -> f64 {
    LN_TWO_PI - 1.0 - ladder.config().c
}

/// R(b) − R(a) − κ (b − a), all in closed form.
fn decomposition_rhs(upper: f64, lower: f64, kappa: f64) -> Result<f64> {
    Ok(raabe_integral(upper)? - raabe_integral(lower)? - kappa * (upper - lower))
}

/// Check the per-increment Raabe decomposition for r = 1..=k.
pub fn verify_increment_decomposition(ladder: &Ladder, t: f64, k: usize) -> Result<DecompositionReport> {
    check_depth(k)?;
    let tower = ladder.reverse_tower(t, k + 1)?;
    let kappa = rectangle_coefficient(ladder);
    let lv = &tower.levels;

    let mut rows = Vec::with_capacity(k);
    let mut lhs_err_bounds = Vec::with_capacity(k);
    for r in 1..=k {
        let lhs = ladder.store().integrate(lv[r], lv[r + 1])?;
        let rhs = decomposition_rhs(lv[r], lv[r - 1], kappa)?;
        rows.push(DecompositionRow {
            r,
            lhs: lhs.value,
            rhs,
            residual: lhs.value - rhs,
            gap: lv[r] - lv[r - 1],
        });
        lhs_err_bounds.push(lhs.err_bound);
    }

    let corollary_lhs = ladder.store().integrate(lv[1], lv[k + 1])?;
    let corollary_rhs = decomposition_rhs(lv[k], lv[0], kappa)?;

    Ok(DecompositionReport {
        base_t: t,
        k,
        rows,
        corollary_residual: corollary_lhs.value - corollary_rhs,
        constant_used: kappa,
        lhs_err_bounds,
        corollary_lhs,
        tower: Some(tower),
    })
}

/// Residual of the telescoped identity over [T¹, Tᵏ⁺¹].
pub fn verify_corollary_sum(ladder: &Ladder, t: f64, k: usize) -> Result<f64> {
    Ok(verify_increment_decomposition(ladder, t, k)?.corollary_residual)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementRow {
    pub r: usize,
    /// J(Tʳ) − J(Tʳ⁻¹).
    pub increment: f64,
    /// (1 − c) Tʳ⁻¹.
    pub linear_term: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementReport {
    #[serde(rename = "base_T")]
    pub base_t: f64,
    pub k: usize,
    pub rows: Vec<IncrementRow>,
}

impl IncrementReport {
    pub fn max_rel_dev(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_dev).fold(0.0, f64::max)
    }
}

impl Tabular for IncrementReport {
    fn csv_header(&self) -> &'static str {
        "r,increment,linear_term,rel_dev"
    }

    fn csv_rows(&self, out: &mut String) {
        for row in &self.rows {
            let _ = write!(out, "{},", row.r);
            cell(out, row.increment);
            out.push(',');
            cell(out, row.linear_term);
            out.push(',');
            cell(out, row.rel_dev);
            out.push('\n');
        }
    }
}

/// Compare J(Tʳ) − J(Tʳ⁻¹) with (1 − c) Tʳ⁻¹ along a k-level tower.
pub fn almost_linear_increment_check(ladder: &Ladder, t: f64, k: usize) -> Result<IncrementReport> {
    check_depth(k)?;
    let tower = ladder.reverse_tower(t, k)?;
    let slope = 1.0 - ladder.config().c;
    let mut rows = Vec::with_capacity(k);
    let mut previous = ladder.j(tower.levels[0])?;
    for r in 1..=k {
        let current = ladder.j(tower.levels[r])?;
        let increment = current - previous;
        let linear_term = slope * tower.levels[r - 1];
        rows.push(IncrementRow {
            r,
            increment,
            linear_term,
            rel_dev: (increment / linear_term - 1.0).abs(),
        });
        previous = current;
    }
    Ok(IncrementReport { base_t: t, k, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LadderConfig;

    #[test]
    fn closed_form_values() {
        assert!((raabe_integral(1.0).unwrap() - (-0.0810614668)).abs() < 1e-10);
        assert!((raabe_integral(10.0).unwrap() - 13.9447894).abs() < 1e-7);
        assert!(raabe_integral(0.0).is_err());
        assert!(raabe_integral(-1.0).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for a in [1.0, 2.5, 10.0, 1e3, 1e4, 1e5] {
            let q = raabe_integral_quadrature(a, 1e-10).unwrap();
            let c = raabe_integral(a).unwrap();
            assert!((q.value - c).abs() < 1e-9, "a = {a}: {:e}", q.value - c);
        }
        let a1 = raabe_integral_quadrature(1.0, 1e-12).unwrap();
        assert!((a1.value + 0.0810614668).abs() < 1e-10);
    }

    #[test]
    fn quadrature_increasing_past_one() {
        let two = raabe_integral_quadrature(2.0, 1e-10).unwrap().value;
        let three = raabe_integral_quadrature(3.0, 1e-10).unwrap().value;
        assert!(three > two);
        assert!(raabe_integral_quadrature(0.0, 1e-10).is_err());
    }

    #[test]
    fn single_row_telescope_is_exact() {
        let ladder = Ladder::new(LadderConfig::default()).unwrap();
        let rep = verify_increment_decomposition(&ladder, 1200.0, 1).unwrap();
        assert_eq!(rep.rows.len(), 1);
        assert_eq!(rep.corollary_residual.to_bits(), rep.rows[0].residual.to_bits());
        let tower = rep.tower.as_ref().unwrap();
        assert_eq!(rep.rows[0].gap, tower.levels[1] - tower.levels[0]);
        assert!(rep.rows[0].gap > 0.0);
        assert!(rep.rows[0].residual.abs() <= 1e-6 * 1200.0);
        assert!((rep.constant_used - 0.2606614).abs() < 1e-6);
    }

    #[test]
    fn depth_bounds() {
        let ladder = Ladder::new(LadderConfig::default()).unwrap();
        assert!(verify_increment_decomposition(&ladder, 1200.0, 0).is_err());
        assert!(almost_linear_increment_check(&ladder, 1200.0, 11).is_err());
    }

    #[test]
    fn csv_shape() {
        let rep = DecompositionReport {
            base_t: 1.0,
            k: 1,
            rows: vec![DecompositionRow { r: 1, lhs: 2.0, rhs: 1.5, residual: 0.5, gap: 3.0 }],
            corollary_residual: 0.5,
            constant_used: 0.26,
            lhs_err_bounds: vec![0.0],
            corollary_lhs: IntegralResult::ZERO,
            tower: None,
        };
        assert_eq!(rep.to_csv(), "r,lhs,rhs,residual,gap\n1,2e0,1.5e0,5e-1,3e0\n");
        let json: serde_json::Value = serde_json::to_value(&rep).unwrap();
        let mut keys: Vec<_> = json.as_object().unwrap().keys().cloned().collect();
        keys.sort();
        assert_eq!(keys, ["base_T", "constant_used", "corollary_residual", "k", "rows"]);
    }
}
