//! The Jacob's ladder φ₁ and its iterations.
//!
//! φ₁(T) is the unique root y of
//!
//! ```text
//! y ln y + (c − ln 2π) y + c₀ = J(T)
//! ```
//!
//! on the branch where the left side is increasing. Its inverse, reverse
//! towers T < T¹ < … < Tᵏ, forward iterates and derivative all go through the
//! same checkpointed J(T), so every identity between them holds to solver and
//! quadrature precision.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constants::{EULER_C, LN_TWO_PI};
use crate::error::{Error, Result};
use crate::quadrature::{HardyLittlewood, DEFAULT_TOL};
use crate::report::{cell, Tabular};
use crate::roots::{bracketed_newton, newton_polish};
use crate::special::hardy_z_unchecked;

/// Deepest tower accepted by [`Ladder::reverse_tower`].
pub const MAX_TOWER_DEPTH: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderConfig {
    /// Euler's constant.
    pub c: f64,
    /// Additive constant of the almost-exact representation.
    pub c0: f64,
    /// Domain floor for every ladder evaluation.
    pub t_min: f64,
    /// Relative tolerance of the root solves.
    pub root_tol: f64,
    pub quad_tol: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig {
            c: EULER_C,
            c0: 0.0,
            t_min: 100.0,
            root_tol: 1e-10,
            quad_tol: DEFAULT_TOL,
        }
    }
}

impl LadderConfig {
    /// Point where y ↦ y ln y + (c − ln 2π) y turns increasing.
    pub fn monotonicity_floor(&self) -> f64 {
        (LN_TWO_PI - 1.0 - self.c).exp()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > self.monotonicity_floor()) || !self.t_min.is_finite() {
            return Err(Error::Parameter(format!(
                "t_min = {} must exceed e^(ln 2π − 1 − c) = {}",
                self.t_min,
                self.monotonicity_floor()
            )));
        }
        if !(self.root_tol > 0.0 && self.quad_tol > 0.0) {
            return Err(Error::Parameter("root_tol and quad_tol must be positive".into()));
        }
        if !(self.c.is_finite() && self.c0.is_finite()) {
            return Err(Error::Parameter("c and c0 must be finite".into()));
        }
        Ok(())
    }
}

/// A height with its reverse iterates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReverseTower {
    #[serde(rename = "base_T")]
    pub base_t: f64,
    pub k: usize,
    /// [T⁰, T¹, …, Tᵏ].
    pub levels: Vec<f64>,
    /// |φ₁(Tʳ) − Tʳ⁻¹| per level; zero at r = 0.
    pub residuals: Vec<f64>,
}

impl ReverseTower {
    pub fn level(&self, r: usize) -> f64 {
        self.levels[r]
    }

    pub fn top(&self) -> f64 {
        self.levels[self.k]
    }
}

/// Ladder evaluator bound to a configuration and a shared J(T) store.
#[derive(Debug, Clone)]
pub struct Ladder {
    cfg: LadderConfig,
    hl: Arc<HardyLittlewood>,
}

impl Ladder {
    /// Ladder over a private in-memory J(T) table.
    pub fn new(cfg: LadderConfig) -> Result<Self> {
        cfg.validate()?;
        let hl = Arc::new(HardyLittlewood::in_memory(cfg.quad_tol));
        Ok(Ladder { cfg, hl })
    }

    /// Ladder over a shared store. The store's tolerance must match `quad_tol`.
    pub fn with_store(cfg: LadderConfig, hl: Arc<HardyLittlewood>) -> Result<Self> {
        cfg.validate()?;
        if hl.tol() != cfg.quad_tol {
            return Err(Error::Parameter(format!(
                "checkpoint store tolerance {:e} differs from quad_tol {:e}",
                hl.tol(),
                cfg.quad_tol
            )));
        }
        Ok(Ladder { cfg, hl })
    }

    pub fn config(&self) -> &LadderConfig {
        &self.cfg
    }

    pub fn store(&self) -> &Arc<HardyLittlewood> {
        &self.hl
    }

    /// y ln y + (c − ln 2π) y + c₀.
    pub fn defining_lhs(&self, y: f64) -> f64 {
        y * y.ln() + (self.cfg.c - LN_TWO_PI) * y + self.cfg.c0
    }

    /// d/dy of [`Ladder::defining_lhs`]: ln y + 1 + c − ln 2π.
    pub fn defining_slope(&self, y: f64) -> f64 {
        y.ln() + 1.0 + self.cfg.c - LN_TWO_PI
    }

    fn check_floor(&self, what: &str, t: f64) -> Result<()> {
        if t >= self.cfg.t_min && t.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{what} requires argument >= t_min = {}, got {t}",
                self.cfg.t_min
            )))
        }
    }

    pub fn j(&self, t: f64) -> Result<f64> {
        self.hl.j_value(t)
    }

    /// φ₁(T).
    pub fn phi1(&self, t: f64) -> Result<f64> {
        self.check_floor("phi1", t)?;
        let j = self.hl.j_value(t)?;
        self.solve_defining(j, t)
    }

    /// Root y ≤ `upper` of defining_lhs(y) = j.
    pub fn solve_defining(&self, j: f64, upper: f64) -> Result<f64> {
        let lo = self.cfg.monotonicity_floor();
        if self.defining_lhs(upper) < j {
            return Err(Error::Bracket(format!(
                "defining equation has no root below {upper} for J = {j}"
            )));
        }
        if self.defining_lhs(lo) > j {
            return Err(Error::Bracket(format!("J = {j} lies below the monotone branch")));
        }
        let f_tol = self.cfg.root_tol * j.abs().max(1.0) * 1e-2;
        // (1 − c) T / ln T below T is the leading-order gap
        let guess = upper - (1.0 - self.cfg.c) * upper / upper.ln().max(1.0);
        let residual = |y: f64| Ok((self.defining_lhs(y) - j, self.defining_slope(y)));
        let y = bracketed_newton(residual, lo, upper, guess, f_tol)?;
        newton_polish(residual, y, lo, upper, 3)
    }

    /// φ₁⁻¹(U): the height T > U with φ₁(T) = U.
    pub fn phi1_inverse(&self, u: f64) -> Result<f64> {
        self.check_floor("phi1_inverse", u)?;
        let target = self.defining_lhs(u);
        let slope = self.defining_slope(u);
        // |J(T) − target| ≤ tol ⇒ |φ₁(T) − U| ≲ tol / slope
        let f_tol = 0.25 * self.cfg.root_tol * u * slope;

        let mut local = LocalJ::new(u, self.hl.j_value(u)?);
        let lo = u;
        let mut width = 2.0 * (1.0 - self.cfg.c) * u / (u.ln() - 0.5).max(1.0) + 10.0;
        let mut hi = u + width;
        let mut expansions = 0;
        while local.eval(&self.hl, hi)? < target {
            expansions += 1;
            if expansions > 40 {
                return Err(Error::Bracket(format!(
                    "could not bracket phi1_inverse({u}) below {hi}"
                )));
            }
            width *= 2.0;
            hi = u + width;
        }
        let guess = u + (1.0 - self.cfg.c) * u / u.ln();

        let mut t = bracketed_newton(
            |t| {
                let z = hardy_z_unchecked(t);
                Ok((local.eval(&self.hl, t)? - target, z * z))
            },
            lo,
            hi,
            guess,
            f_tol,
        )?;
        // Confirm against the canonical J(T); polish on it if the local
        // anchors drifted.
        let canonical = |t: f64| {
            let z = hardy_z_unchecked(t);
            Ok((self.hl.j_value(t)? - target, z * z))
        };
        if (self.hl.j_value(t)? - target).abs() > f_tol {
            t = bracketed_newton(canonical, lo, hi, t, f_tol)?;
        }
        newton_polish(canonical, t, lo, hi, 2)
    }

    /// T⁰ = T, Tʳ = φ₁⁻¹(Tʳ⁻¹) for r = 1..=k.
    pub fn reverse_tower(&self, t: f64, k: usize) -> Result<ReverseTower> {
        self.check_floor("reverse_tower", t)?;
        if !(1..=MAX_TOWER_DEPTH).contains(&k) {
            return Err(Error::Parameter(format!(
                "tower depth must be in 1..={MAX_TOWER_DEPTH}, got {k}"
            )));
        }
        let mut levels = Vec::with_capacity(k + 1);
        let mut residuals = Vec::with_capacity(k + 1);
        levels.push(t);
        residuals.push(0.0);
        for r in 1..=k {
            let next = self.phi1_inverse(levels[r - 1])?;
            residuals.push((self.phi1(next)? - levels[r - 1]).abs());
            levels.push(next);
        }
        Ok(ReverseTower {
            base_t: t,
            k,
            levels,
            residuals,
        })
    }

    /// [φ₁⁰(t), φ₁¹(t), …, φ₁ᵏ(t)].
    pub fn direct_iterate(&self, t: f64, k: usize) -> Result<Vec<f64>> {
        self.check_floor("direct_iterate", t)?;
        let mut out = Vec::with_capacity(k + 1);
        out.push(t);
        for _ in 0..k {
            let last = *out.last().expect("nonempty");
            let next = self.phi1(last)?;
            if next < self.cfg.t_min {
                return Err(Error::Domain(format!(
                    "iterate {next} fell below t_min = {}",
                    self.cfg.t_min
                )));
            }
            out.push(next);
        }
        Ok(out)
    }

    /// φ₁′(t) = Z(t)² / (ln φ₁(t) + 1 + c − ln 2π).
    pub fn phi1_derivative(&self, t: f64) -> Result<f64> {
        let y = self.phi1(t)?;
        Ok(self.derivative_at(t, y))
    }

    /// φ₁′(t) given φ₁(t) = y.
    pub fn derivative_at(&self, t: f64, y: f64) -> f64 {
        let z = hardy_z_unchecked(t);
        z * z / self.defining_slope(y)
    }

    /// Z̃(t) = √φ₁′(t).
    pub fn z_tilde(&self, t: f64) -> Result<f64> {
        Ok(self.phi1_derivative(t)?.sqrt())
    }
}

impl Tabular for ReverseTower {
    fn csv_header(&self) -> &'static str {
        "r,level,residual"
    }

    fn csv_rows(&self, out: &mut String) {
        for (r, (level, residual)) in self.levels.iter().zip(&self.residuals).enumerate() {
            let _ = write!(out, "{r},");
            cell(out, *level);
            out.push(',');
            cell(out, *residual);
            out.push('\n');
        }
    }
}

/// φ₁(T) against its asymptotic gap laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderLaws {
    #[serde(rename = "T")]
    pub t: f64,
    pub phi1: f64,
    /// T − φ₁(T).
    pub gap: f64,
    /// gap / ((1 − c) T / ln T).
    pub gap_law_ratio: f64,
    /// π(T), exact.
    pub prime_count: u64,
    /// gap / ((1 − c) π(T)).
    pub pi_ratio: f64,
    /// (φ₁(T) + (1 − c) π(T)) / T.
    pub complementarity: f64,
}

impl Tabular for LadderLaws {
    fn csv_header(&self) -> &'static str {
        "T,phi1,gap,gap_law_ratio,prime_count,pi_ratio,complementarity"
    }

    fn csv_rows(&self, out: &mut String) {
        for v in [self.t, self.phi1, self.gap, self.gap_law_ratio] {
            cell(out, v);
            out.push(',');
        }
        let _ = write!(out, "{},", self.prime_count);
        cell(out, self.pi_ratio);
        out.push(',');
        cell(out, self.complementarity);
        out.push('\n');
    }
}

impl Ladder {
    /// Gap and complementarity ratios at T; needs T within the sieve range.
    pub fn laws(&self, t: f64) -> Result<LadderLaws> {
        let phi1 = self.phi1(t)?;
        let prime_count = crate::special::prime_count(t)?;
        let slope = 1.0 - self.cfg.c;
        let gap = t - phi1;
        let pi = prime_count as f64;
        Ok(LadderLaws {
            t,
            phi1,
            gap,
            gap_law_ratio: gap / (slope * t / t.ln()),
            prime_count,
            pi_ratio: gap / (slope * pi),
            complementarity: (phi1 + slope * pi) / t,
        })
    }
}

/// J(t) near a canonical anchor, extended by short integrals from the
/// nearest known point. Used where many nearby heights are evaluated.
#[derive(Debug, Clone)]
pub(crate) struct LocalJ {
    /// (t, J(t)) sorted by t.
    anchors: Vec<(f64, f64)>,
}

impl LocalJ {
    pub(crate) fn new(t: f64, j: f64) -> Self {
        LocalJ {
            anchors: vec![(t, j)],
        }
    }

    pub(crate) fn eval(&mut self, hl: &HardyLittlewood, t: f64) -> Result<f64> {
        let idx = self.anchors.partition_point(|a| a.0 <= t);
        let value = if idx == 0 {
            let (t0, j0) = self.anchors[0];
            j0 - hl.integrate(t, t0)?.value
        } else {
            let (t0, j0) = self.anchors[idx - 1];
            if t0 == t {
                return Ok(j0);
            }
            j0 + hl.integrate(t0, t)?.value
        };
        self.anchors.insert(idx, (t, value));
        Ok(value)
    }
}
