//! Limit functionals along rays and the Fermat rationals fed into them.
//!
//! For x > 0 and ρ = xτ/(1 − c) both
//!
//! ```text
//! (1/τ) ∫_ρ^{φ₁⁻¹(ρ)} Z² dt          and          (1/τ) [R(ρ) − R(φ₁(ρ))]
//! ```
//!
//! tend to x as τ → ∞. Everything here is finite-τ evidence: a trace is a
//! handful of values with a fitted residual model, never a limit.

use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ladder::Ladder;
use crate::raabe::raabe_integral;
use crate::report::{cell, Tabular};

/// Default ceiling on z in [`fermat_rationals`].
pub const DEFAULT_Z_MAX: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    ZetaIntegral,
    RaabeDifference,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zeta" | "zeta_integral" | "zeta-integral" => Ok(Variant::ZetaIntegral),
            "raabe" | "raabe_difference" | "raabe-difference" => Ok(Variant::RaabeDifference),
            other => Err(Error::Parameter(format!("unknown functional variant `{other}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::ZetaIntegral => "zeta_integral",
            Variant::RaabeDifference => "raabe_difference",
        })
    }
}

/// ρ = xτ/(1 − c), the lower end of the ray integral.
pub fn ray_height(ladder: &Ladder, x: f64, tau: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("functional requires x > 0, got {x}")));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Domain(format!("functional requires tau > 0, got {tau}")));
    }
    let rho = x * tau / (1.0 - ladder.config().c);
    if rho < ladder.config().t_min {
        return Err(Error::Domain(format!(
            "rho = x tau / (1 - c) = {rho} is below t_min = {}",
            ladder.config().t_min
        )));
    }
    Ok(rho)
}

/// The integration window [ρ, φ₁⁻¹(ρ)] of the zeta functional.
pub fn zeta_window(ladder: &Ladder, x: f64, tau: f64) -> Result<(f64, f64)> {
    let rho = ray_height(ladder, x, tau)?;
    Ok((rho, ladder.phi1_inverse(rho)?))
}

/// (1/τ) ∫_ρ^{φ₁⁻¹(ρ)} Z(t)² dt.
pub fn functional_zeta(ladder: &Ladder, x: f64, tau: f64) -> Result<f64> {
    let (rho, upper) = zeta_window(ladder, x, tau)?;
    Ok(ladder.store().integrate(rho, upper)?.value / tau)
}

/// (1/τ) [R(ρ) − R(φ₁(ρ))] with R in closed form.
pub fn functional_raabe(ladder: &Ladder, x: f64, tau: f64) -> Result<f64> {
    let rho = ray_height(ladder, x, tau)?;
    let lower = ladder.phi1(rho)?;
    Ok((raabe_integral(rho)? - raabe_integral(lower)?) / tau)
}

pub fn functional(ladder: &Ladder, variant: Variant, x: f64, tau: f64) -> Result<f64> {
    match variant {
        Variant::ZetaIntegral => functional_zeta(ladder, x, tau),
        Variant::RaabeDifference => functional_raabe(ladder, x, tau),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub tau: f64,
    pub value: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    #[serde(rename = "C")]
    pub c: f64,
    /// R² of the log-residual fit; 0 marks an invalid fit.
    pub quality: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalTrace {
    pub target_x: f64,
    pub variant: Variant,
    pub points: Vec<TracePoint>,
    pub fit: Fit,
}

impl FunctionalTrace {
    pub fn is_valid_fit(&self) -> bool {
        self.fit.quality > 0.0
    }
}

impl Tabular for FunctionalTrace {
    fn csv_header(&self) -> &'static str {
        "tau,value,residual"
    }

    fn csv_rows(&self, out: &mut String) {
        points_csv(&self.points, out);
    }
}

fn points_csv(points: &[TracePoint], out: &mut String) {
    for p in points {
        cell(out, p.tau);
        out.push(',');
        cell(out, p.value);
        out.push(',');
        cell(out, p.residual);
        out.push('\n');
    }
}

/// Shape g(τ) of the residual model residual ≈ C·g(τ).
fn model_shape(ladder: &Ladder, variant: Variant, x: f64, tau: f64) -> Result<f64> {
    let rho = ray_height(ladder, x, tau)?;
    Ok(match variant {
        Variant::RaabeDifference => 1.0 / rho.ln(),
        Variant::ZetaIntegral => rho.cbrt() / tau,
    })
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::Parameter(format!(
            "convergence trace needs at least 3 tau values, got {}",
            grid.len()
        )));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Parameter("tau grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Residuals share one nonzero sign and shrink strictly in magnitude.
fn monotone(residuals: &[f64]) -> bool {
    let sign = residuals[0].signum();
    residuals.iter().all(|r| r.signum() == sign && *r != 0.0 && r.is_finite())
        && residuals.windows(2).all(|w| w[1].abs() < w[0].abs())
}

/// Least squares for residual ≈ C·g on log scale; falls back to a linear
/// fit with quality 0 when the residuals are not monotone.
fn fit_model(residuals: &[f64], shapes: &[f64]) -> Fit {
    if !monotone(residuals) {
        let num: f64 = residuals.iter().zip(shapes).map(|(r, g)| r * g).sum();
        let den: f64 = shapes.iter().map(|g| g * g).sum();
        return Fit { c: num / den, quality: 0.0 };
    }
    let n = residuals.len() as f64;
    let logs: Vec<f64> = residuals.iter().map(|r| r.abs().ln()).collect();
    let offset = logs.iter().zip(shapes).map(|(l, g)| l - g.ln()).sum::<f64>() / n;
    let mean = logs.iter().sum::<f64>() / n;
    let ss_tot: f64 = logs.iter().map(|l| (l - mean).powi(2)).sum();
    let ss_res: f64 = logs
        .iter()
        .zip(shapes)
        .map(|(l, g)| (l - offset - g.ln()).powi(2))
        .sum();
    let quality = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    Fit { c: residuals[0].signum() * offset.exp(), quality }
}

/// Evaluate one functional on a τ grid and fit its residual model.
pub fn convergence_trace(ladder: &Ladder, x: f64, grid: &[f64], variant: Variant) -> Result<FunctionalTrace> {
    check_grid(grid)?;
    let mut points = Vec::with_capacity(grid.len());
    let mut shapes = Vec::with_capacity(grid.len());
    for &tau in grid {
        let value = functional(ladder, variant, x, tau)?;
        points.push(TracePoint { tau, value, residual: value - x });
        shapes.push(model_shape(ladder, variant, x, tau)?);
    }
    let residuals: Vec<f64> = points.iter().map(|p| p.residual).collect();
    let fit = fit_model(&residuals, &shapes);
    Ok(FunctionalTrace { target_x: x, variant, points, fit })
}

/// (xⁿ + yⁿ)/zⁿ with exact numerator and denominator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FermatRational {
    pub x: u32,
    pub y: u32,
    pub z: u32,
    pub n: u32,
    /// Reduced numerator, as a decimal string.
    #[serde(serialize_with = "as_decimal")]
    pub num: BigUint,
    /// Reduced denominator, as a decimal string.
    #[serde(serialize_with = "as_decimal")]
    pub den: BigUint,
}

fn as_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl FermatRational {
    pub fn new(x: u32, y: u32, z: u32, n: u32) -> Result<Self> {
        if n < 3 || x == 0 || y == 0 || z == 0 {
            return Err(Error::Parameter(format!(
                "Fermat rational needs x, y, z >= 1 and n >= 3, got ({x}, {y}, {z}, {n})"
            )));
        }
        let lhs = BigUint::from(x).pow(n) + BigUint::from(y).pow(n);
        let den = BigUint::from(z).pow(n);
        if lhs == den {
            return Err(Error::Parameter(format!("x^n + y^n = z^n for ({x}, {y}, {z}, {n})")));
        }
        let value = BigRational::new(lhs.into(), den.into());
        Ok(FermatRational {
            x,
            y,
            z,
            n,
            num: value.numer().magnitude().clone(),
            den: value.denom().magnitude().clone(),
        })
    }

    pub fn exact(&self) -> BigRational {
        BigRational::new(self.num.clone().into(), self.den.clone().into())
    }

    pub fn value(&self) -> f64 {
        self.exact().to_f64().unwrap_or(f64::INFINITY)
    }

    /// |value − 1| exactly.
    pub fn distance_from_one(&self) -> BigRational {
        (self.exact() - BigRational::from_integer(1.into())).abs()
    }

    /// xⁿ + yⁿ ≠ zⁿ, rechecked from scratch.
    pub fn is_not_fermat_triple(&self) -> bool {
        let n = self.n;
        BigUint::from(self.x).pow(n) + BigUint::from(self.y).pow(n) != BigUint::from(self.z).pow(n)
    }

    pub fn mirrored(&self) -> Self {
        FermatRational { x: self.y, y: self.x, ..self.clone() }
    }
}

impl fmt::Display for FermatRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}^{n} + {}^{n})/{}^{n} = {}/{}", self.x, self.y, self.z, self.num, self.den, n = self.n)
    }
}

/// All (x, y, z, n) with 3 ≤ n ≤ n_max, z ≤ z_max and value in (1 − ε, 1 + ε).
///
/// The search runs over x ≤ y; each hit with x ≠ y is emitted in both
/// orientations so the list is closed under x ↔ y. Sorted by |value − 1|,
/// then by (n, z, x, y).
pub fn fermat_rationals(eps: f64, n_max: u32, z_max: u32) -> Result<Vec<FermatRational>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if n_max < 3 {
        return Err(Error::Parameter(format!("n_max must be >= 3, got {n_max}")));
    }
    if z_max < 1 {
        return Err(Error::Parameter(format!("z_max must be >= 1, got {z_max}")));
    }
    let eps_exact = BigRational::from_float(eps).expect("finite epsilon");

    let mut found = Vec::new();
    for n in 3..=n_max {
        let powers: Vec<BigUint> = (0..=z_max).map(|k| BigUint::from(k).pow(n)).collect();
        for z in 1..=z_max {
            let zn = &powers[z as usize];
            let zn_rat = BigRational::from_integer(zn.clone().into());
            let band = &eps_exact * &zn_rat;
            // |xⁿ + yⁿ − zⁿ| < ε zⁿ
            let low = &zn_rat - &band;
            let high = &zn_rat + &band;
            for y in 1..=z {
                let yn = &powers[y as usize];
                for x in 1..=y {
                    let sum = yn + &powers[x as usize];
                    let sum_rat = BigRational::from_integer(sum.clone().into());
                    if sum_rat >= high {
                        break;
                    }
                    if sum_rat > low && &sum != zn {
                        found.push(FermatRational::new(x, y, z, n)?);
                    }
                }
            }
        }
    }

    let mut all: Vec<FermatRational> = Vec::with_capacity(2 * found.len());
    for r in found {
        if r.x != r.y {
            all.push(r.mirrored());
        }
        all.push(r);
    }
    let mut keyed: Vec<(BigRational, FermatRational)> =
        all.into_iter().map(|r| (r.distance_from_one(), r)).collect();
    keyed.sort_by(|(da, a), (db, b)| {
        da.cmp(db)
            .then(a.n.cmp(&b.n))
            .then(a.z.cmp(&b.z))
            .then(a.x.cmp(&b.x))
            .then(a.y.cmp(&b.y))
    });
    keyed.dedup_by(|a, b| a.1 == b.1);
    Ok(keyed.into_iter().map(|(_, r)| r).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flag {
    #[serde(rename = "distinguishable")]
    Distinguishable,
    #[serde(rename = "indistinguishable at desk scale")]
    Indistinguishable,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flag::Distinguishable => "distinguishable",
            Flag::Indistinguishable => "indistinguishable at desk scale",
            Flag::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceEntry {
    pub rational: FermatRational,
    pub variant: Variant,
    pub points: Vec<TracePoint>,
    pub fit: Fit,
    pub flag: Flag,
    /// Finite-τ error band at the largest τ.
    pub band: f64,
    /// Last value with the fitted model residual removed.
    pub extrapolated_limit: f64,
}

impl EquivalenceEntry {
    pub fn trace(&self) -> FunctionalTrace {
        FunctionalTrace {
            target_x: self.rational.value(),
            variant: self.variant,
            points: self.points.clone(),
            fit: self.fit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub entries: Vec<EquivalenceEntry>,
}

impl Tabular for EquivalenceReport {
    fn csv_header(&self) -> &'static str {
        "x,y,z,n,tau,value,residual"
    }

    fn csv_rows(&self, out: &mut String) {
        for e in &self.entries {
            for p in &e.points {
                let r = &e.rational;
                let _ = write!(out, "{},{},{},{},", r.x, r.y, r.z, r.n);
                points_csv(std::slice::from_ref(p), out);
            }
        }
    }
}

/// Classify a trace: inside the finite-τ band of 1, clearly away from 1,
/// or neither.
fn classify(gap: f64, trace: &FunctionalTrace, last_shape: f64) -> (Flag, f64, f64) {
    let last = trace.points.last().expect("trace has points");
    let band = (trace.fit.c * last_shape).abs().max(last.residual.abs());
    let limit = last.value - trace.fit.c * last_shape;
    let flag = if gap <= band {
        Flag::Indistinguishable
    } else if !trace.is_valid_fit() {
        Flag::Inconclusive
    } else if (limit - 1.0).abs() >= gap / 2.0 {
        Flag::Distinguishable
    } else {
        Flag::Inconclusive
    };
    (flag, band, limit)
}

/// One trace per rational with target x = its exact value, plus a flag.
pub fn equivalence_report(
    ladder: &Ladder,
    rationals: &[FermatRational],
    grid: &[f64],
    variant: Variant,
) -> Result<EquivalenceReport> {
    if rationals.is_empty() {
        return Err(Error::Parameter("equivalence report needs at least one rational".into()));
    }
    if grid.is_empty() {
        return Err(Error::Parameter("equivalence report needs a tau grid".into()));
    }
    let mut entries = Vec::with_capacity(rationals.len());
    for r in rationals {
        let x = r.value();
        let trace = convergence_trace(ladder, x, grid, variant)?;
        let gap = r.distance_from_one().to_f64().unwrap_or(f64::INFINITY);
        let last_shape = model_shape(ladder, variant, x, *grid.last().expect("nonempty"))?;
        let (flag, band, extrapolated_limit) = classify(gap, &trace, last_shape);
        entries.push(EquivalenceEntry {
            rational: r.clone(),
            variant,
            points: trace.points,
            fit: trace.fit,
            flag,
            band,
            extrapolated_limit,
        });
    }
    Ok(EquivalenceReport { entries })
}
