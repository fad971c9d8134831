//! Proliferation of the Legendre system through ladder automorphisms.
//!
//! For a generation p the affine window [Tᵖ, (T+2)ᵖ] is pulled back to
//! [T, T+2] by p applications of φ₁, giving the automorphism
//!
//! ```text
//! u_p(t) = φ₁ᵖ(((T+2)ᵖ − Tᵖ)/2 · (t+1) + Tᵖ) − T − 1
//! ```
//!
//! of [−1, 1]. Each new function is P_n(u(t)) times the product of |Z̃| over
//! the intermediate points v_pʳ(t), r = 0..p−1. Since Z̃² = dφ₁/dt the
//! products collapse to u′ up to the constant 2/((T+2)ᵖ − Tᵖ), which is what
//! makes the new systems orthogonal again.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ladder::{Ladder, MAX_TOWER_DEPTH};
use crate::quadrature::{gauss16, max_panel_width, GaussRule};
use crate::report::{cell, Tabular};
use crate::special::hardy_z_unchecked;

/// Gram panels are capped at this fraction of the local zero spacing.
const PANELS_PER_ZERO_GAP: f64 = 20.0;
const GRAM_MAX_DEPTH: usize = 12;
/// Per-panel acceptance, relative to the predicted diagonal scale.
const GRAM_REL_TOL: f64 = 1e-8;

/// P_n(t) by the three-term recurrence.
pub fn legendre_eval(n: usize, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("Legendre argument {t} outside [-1, 1]")));
    }
    Ok(legendre_all(n + 1, t)[n])
}

/// [P_0(t), …, P_{count−1}(t)].
fn legendre_all(count: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..count {
        out.push(cur);
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProliferationSpec {
    #[serde(rename = "base_T")]
    pub base_t: f64,
    /// [p₁, …, p_s]; p₁ is the outermost generation.
    pub generations: Vec<usize>,
    /// Functions 0..N−1.
    #[serde(rename = "N")]
    pub n: usize,
    /// Gauss–Legendre order per Gram panel.
    pub quad_order: usize,
}

impl ProliferationSpec {
    pub fn new(base_t: f64, generations: Vec<usize>, n: usize) -> Self {
        ProliferationSpec { base_t, generations, n, quad_order: 16 }
    }

    pub fn max_generation(&self) -> usize {
        self.generations.iter().copied().max().unwrap_or(0)
    }

    pub fn validate(&self, ladder: &Ladder) -> Result<()> {
        if self.generations.is_empty() {
            return Err(Error::Parameter("at least one generation is required".into()));
        }
        if let Some(&p) = self.generations.iter().find(|&&p| !(1..=MAX_TOWER_DEPTH).contains(&p)) {
            return Err(Error::Parameter(format!(
                "generation depth {p} outside 1..={MAX_TOWER_DEPTH}"
            )));
        }
        if self.n < 1 {
            return Err(Error::Parameter("N must be at least 1".into()));
        }
        if !(2..=64).contains(&self.quad_order) || self.quad_order % 2 != 0 {
            return Err(Error::Parameter(format!(
                "quad_order must be even and in 2..=64, got {}",
                self.quad_order
            )));
        }
        if !(self.base_t >= ladder.config().t_min) || !self.base_t.is_finite() {
            return Err(Error::Domain(format!(
                "base_T = {} is below t_min = {}",
                self.base_t,
                ladder.config().t_min
            )));
        }
        Ok(())
    }
}

/// Points of one generation's chain at a single argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    /// v⁰ = affine point, vʳ⁺¹ = φ₁(vʳ); length p + 1.
    pub v: Vec<f64>,
    /// u_p(t) = vᵖ − T − 1.
    pub u: f64,
    /// ∏_{r<p} |Z̃(vʳ)|.
    pub weight: f64,
}

/// Reverse towers of T and T+2 and the canonical J at each lower window end.
pub struct Proliferator<'a> {
    ladder: &'a Ladder,
    spec: ProliferationSpec,
    low: Vec<f64>,
    high: Vec<f64>,
    anchors: Vec<f64>,
    /// Gauss panels per full window at each level.
    window_panels: Vec<usize>,
}

impl<'a> Proliferator<'a> {
    pub fn new(ladder: &'a Ladder, spec: ProliferationSpec) -> Result<Self> {
        spec.validate(ladder)?;
        let depth = spec.max_generation();
        let low = ladder.reverse_tower(spec.base_t, depth)?.levels;
        let high = ladder.reverse_tower(spec.base_t + 2.0, depth)?.levels;
        let anchors = low.iter().map(|&t| ladder.j(t)).collect::<Result<Vec<_>>>()?;
        let window_panels = low
            .iter()
            .zip(&high)
            .map(|(&lo, &hi)| ((hi - lo) / (0.5 * max_panel_width(hi))).ceil().max(1.0) as usize)
            .collect();
        Ok(Proliferator { ladder, spec, low, high, anchors, window_panels })
    }

    pub fn spec(&self) -> &ProliferationSpec {
        &self.spec
    }

    /// [Tᵠ, (T+2)ᵠ].
    pub fn window(&self, q: usize) -> (f64, f64) {
        (self.low[q], self.high[q])
    }

    /// (T+2)ᵖ − Tᵖ.
    pub fn window_width(&self, p: usize) -> f64 {
        self.high[p] - self.low[p]
    }

    fn check_depth(&self, p: usize) -> Result<()> {
        if (1..self.low.len()).contains(&p) {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "generation {p} outside the prepared tower depth 1..={}",
                self.low.len() - 1
            )))
        }
    }

    fn check_arg(t: f64) -> Result<()> {
        if (-1.0..=1.0).contains(&t) {
            Ok(())
        } else {
            Err(Error::Domain(format!("argument {t} outside [-1, 1]")))
        }
    }

    fn affine(&self, p: usize, t: f64) -> f64 {
        if t == -1.0 {
            self.low[p]
        } else if t == 1.0 {
            self.high[p]
        } else {
            0.5 * self.window_width(p) * (t + 1.0) + self.low[p]
        }
    }

    /// J(v) for v in the level-q window, anchored at Tᵠ.
    ///
    /// A fixed count of equal Gauss panels on [Tᵠ, v] keeps J smooth in v;
    /// an adaptive layout would jump with v and feed noise into the Gram
    /// quadrature.
    fn window_j(&self, q: usize, v: f64) -> Result<f64> {
        let base = self.low[q];
        if v == base {
            return Ok(self.anchors[q]);
        }
        let h = (v - base) / self.window_panels[q] as f64;
        let rule = gauss16();
        let part: f64 = (0..self.window_panels[q])
            .map(|i| {
                let lo = base + i as f64 * h;
                rule.integrate(lo, lo + h, |t| {
                    let z = hardy_z_unchecked(t);
                    z * z
                })
            })
            .sum();
        Ok(self.anchors[q] + part)
    }

    /// Full chain of generation p at argument t.
    pub fn chain(&self, p: usize, t: f64) -> Result<Chain> {
        self.check_depth(p)?;
        Self::check_arg(t)?;
        let mut v = Vec::with_capacity(p + 1);
        v.push(self.affine(p, t));
        let mut weight = 1.0;
        for r in 0..p {
            let q = p - r;
            let cur = v[r];
            let next = self.ladder.solve_defining(self.window_j(q, cur)?, cur)?;
            let z = hardy_z_unchecked(cur);
            weight *= (z * z / self.ladder.defining_slope(next)).sqrt();
            v.push(next);
        }
        let u = (v[p] - self.spec.base_t - 1.0).clamp(-1.0, 1.0);
        Ok(Chain { v, u, weight })
    }

    /// u_p(t).
    pub fn u_map(&self, p: usize, t: f64) -> Result<f64> {
        Ok(self.chain(p, t)?.u)
    }

    /// v_pʳ(t) for 0 ≤ r ≤ p − 1.
    pub fn v_map(&self, p: usize, r: usize, t: f64) -> Result<f64> {
        self.check_depth(p)?;
        if r >= p {
            return Err(Error::Parameter(format!("index r = {r} must be below p = {p}")));
        }
        Self::check_arg(t)?;
        if r == 0 {
            return Ok(self.affine(p, t));
        }
        Ok(self.chain(p, t)?.v[r])
    }

    /// Innermost-first pass through every generation: (P argument, weight).
    fn compose(&self, t: f64) -> Result<(f64, f64)> {
        let mut arg = t;
        let mut weight = 1.0;
        for &p in self.spec.generations.iter().rev() {
            let ch = self.chain(p, arg)?;
            weight *= ch.weight;
            arg = ch.u;
        }
        Ok((arg, weight))
    }

    /// fₙ(t) for the configured generations.
    pub fn proliferate(&self, n: usize, t: f64) -> Result<f64> {
        if n >= self.spec.n {
            return Err(Error::Parameter(format!("n = {n} must be below N = {}", self.spec.n)));
        }
        let (arg, weight) = self.compose(t)?;
        Ok(legendre_all(n + 1, arg)[n] * weight)
    }

    /// [f₀(t), …, f_{N−1}(t)].
    pub fn proliferate_all(&self, t: f64) -> Result<Vec<f64>> {
        let (arg, weight) = self.compose(t)?;
        Ok(legendre_all(self.spec.n, arg).into_iter().map(|p| p * weight).collect())
    }

    /// ∏ᵢ 2/((T+2)^{pᵢ} − T^{pᵢ}), the predicted common Gram scale.
    pub fn scale_constant(&self) -> f64 {
        self.spec.generations.iter().map(|&p| 2.0 / self.window_width(p)).product()
    }

    /// Largest t-panel keeping every generation below 1/20 of the zero
    /// spacing at the top of its window.
    fn panel_width(&self) -> f64 {
        self.spec
            .generations
            .iter()
            .map(|&p| {
                let top = self.high[p];
                let gap = std::f64::consts::TAU / (top / std::f64::consts::TAU).ln().max(1.0);
                gap / PANELS_PER_ZERO_GAP * 2.0 / self.window_width(p)
            })
            .fold(2.0, f64::min)
    }

    pub fn gram_matrix(&self) -> Result<GramResult> {
        let n = self.spec.n;
        let fine = GaussRule::new(self.spec.quad_order);
        let coarse = GaussRule::new(self.spec.quad_order / 2);

        let count = (2.0 / self.panel_width()).ceil() as usize;
        let h = 2.0 / count as f64;
        let panels: Vec<(f64, f64)> = (0..count)
            .map(|i| {
                let lo = -1.0 + i as f64 * h;
                (lo, if i + 1 == count { 1.0 } else { lo + h })
            })
            .collect();
        let parts = panels
            .par_iter()
            .map(|&(lo, hi)| self.adaptive_panel(&fine, &coarse, lo, hi, 0))
            .collect::<Result<Vec<_>>>()?;

        // panel order fixes the summation order
        let mut matrix = vec![0.0; n * n];
        let mut err_bound = 0.0;
        for (g, err) in parts {
            for (m, v) in matrix.iter_mut().zip(&g) {
                *m += v;
            }
            err_bound += err;
        }

        let rows: Vec<Vec<f64>> = matrix.chunks(n).map(<[f64]>::to_vec).collect();
        let diag: Vec<f64> = (0..n).map(|i| rows[i][i]).collect();
        let mut max_offdiag = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    max_offdiag = max_offdiag.max(rows[i][j].abs() / (diag[i] * diag[j]).sqrt());
                }
            }
        }
        Ok(GramResult {
            matrix: rows,
            max_offdiag_normalized: max_offdiag,
            diag,
            scale_constant: self.scale_constant(),
            err_bound,
            spec: self.spec.clone(),
        })
    }

    fn adaptive_panel(
        &self,
        fine: &GaussRule,
        coarse: &GaussRule,
        lo: f64,
        hi: f64,
        depth: usize,
    ) -> Result<(Vec<f64>, f64)> {
        let n = self.spec.n;
        let g_fine = self.panel_gram(fine, lo, hi)?;
        let g_coarse = self.panel_gram(coarse, lo, hi)?;
        let scale = g_fine.iter().step_by(n + 1).fold(0.0f64, |m, d| m.max(d.abs()));
        let diff = g_fine
            .iter()
            .zip(&g_coarse)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        // measured against the whole-interval size, not this panel's, which
        // vanishes near zeros of Z
        let tol = GRAM_REL_TOL * self.scale_constant() * (hi - lo) / 2.0 + 64.0 * f64::EPSILON * scale;
        if diff <= tol || depth >= GRAM_MAX_DEPTH {
            return Ok((g_fine, diff));
        }
        let mid = 0.5 * (lo + hi);
        let (mut left, e1) = self.adaptive_panel(fine, coarse, lo, mid, depth + 1)?;
        let (right, e2) = self.adaptive_panel(fine, coarse, mid, hi, depth + 1)?;
        for (a, b) in left.iter_mut().zip(&right) {
            *a += b;
        }
        Ok((left, e1 + e2))
    }

    /// Σ_k w_k f(t_k) f(t_k)ᵀ over one panel, row-major.
    fn panel_gram(&self, rule: &GaussRule, lo: f64, hi: f64) -> Result<Vec<f64>> {
        let n = self.spec.n;
        let mut g = vec![0.0; n * n];
        for (t, w) in rule.mapped(lo, hi) {
            let f = self.proliferate_all(t)?;
            for i in 0..n {
                for j in i..n {
                    let v = w * (f[i] * f[j]);
                    g[i * n + j] += v;
                    if j != i {
                        g[j * n + i] += v;
                    }
                }
            }
        }
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramResult {
    /// Row-major; emitted as CSV, left out of the JSON summary.
    #[serde(skip)]
    pub matrix: Vec<Vec<f64>>,
    pub max_offdiag_normalized: f64,
    pub diag: Vec<f64>,
    /// ∏ 2/((T+2)^p − T^p): predicted common factor of G_nn·(2n+1)/2.
    pub scale_constant: f64,
    pub err_bound: f64,
    pub spec: ProliferationSpec,
}

impl GramResult {
    /// G_nn·(2n+1)/2, which equals `scale_constant` for an exact pull-back.
    pub fn normalized_diag(&self) -> Vec<f64> {
        self.diag
            .iter()
            .enumerate()
            .map(|(n, d)| d * (2 * n + 1) as f64 / 2.0)
            .collect()
    }
}

impl Tabular for GramResult {
    fn csv_header(&self) -> &'static str {
        ""
    }

    fn csv_rows(&self, out: &mut String) {
        for row in &self.matrix {
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                cell(out, *v);
            }
            out.push('\n');
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..self.matrix.len() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "g{j}");
        }
        out.push('\n');
        self.csv_rows(&mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_closed_forms() {
        assert_eq!(legendre_eval(0, 0.7).unwrap(), 1.0);
        assert_eq!(legendre_eval(1, 0.3).unwrap(), 0.3);
        assert!((legendre_eval(2, 0.5).unwrap() + 0.125).abs() < 1e-15);
        let t: f64 = 0.37;
        let p3 = 0.5 * (5.0 * t.powi(3) - 3.0 * t);
        assert!((legendre_eval(3, t).unwrap() - p3).abs() < 1e-15);
        assert!(legendre_eval(2, 1.5).is_err());
        for n in 0..12 {
            assert!((legendre_eval(n, 1.0).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn legendre_orthogonal_under_gauss() {
        let rule = GaussRule::new(16);
        for a in 0..6 {
            for b in 0..6 {
                let g = rule.integrate(-1.0, 1.0, |t| {
                    legendre_eval(a, t).unwrap() * legendre_eval(b, t).unwrap()
                });
                let expect = if a == b { 2.0 / (2 * a + 1) as f64 } else { 0.0 };
                assert!((g - expect).abs() < 1e-14);
            }
        }
    }

    use crate::LadderConfig;

    fn shared_ladder() -> &'static Ladder {
        static LADDER: std::sync::OnceLock<Ladder> = std::sync::OnceLock::new();
        LADDER.get_or_init(|| Ladder::new(LadderConfig::default()).unwrap())
    }

    fn proliferator(ladder: &Ladder, generations: Vec<usize>, n: usize) -> Proliferator<'_> {
        Proliferator::new(ladder, ProliferationSpec::new(1e4, generations, n)).unwrap()
    }

    #[test]
    fn maps_at_1e4() {
        let ladder = shared_ladder();
        let pr = proliferator(ladder, vec![2], 4);
        for p in [1, 2] {
            assert!((pr.u_map(p, -1.0).unwrap() + 1.0).abs() <= 1e-8);
            assert!((pr.u_map(p, 1.0).unwrap() - 1.0).abs() <= 1e-8);
            assert_eq!(pr.v_map(p, 0, -1.0).unwrap(), pr.window(p).0);
            assert_eq!(pr.v_map(p, 0, 1.0).unwrap(), pr.window(p).1);
        }
        let mid = pr.v_map(2, 1, 0.0).unwrap();
        let (lo, hi) = pr.window(1);
        assert!(lo <= mid && mid <= hi);
        let mut last = -1.0;
        for i in 1..=20 {
            let t = -1.0 + 2.0 * i as f64 / 21.0;
            let u = pr.u_map(1, t).unwrap();
            assert!(u > last && u < 1.0);
            last = u;
        }
        assert!(pr.v_map(2, 2, 0.0).is_err());
        assert!(pr.u_map(3, 0.0).is_err());
        assert!(pr.u_map(1, 1.5).is_err());
    }

    #[test]
    fn single_generation_structure() {
        let ladder = shared_ladder();
        let pr = proliferator(ladder, vec![1], 4);
        let f0 = pr.proliferate(0, -1.0).unwrap();
        let zt = ladder.z_tilde(pr.window(1).0).unwrap();
        assert!((f0 - zt).abs() <= 1e-8 * zt);
        let mut changes = 0;
        let mut prev = pr.proliferate(3, -1.0).unwrap();
        for i in 1..=2000 {
            let t = -1.0 + 2.0 * i as f64 / 2000.0;
            let f = pr.proliferate(3, t).unwrap();
            if f * prev < 0.0 {
                changes += 1;
            }
            if f != 0.0 {
                prev = f;
            }
        }
        assert!(changes >= 3);
        assert!(pr.proliferate(4, 0.0).is_err());
    }

    #[test]
    fn gram_single_generation() {
        let ladder = shared_ladder();
        let pr = proliferator(ladder, vec![1], 6);
        let g = pr.gram_matrix().unwrap();
        assert!(g.max_offdiag_normalized < 1e-4, "{}", g.max_offdiag_normalized);
        for (i, d) in g.normalized_diag().iter().enumerate() {
            assert!((d / g.scale_constant - 1.0).abs() < 0.01, "n = {i}: {d} vs {}", g.scale_constant);
        }
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.matrix[i][j], g.matrix[j][i]);
            }
        }
    }

    #[test]
    fn gram_trivial_size() {
        let ladder = shared_ladder();
        let g = proliferator(ladder, vec![1], 1).gram_matrix().unwrap();
        assert_eq!(g.matrix.len(), 1);
        assert_eq!(g.max_offdiag_normalized, 0.0);
        assert!(g.diag[0] > 0.0);
    }

    #[test]
    fn gram_csv_shape() {
        let g = GramResult {
            matrix: vec![vec![1.0, 0.5], vec![0.5, 2.0]],
            max_offdiag_normalized: 0.0,
            diag: vec![1.0, 2.0],
            scale_constant: 1.0,
            err_bound: 0.0,
            spec: ProliferationSpec::new(1e3, vec![1], 2),
        };
        assert_eq!(g.to_csv(), "g0,g1\n1e0,5e-1\n5e-1,2e0\n");
    }
}
