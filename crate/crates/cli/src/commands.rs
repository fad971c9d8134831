//! Subcommand execution.

use std::fmt::Write as _;
use std::sync::Arc;

use ladderlab::fermat::{convergence_trace, equivalence_report, fermat_rationals, FermatRational, Variant};
use ladderlab::quadrature::hli_reference;
use ladderlab::raabe::{almost_linear_increment_check, verify_increment_decomposition};
use ladderlab::report::{cell, render, write_atomic, Tabular};
use ladderlab::{Error, HardyLittlewood, Ladder, ProliferationSpec, Proliferator, Result};
use serde::Serialize;

use crate::config::RunConfig;
use crate::{bundle, Command};

pub fn open_ladder(cfg: &RunConfig) -> Result<Ladder> {
    let store = HardyLittlewood::open(cfg.checkpoint_path(), cfg.tol)?;
    Ladder::with_store(cfg.ladder_config(), Arc::new(store))
}

fn emit<R: Serialize + Tabular>(cfg: &RunConfig, report: &R) -> Result<()> {
    let text = render(report, cfg.format, cfg.constants())?;
    match &cfg.output_path {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn optional_cell(out: &mut String, v: Option<f64>) {
    if let Some(v) = v {
        cell(out, v);
    }
}

#[derive(Debug, Serialize)]
pub struct JReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub j: f64,
    pub err_bound: f64,
    /// T ln T − (1 + ln 2π − 2c) T.
    pub hli_reference: f64,
    /// |J − reference| / T.
    pub hli_relative_residual: f64,
}

impl JReport {
    pub fn compute(ladder: &Ladder, t: f64) -> Result<Self> {
        let j = ladder.store().j(t)?;
        let reference = hli_reference(t)?;
        Ok(JReport {
            t,
            j: j.value,
            err_bound: j.err_bound,
            hli_reference: reference,
            hli_relative_residual: (j.value - reference).abs() / t,
        })
    }
}

impl Tabular for JReport {
    fn csv_header(&self) -> &'static str {
        "T,j,err_bound,hli_reference,hli_relative_residual"
    }

    fn csv_rows(&self, out: &mut String) {
        let vals = [self.t, self.j, self.err_bound, self.hli_reference, self.hli_relative_residual];
        for (i, v) in vals.into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            cell(out, v);
        }
        out.push('\n');
    }
}

#[derive(Debug, Serialize)]
struct LadderReport {
    #[serde(rename = "T")]
    t: f64,
    phi1: f64,
    phi1_derivative: f64,
    z_tilde: f64,
    gap: f64,
    gap_law_ratio: f64,
    /// Absent above the sieve range.
    prime_count: Option<u64>,
    pi_ratio: Option<f64>,
    complementarity: Option<f64>,
}

impl LadderReport {
    fn compute(ladder: &Ladder, t: f64) -> Result<Self> {
        let phi1 = ladder.phi1(t)?;
        let derivative = ladder.derivative_at(t, phi1);
        let laws = match ladder.laws(t) {
            Ok(l) => Some(l),
            Err(Error::Range(_)) => None,
            Err(e) => return Err(e),
        };
        let gap = t - phi1;
        Ok(LadderReport {
            t,
            phi1,
            phi1_derivative: derivative,
            z_tilde: derivative.sqrt(),
            gap,
            gap_law_ratio: gap / ((1.0 - ladder.config().c) * t / t.ln()),
            prime_count: laws.map(|l| l.prime_count),
            pi_ratio: laws.map(|l| l.pi_ratio),
            complementarity: laws.map(|l| l.complementarity),
        })
    }
}

impl Tabular for LadderReport {
    fn csv_header(&self) -> &'static str {
        "T,phi1,phi1_derivative,z_tilde,gap,gap_law_ratio,prime_count,pi_ratio,complementarity"
    }

    fn csv_rows(&self, out: &mut String) {
        for v in [self.t, self.phi1, self.phi1_derivative, self.z_tilde, self.gap, self.gap_law_ratio] {
            cell(out, v);
            out.push(',');
        }
        if let Some(p) = self.prime_count {
            let _ = write!(out, "{p}");
        }
        out.push(',');
        optional_cell(out, self.pi_ratio);
        out.push(',');
        optional_cell(out, self.complementarity);
        out.push('\n');
    }
}

#[derive(Debug, Serialize)]
pub struct RationalList {
    pub rationals: Vec<FermatRational>,
}

impl Tabular for RationalList {
    fn csv_header(&self) -> &'static str {
        "x,y,z,n,num,den,value"
    }

    fn csv_rows(&self, out: &mut String) {
        for r in &self.rationals {
            let _ = write!(out, "{},{},{},{},{},{},", r.x, r.y, r.z, r.n, r.num, r.den);
            cell(out, r.value());
            out.push('\n');
        }
    }
}

#[derive(Debug, Serialize)]
struct Samples {
    spec: ProliferationSpec,
    t: Vec<f64>,
    /// f[i][n] = f_n(t[i]).
    f: Vec<Vec<f64>>,
}

impl Tabular for Samples {
    fn csv_header(&self) -> &'static str {
        ""
    }

    fn csv_rows(&self, out: &mut String) {
        for (t, row) in self.t.iter().zip(&self.f) {
            cell(out, *t);
            for v in row {
                out.push(',');
                cell(out, *v);
            }
            out.push('\n');
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for n in 0..self.spec.n {
            let _ = write!(out, ",f{n}");
        }
        out.push('\n');
        self.csv_rows(&mut out);
        out
    }
}

pub fn parse_rational(text: &str) -> Result<FermatRational> {
    let parts: Vec<u32> = text
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parameter(format!("rational must be x,y,z,n with positive integers, got `{text}`")))?;
    match parts[..] {
        [x, y, z, n] => FermatRational::new(x, y, z, n),
        _ => Err(Error::Parameter(format!("rational must have four fields x,y,z,n, got `{text}`"))),
    }
}

pub fn dispatch(cfg: &RunConfig, command: Command) -> Result<()> {
    match command {
        Command::J { t } => {
            let ladder = open_ladder(cfg)?;
            emit(cfg, &JReport::compute(&ladder, t)?)
        }
        Command::Ladder { t } => {
            let ladder = open_ladder(cfg)?;
            emit(cfg, &LadderReport::compute(&ladder, t)?)
        }
        Command::Tower { t, k } => {
            let ladder = open_ladder(cfg)?;
            emit(cfg, &ladder.reverse_tower(t, k)?)
        }
        Command::VerifyDecomposition { t, k } => {
            let ladder = open_ladder(cfg)?;
            emit(cfg, &verify_increment_decomposition(&ladder, t, k)?)
        }
        Command::Increments { t, k } => {
            let ladder = open_ladder(cfg)?;
            emit(cfg, &almost_linear_increment_check(&ladder, t, k)?)
        }
        Command::Fermat { x, rational, tau_grid, variant } => {
            let variant: Variant = variant.parse()?;
            let ladder = open_ladder(cfg)?;
            match x {
                Some(x) => emit(cfg, &convergence_trace(&ladder, x, &tau_grid, variant)?),
                None => {
                    let rationals = rational
                        .iter()
                        .map(|r| parse_rational(r))
                        .collect::<Result<Vec<_>>>()?;
                    emit(cfg, &equivalence_report(&ladder, &rationals, &tau_grid, variant)?)
                }
            }
        }
        Command::EnumerateRationals { eps, n_max, z_max } => {
            emit(cfg, &RationalList { rationals: fermat_rationals(eps, n_max, z_max)? })
        }
        Command::Proliferate { t, generations, n, quad_order, samples } => {
            let ladder = open_ladder(cfg)?;
            let spec = ProliferationSpec { base_t: t, generations, n, quad_order };
            let pr = Proliferator::new(&ladder, spec)?;
            match samples {
                Some(m) => {
                    if m < 2 {
                        return Err(Error::Parameter("samples must be at least 2".into()));
                    }
                    let t: Vec<f64> = (0..m)
                        .map(|i| if i + 1 == m { 1.0 } else { -1.0 + 2.0 * i as f64 / (m - 1) as f64 })
                        .collect();
                    let f = t.iter().map(|&x| pr.proliferate_all(x)).collect::<Result<Vec<_>>>()?;
                    emit(cfg, &Samples { spec: pr.spec().clone(), t, f })
                }
                None => emit(cfg, &pr.gram_matrix()?),
            }
        }
        Command::Report { out_dir } => {
            let ladder = open_ladder(cfg)?;
            bundle::write_bundle(cfg, &ladder, &out_dir)
        }
    }
}
