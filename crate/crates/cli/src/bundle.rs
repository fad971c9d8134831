//! `report`: every desk-scale check written as one JSON file per topic.
//!
//! Contents depend only on the configuration and the checkpoint store, so
//! two runs produce byte-identical files.

use std::path::Path;

use ladderlab::fermat::{
    convergence_trace, equivalence_report, fermat_rationals, functional_raabe, functional_zeta,
    EquivalenceReport, FermatRational, Variant,
};
use ladderlab::raabe::{
    almost_linear_increment_check, raabe_integral, raabe_integral_quadrature,
    verify_increment_decomposition, IncrementReport,
};
use ladderlab::report::{to_json, write_atomic, Tabular};
use ladderlab::special::{hardy_z, locate_zero, sign_change_brackets};
use ladderlab::{FunctionalTrace, Ladder, LadderLaws, ProliferationSpec, Proliferator, Result};
use serde::Serialize;

use crate::commands::JReport;
use crate::config::RunConfig;

pub const RAABE_POINTS: [f64; 4] = [1.0, 10.0, 1e3, 1e5];
pub const LADDER_HEIGHTS: [f64; 2] = [1e4, 1e5];
pub const TAU_GRID: [f64; 3] = [1e3, 1e4, 1e5];
pub const TARGETS: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Serialize)]
struct RaabeRow {
    a: f64,
    closed_form: f64,
    quadrature: f64,
    err_bound: f64,
    difference: f64,
}

#[derive(Serialize)]
struct ZPoint {
    t: f64,
    z: f64,
}

#[derive(Serialize)]
struct ZFidelity {
    points: Vec<ZPoint>,
    first_zero: f64,
    sign_changes_0_100: usize,
}

#[derive(Serialize)]
struct Rows<T: Serialize> {
    rows: Vec<T>,
}

#[derive(Serialize)]
struct FunctionalValue {
    x: f64,
    tau: f64,
    value: f64,
}

#[derive(Serialize)]
struct Functionals {
    zeta: Vec<FunctionalValue>,
    raabe: Vec<FunctionalValue>,
    raabe_traces: Vec<FunctionalTrace>,
}

#[derive(Serialize)]
struct Fermat {
    rationals: Vec<FermatRational>,
    equivalence: EquivalenceReport,
}

#[derive(Serialize)]
struct Endpoint {
    p: usize,
    u_minus: f64,
    u_plus: f64,
}

#[derive(Serialize)]
struct Proliferation {
    endpoints: Vec<Endpoint>,
    gram: ladderlab::GramResult,
}

/// 100 log-spaced heights on [10, 1e5].
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == count => hi,
            _ => (a + (b - a) * i as f64 / (count - 1) as f64).exp(),
        })
        .collect()
}

fn write<R: Serialize>(cfg: &RunConfig, dir: &Path, name: &str, value: &R) -> Result<()> {
    write_atomic(&dir.join(name), to_json(value, cfg.constants())?.as_bytes())
}

pub fn write_bundle(cfg: &RunConfig, ladder: &Ladder, dir: &Path) -> Result<()> {
    let tol = cfg.tol;

    let raabe = RAABE_POINTS
        .iter()
        .map(|&a| {
            let closed_form = raabe_integral(a)?;
            let q = raabe_integral_quadrature(a, 1e-3 * tol)?;
            Ok(RaabeRow { a, closed_form, quadrature: q.value, err_bound: q.err_bound, difference: q.value - closed_form })
        })
        .collect::<Result<Vec<_>>>()?;
    write(cfg, dir, "raabe.json", &Rows { rows: raabe })?;

    let points = log_grid(10.0, 1e5, 100)
        .into_iter()
        .map(|t| Ok(ZPoint { t, z: hardy_z(t)? }))
        .collect::<Result<Vec<_>>>()?;
    let brackets = sign_change_brackets(0.0, 100.0, 10_000)?;
    let first_zero = locate_zero(brackets[0].0, brackets[0].1)?;
    write(cfg, dir, "z_fidelity.json", &ZFidelity { points, first_zero, sign_changes_0_100: brackets.len() })?;

    let hli = [1e3, 1e5].iter().map(|&t| JReport::compute(ladder, t)).collect::<Result<Vec<_>>>()?;
    write(cfg, dir, "hli.json", &Rows { rows: hli })?;

    let laws: Vec<LadderLaws> = LADDER_HEIGHTS.iter().map(|&t| ladder.laws(t)).collect::<Result<_>>()?;
    write(cfg, dir, "ladder_laws.json", &Rows { rows: laws })?;

    let decomposition = verify_increment_decomposition(ladder, 1e4, 3)?;
    write(cfg, dir, "decomposition.json", &decomposition)?;
    write_atomic(&dir.join("decomposition.csv"), decomposition.to_csv().as_bytes())?;

    let increments: Vec<IncrementReport> = LADDER_HEIGHTS
        .iter()
        .map(|&t| almost_linear_increment_check(ladder, t, 2))
        .collect::<Result<_>>()?;
    write(cfg, dir, "increments.json", &Rows { rows: increments })?;

    let mut functionals = Functionals { zeta: Vec::new(), raabe: Vec::new(), raabe_traces: Vec::new() };
    for &x in &TARGETS {
        functionals.zeta.push(FunctionalValue { x, tau: 1e4, value: functional_zeta(ladder, x, 1e4)? });
        functionals.raabe.push(FunctionalValue { x, tau: 1e5, value: functional_raabe(ladder, x, 1e5)? });
        functionals.raabe_traces.push(convergence_trace(ladder, x, &TAU_GRID, Variant::RaabeDifference)?);
    }
    write(cfg, dir, "functionals.json", &functionals)?;

    let rationals = fermat_rationals(0.01, 3, 10)?;
    let probes = [FermatRational::new(6, 8, 9, 3)?, FermatRational::new(1, 1, 1, 3)?];
    let equivalence = equivalence_report(ladder, &probes, &TAU_GRID, Variant::RaabeDifference)?;
    write(cfg, dir, "fermat.json", &Fermat { rationals, equivalence })?;

    let pr = Proliferator::new(ladder, ProliferationSpec::new(1e4, vec![2], 6))?;
    let endpoints = [1, 2]
        .iter()
        .map(|&p| Ok(Endpoint { p, u_minus: pr.u_map(p, -1.0)?, u_plus: pr.u_map(p, 1.0)? }))
        .collect::<Result<Vec<_>>>()?;
    let gram = Proliferator::new(ladder, ProliferationSpec::new(1e4, vec![1], 6))?.gram_matrix()?;
    let matrix_csv = gram.to_csv();
    write(cfg, dir, "proliferation.json", &Proliferation { endpoints, gram })?;
    write_atomic(&dir.join("gram.csv"), matrix_csv.as_bytes())
}
