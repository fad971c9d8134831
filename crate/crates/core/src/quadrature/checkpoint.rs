//! Persistent checkpoints of J(T) = ∫₀ᵀ Z(t)² dt.
//!
//! Checkpoints sit on a fixed grid of multiples of [`CHECKPOINT_SPACING`].
//! J(T) is always assembled as the largest checkpoint at or below T plus the
//! integral over the remainder, so its value does not depend on the order in
//! which heights were requested.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use super::adaptive::{AdaptiveOptions, IntegralResult};
use super::zeta_integral::integrate_zeta_sq_with;
use crate::error::{Error, Result};
use crate::report::write_atomic;

pub const CHECKPOINT_SPACING: f64 = 100.0;

/// Long extensions are flushed to the store at this height stride.
const PERSIST_STRIDE: f64 = 500.0 * CHECKPOINT_SPACING;

/// Environment variable naming the default checkpoint directory.
pub const CHECKPOINT_DIR_ENV: &str = "LADDERLAB_CHECKPOINT_DIR";

const CSV_HEADER: &str = "t,j,err";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: f64,
    pub j: f64,
    pub err: f64,
}

impl Checkpoint {
    pub const ORIGIN: Checkpoint = Checkpoint {
        t: 0.0,
        j: 0.0,
        err: 0.0,
    };
}

#[derive(Debug, Clone, Default)]
pub struct CheckpointTable {
    entries: Vec<Checkpoint>,
    source_tol: Option<f64>,
    memo: HashMap<(u64, u64), IntegralResult>,
}

impl PartialEq for CheckpointTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.source_tol == other.source_tol
    }
}

impl CheckpointTable {
    pub fn new(source_tol: f64) -> Self {
        CheckpointTable {
            entries: Vec::new(),
            source_tol: Some(source_tol),
            memo: HashMap::new(),
        }
    }

    pub fn from_entries(entries: Vec<Checkpoint>, source_tol: Option<f64>) -> Result<Self> {
        validate(&entries)?;
        Ok(CheckpointTable {
            entries,
            source_tol,
            memo: HashMap::new(),
        })
    }

    pub fn entries(&self) -> &[Checkpoint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source_tol(&self) -> Option<f64> {
        self.source_tol
    }

    pub fn set_source_tol(&mut self, tol: f64) {
        self.source_tol = Some(tol);
    }

    /// Largest checkpoint with t ≤ `t`, or the origin.
    pub fn base_for(&self, t: f64) -> Checkpoint {
        let idx = self.entries.partition_point(|c| c.t <= t);
        if idx == 0 {
            Checkpoint::ORIGIN
        } else {
            self.entries[idx - 1]
        }
    }

    fn last(&self) -> Checkpoint {
        self.entries.last().copied().unwrap_or(Checkpoint::ORIGIN)
    }

    /// Whether every grid point at or below `t` is already present.
    fn covers(&self, t: f64) -> bool {
        next_grid_point(self.last().t) > t
    }

    /// Append grid checkpoints until the next one would pass `t`.
    /// Returns the number of panels integrated.
    fn extend_to(&mut self, t: f64, opts: AdaptiveOptions) -> Result<u64> {
        let mut panels = 0;
        while !self.covers(t) {
            let last = self.last();
            let next = next_grid_point(last.t);
            let seg = integrate_zeta_sq_with(last.t, next, opts)?;
            panels += seg.panels;
            self.entries.push(Checkpoint {
                t: next,
                j: last.j + seg.value,
                err: last.err + seg.err_bound,
            });
        }
        Ok(panels)
    }

    /// J(T), extending the table as needed.
    pub fn j_integral(&mut self, t: f64, tol: f64) -> Result<IntegralResult> {
        self.j_integral_with(t, AdaptiveOptions::new(tol))
    }

    pub fn j_integral_with(&mut self, t: f64, opts: AdaptiveOptions) -> Result<IntegralResult> {
        check_height(t)?;
        let key = (t.to_bits(), opts.tol.to_bits());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(IntegralResult { panels: 0, ..*hit });
        }
        let mut panels = self.extend_to(t, opts)?;
        let result = remainder(self.base_for(t), t, opts)?;
        panels += result.panels;
        self.memo.insert(key, result);
        Ok(IntegralResult { panels, ..result })
    }
}

fn check_height(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("J(T) requires finite T >= 0, got {t}")))
    }
}

fn next_grid_point(t: f64) -> f64 {
    ((t / CHECKPOINT_SPACING).floor() + 1.0) * CHECKPOINT_SPACING
}

fn remainder(base: Checkpoint, t: f64, opts: AdaptiveOptions) -> Result<IntegralResult> {
    let seg = integrate_zeta_sq_with(base.t, t, opts)?;
    Ok(IntegralResult {
        value: base.j + seg.value,
        err_bound: base.err + seg.err_bound,
        panels: seg.panels,
    })
}

fn validate(entries: &[Checkpoint]) -> Result<()> {
    let bad = |row: usize, reason: String| Err(Error::Checkpoint { row, reason });
    let mut prev: Option<&Checkpoint> = None;
    for (row, c) in entries.iter().enumerate() {
        if !(c.t.is_finite() && c.j.is_finite() && c.err.is_finite()) {
            return bad(row, "non-finite value".into());
        }
        if c.t < 0.0 {
            return bad(row, format!("negative t = {}", c.t));
        }
        if c.err < 0.0 {
            return bad(row, format!("negative err = {}", c.err));
        }
        if let Some(p) = prev {
            if c.t <= p.t {
                return bad(row, format!("t not strictly increasing ({} after {})", c.t, p.t));
            }
            if c.j < p.j {
                return bad(row, format!("j decreasing ({} after {})", c.j, p.j));
            }
            if c.err < p.err {
                return bad(row, format!("err decreasing ({} after {})", c.err, p.err));
            }
        }
        prev = Some(c);
    }
    Ok(())
}

/// Write the table as `t,j,err` CSV with 17 significant digits.
pub fn save_checkpoints(table: &CheckpointTable, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(64 * (table.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for c in table.entries() {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", c.t, c.j, c.err);
    }
    write_atomic(path, out.as_bytes())
}

/// Read and validate a checkpoint file. An empty file is an empty table.
pub fn load_checkpoints(path: &Path) -> Result<CheckpointTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_checkpoints(&text)
}

fn parse_checkpoints(text: &str) -> Result<CheckpointTable> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let Some(header) = lines.next() else {
        return Ok(CheckpointTable::default());
    };
    if header.trim() != CSV_HEADER {
        return Err(Error::Checkpoint {
            row: 0,
            reason: format!("expected header `{CSV_HEADER}`, found `{}`", header.trim()),
        });
    }
    let mut entries = Vec::new();
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Option<Vec<f64>> = if fields.len() == 3 {
            fields.iter().map(|f| f.parse().ok()).collect()
        } else {
            None
        };
        match parsed.as_deref() {
            Some(&[t, j, err]) => entries.push(Checkpoint { t, j, err }),
            _ => {
                return Err(Error::Checkpoint {
                    row,
                    reason: format!("malformed line `{line}`"),
                })
            }
        }
    }
    CheckpointTable::from_entries(entries, None)
}

/// Default checkpoint file for a tolerance, under `LADDERLAB_CHECKPOINT_DIR`
/// (or `./ladderlab-checkpoints` when unset).
pub fn default_store_path(tol: f64) -> PathBuf {
    let dir = std::env::var_os(CHECKPOINT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("ladderlab-checkpoints"));
    dir.join(format!("hardy_littlewood_tol{tol:e}.csv"))
}

/// Thread-safe J(T) evaluator over a shared checkpoint table.
///
/// Any number of readers may evaluate concurrently; extending the table takes
/// the write lock, so there is exactly one writer at a time. When a store path
/// is set, every extension is persisted before the lock is released.
#[derive(Debug)]
pub struct HardyLittlewood {
    table: RwLock<CheckpointTable>,
    opts: AdaptiveOptions,
    store: Option<PathBuf>,
}

impl HardyLittlewood {
    pub fn in_memory(tol: f64) -> Self {
        HardyLittlewood {
            table: RwLock::new(CheckpointTable::new(tol)),
            opts: AdaptiveOptions::new(tol),
            store: None,
        }
    }

    /// Open (or start) the checkpoint file at `path`.
    pub fn open(path: impl Into<PathBuf>, tol: f64) -> Result<Self> {
        let path = path.into();
        let mut table = if path.exists() {
            load_checkpoints(&path)?
        } else {
            CheckpointTable::default()
        };
        table.set_source_tol(tol);
        Ok(HardyLittlewood {
            table: RwLock::new(table),
            opts: AdaptiveOptions::new(tol),
            store: Some(path),
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.opts.budget = budget;
        self
    }

    pub fn tol(&self) -> f64 {
        self.opts.tol
    }

    pub fn options(&self) -> AdaptiveOptions {
        self.opts
    }

    pub fn store_path(&self) -> Option<&Path> {
        self.store.as_deref()
    }

    pub fn snapshot(&self) -> CheckpointTable {
        let table = self.table.read().unwrap_or_else(|e| e.into_inner());
        CheckpointTable::from_entries(table.entries.clone(), table.source_tol)
            .expect("live table keeps its invariants")
    }

    /// J(T).
    pub fn j(&self, t: f64) -> Result<IntegralResult> {
        check_height(t)?;
        let key = (t.to_bits(), self.opts.tol.to_bits());
        let mut panels = 0;
        let base = {
            let table = self.table.read().unwrap_or_else(|e| e.into_inner());
            if let Some(hit) = table.memo.get(&key) {
                return Ok(IntegralResult { panels: 0, ..*hit });
            }
            table.covers(t).then(|| table.base_for(t))
        };
        let base = match base {
            Some(b) => b,
            None => {
                let mut table = self.table.write().unwrap_or_else(|e| e.into_inner());
                while !table.covers(t) {
                    let step = t.min(table.last().t + PERSIST_STRIDE);
                    panels += table.extend_to(step, self.opts)?;
                    if let Some(path) = &self.store {
                        save_checkpoints(&table, path)?;
                    }
                }
                table.base_for(t)
            }
        };
        let result = remainder(base, t, self.opts)?;
        let mut table = self.table.write().unwrap_or_else(|e| e.into_inner());
        table.memo.insert(key, result);
        Ok(IntegralResult {
            panels: panels + result.panels,
            ..result
        })
    }

    pub fn j_value(&self, t: f64) -> Result<f64> {
        self.j(t).map(|r| r.value)
    }

    /// ∫ₐᵇ Z² with this evaluator's tolerance and budget.
    pub fn integrate(&self, a: f64, b: f64) -> Result<IntegralResult> {
        integrate_zeta_sq_with(a, b, self.opts)
    }

    /// Write the table to the store path, if any.
    pub fn persist(&self) -> Result<()> {
        if let Some(path) = &self.store {
            let table = self.table.read().unwrap_or_else(|e| e.into_inner());
            save_checkpoints(&table, path)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CheckpointTable {
        CheckpointTable::from_entries(
            vec![
                Checkpoint { t: 1000.0, j: 5000.123456789012, err: 1e-9 },
                Checkpoint { t: 2000.0, j: 11000.0 / 3.0 * 3.1, err: 2.5e-9 },
                Checkpoint { t: 3000.0, j: 17777.7, err: 2.5e-9 },
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.csv");
        let table = sample();
        save_checkpoints(&table, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("t,j,err\n"));
        assert_eq!(load_checkpoints(&path).unwrap(), table);
    }

    #[test]
    fn decreasing_t_is_rejected_at_row() {
        let text = "t,j,err\n1.0,1.0,0.0\n3.0,2.0,0.0\n2.0,3.0,0.0\n";
        match parse_checkpoints(text) {
            Err(Error::Checkpoint { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_violations() {
        assert!(parse_checkpoints("t,j,err\n1,2,0\n2,1,0\n").is_err());
        assert!(parse_checkpoints("t,j,err\n1,1,1e-3\n2,2,1e-4\n").is_err());
        assert!(parse_checkpoints("t,j,err\n1,1\n").is_err());
        assert!(parse_checkpoints("x,y\n").is_err());
    }

    #[test]
    fn empty_file_is_empty_table() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        std::fs::write(&path, "").unwrap();
        assert!(load_checkpoints(&path).unwrap().is_empty());
        assert!(parse_checkpoints("t,j,err\n").unwrap().is_empty());
    }

    #[test]
    fn repeated_height_reuses_result() {
        let mut table = CheckpointTable::new(1e-8);
        assert_eq!(table.j_integral(0.0, 1e-8).unwrap().value, 0.0);
        let first = table.j_integral(100.0, 1e-8).unwrap();
        let second = table.j_integral(100.0, 1e-8).unwrap();
        assert!(first.panels > 0);
        assert_eq!(second.panels, 0);
        assert_eq!(first.value.to_bits(), second.value.to_bits());
    }

    #[test]
    fn value_is_independent_of_request_order() {
        let a = HardyLittlewood::in_memory(1e-8);
        let b = HardyLittlewood::in_memory(1e-8);
        let x = a.j(2500.0).unwrap().value;
        b.j(1200.0).unwrap();
        b.j(3100.0).unwrap();
        let y = b.j(2500.0).unwrap().value;
        assert_eq!(x.to_bits(), y.to_bits());
        let rows = |t: f64| (t / CHECKPOINT_SPACING).floor() as usize;
        assert_eq!(a.snapshot().len(), rows(2500.0));
        assert_eq!(b.snapshot().len(), rows(3100.0));
    }

    #[test]
    fn store_persists_and_reloads() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("store.csv");
        let fresh = HardyLittlewood::open(&path, 1e-8).unwrap();
        let v = fresh.j(2100.0).unwrap();
        let reopened = HardyLittlewood::open(&path, 1e-8).unwrap();
        assert_eq!(reopened.snapshot().len(), (2100.0 / CHECKPOINT_SPACING) as usize);
        let w = reopened.j(2100.0).unwrap();
        assert_eq!(v.value.to_bits(), w.value.to_bits());
        assert!(w.panels < v.panels);
    }
}
