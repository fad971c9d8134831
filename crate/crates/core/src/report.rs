//! JSON and CSV emission for the report types.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::constants::{
    EULER_C, LN_TWO_PI, PUBLISHED_RECTANGLE_COEFFICIENT, RECTANGLE_COEFFICIENT,
};
use crate::error::{Error, Result};
use crate::ladder::LadderConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parameter(format!("unknown report format `{other}`"))),
        }
    }
}

/// A report with a tabular CSV rendering next to its JSON form.
pub trait Tabular {
    fn csv_header(&self) -> &'static str;
    fn csv_rows(&self, out: &mut String);

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(self.csv_header());
        out.push('\n');
        self.csv_rows(&mut out);
        out
    }
}

/// The constants actually used for a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantsBlock {
    pub c: f64,
    pub c0: f64,
    pub ln_two_pi: f64,
    pub one_minus_c: f64,
    pub rectangle_coefficient: f64,
    /// Value printed in the literature for ln 2π − c − 1; disagrees with
    /// `rectangle_coefficient`.
    pub published_rectangle_coefficient: f64,
}

impl ConstantsBlock {
    /// Constants in force for a ladder configuration.
    pub fn from_config(cfg: &LadderConfig) -> Self {
        ConstantsBlock {
            c: cfg.c,
            c0: cfg.c0,
            ln_two_pi: LN_TWO_PI,
            one_minus_c: 1.0 - cfg.c,
            rectangle_coefficient: LN_TWO_PI - 1.0 - cfg.c,
            published_rectangle_coefficient: PUBLISHED_RECTANGLE_COEFFICIENT,
        }
    }

    pub fn new(c0: f64) -> Self {
        ConstantsBlock {
            c: EULER_C,
            c0,
            ln_two_pi: LN_TWO_PI,
            one_minus_c: 1.0 - EULER_C,
            rectangle_coefficient: RECTANGLE_COEFFICIENT,
            published_rectangle_coefficient: PUBLISHED_RECTANGLE_COEFFICIENT,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, R: Serialize> {
    constants: ConstantsBlock,
    #[serde(flatten)]
    report: &'a R,
}

/// JSON text with the constants block merged into the report's top level.
pub fn to_json<R: Serialize>(report: &R, constants: ConstantsBlock) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&Envelope { constants, report })?;
    text.push('\n');
    Ok(text)
}

/// Report text in the requested format.
pub fn render<R: Serialize + Tabular>(report: &R, format: Format, constants: ConstantsBlock) -> Result<String> {
    match format {
        Format::Json => to_json(report, constants),
        Format::Csv => Ok(report.to_csv()),
    }
}

/// Render and atomically write a report.
pub fn emit_report<R: Serialize + Tabular>(
    report: &R,
    format: Format,
    constants: ConstantsBlock,
    path: &Path,
) -> Result<()> {
    write_atomic(path, render(report, format, constants)?.as_bytes())
}

/// Write through a sibling temp file and rename over the destination.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::io(path, std::io::Error::other("path has no file name")))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = dir.join(tmp_name);
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    result.map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

/// Shortest round-trip decimal rendering used in CSV cells.
pub fn cell(out: &mut String, v: f64) {
    let _ = write!(out, "{v:e}");
}
