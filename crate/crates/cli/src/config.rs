//! Run configuration: defaults, then a key=value file, then flags, then
//! `LADDERLAB_<KEY>` environment variables.

use std::path::{Path, PathBuf};

use ladderlab::quadrature::{default_store_path, DEFAULT_TOL};
use ladderlab::report::{ConstantsBlock, Format};
use ladderlab::{Error, LadderConfig, Result};

pub const KEYS: [&str; 7] = ["c0", "t_min", "tol", "checkpoint", "out", "format", "threads"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub c0: f64,
    pub t_min: f64,
    pub tol: f64,
    pub checkpoint_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ladder = LadderConfig::default();
        RunConfig {
            c0: ladder.c0,
            t_min: ladder.t_min,
            tol: DEFAULT_TOL,
            checkpoint_path: None,
            output_path: None,
            format: Format::Json,
            threads: None,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parameter(format!("invalid value `{value}` for `{key}`")))
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "c0" => self.c0 = parse_num(key, value)?,
            "t_min" => self.t_min = parse_num(key, value)?,
            "tol" => self.tol = parse_num(key, value)?,
            "checkpoint" => self.checkpoint_path = Some(PathBuf::from(value.trim())),
            "out" => self.output_path = Some(PathBuf::from(value.trim())),
            "format" => self.format = value.parse()?,
            "threads" => self.threads = Some(parse_num(key, value)?),
            other => return Err(Error::Parameter(format!("unknown configuration key `{other}`"))),
        }
        Ok(())
    }

    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parameter(format!("config line {} is not `key = value`: `{raw}`", i + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.apply_text(&text)
    }

    /// Apply every `LADDERLAB_<KEY>` present in `vars`.
    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(&mut self, vars: I) -> Result<()> {
        for (name, value) in vars {
            if let Some(key) = name.strip_prefix("LADDERLAB_") {
                let key = key.to_ascii_lowercase();
                if KEYS.contains(&key.as_str()) {
                    self.set(&key, &value)?;
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::Parameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.threads == Some(0) {
            return Err(Error::Parameter("threads must be at least 1".into()));
        }
        self.ladder_config().validate()
    }

    pub fn ladder_config(&self) -> LadderConfig {
        LadderConfig {
            c0: self.c0,
            t_min: self.t_min,
            quad_tol: self.tol,
            ..LadderConfig::default()
        }
    }

    pub fn constants(&self) -> ConstantsBlock {
        ConstantsBlock::from_config(&self.ladder_config())
    }

    pub fn checkpoint_path(&self) -> PathBuf {
        self.checkpoint_path.clone().unwrap_or_else(|| default_store_path(self.tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_env() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# run\nc0 = 0.5\n\ntol=1e-9  # tighter\nformat = csv\n").unwrap();
        assert_eq!(cfg.c0, 0.5);
        assert_eq!(cfg.tol, 1e-9);
        assert_eq!(cfg.format, Format::Csv);
        cfg.apply_env([
            ("LADDERLAB_TOL".to_string(), "1e-7".to_string()),
            ("LADDERLAB_CHECKPOINT_DIR".to_string(), "/elsewhere".to_string()),
            ("HOME".to_string(), "/root".to_string()),
        ])
        .unwrap();
        assert_eq!(cfg.tol, 1e-7);
        assert_eq!(cfg.checkpoint_path, None);
    }

    #[test]
    fn rejects_bad_input() {
        let mut cfg = RunConfig::default();
        assert!(cfg.apply_text("bogus = 1").is_err());
        assert!(cfg.apply_text("tol 1e-8").is_err());
        assert!(cfg.set("threads", "two").is_err());
        cfg.tol = -1.0;
        assert!(cfg.validate().is_err());
    }
}
