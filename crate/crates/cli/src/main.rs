//! `ladderlab`: command-line front end.

mod bundle;
mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ladderlab::report::Format;
use ladderlab::Result;

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "ladderlab", version, about = "Jacob's ladder numerics at desk scale")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Flat key=value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    c0: Option<f64>,
    #[arg(long = "t-min", global = true, allow_negative_numbers = true)]
    t_min: Option<f64>,
    /// Quadrature tolerance.
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Checkpoint CSV for J(T).
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Report destination; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Worker threads for quadrature and Gram assembly.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// J(T) with its error bound.
    J {
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
    },
    /// φ₁(T), its derivative and the gap laws.
    Ladder {
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
    },
    /// Reverse tower T < T¹ < … < Tᵏ.
    Tower {
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        k: usize,
    },
    /// Raabe decomposition of tower increments.
    VerifyDecomposition {
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        k: usize,
    },
    /// Almost-linear increments J(Tʳ) − J(Tʳ⁻¹).
    Increments {
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
        #[arg(long)]
        k: usize,
    },
    /// Functional traces for a target x, or equivalence reports for rationals.
    Fermat {
        #[arg(long, allow_negative_numbers = true, conflicts_with = "rational")]
        x: Option<f64>,
        /// x,y,z,n; repeatable.
        #[arg(long)]
        rational: Vec<String>,
        #[arg(long = "tau-grid", value_delimiter = ',', default_value = "1e3,1e4,1e5")]
        tau_grid: Vec<f64>,
        /// raabe or zeta.
        #[arg(long, default_value = "raabe")]
        variant: String,
    },
    /// Fermat rationals within ε of 1.
    EnumerateRationals {
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        #[arg(long = "n-max", default_value_t = 3)]
        n_max: u32,
        #[arg(long = "z-max", default_value_t = ladderlab::fermat::DEFAULT_Z_MAX)]
        z_max: u32,
    },
    /// Gram matrix of a proliferated Legendre system, or sampled functions.
    Proliferate {
        #[arg(long = "T", allow_negative_numbers = true)]
        t: f64,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        generations: Vec<usize>,
        #[arg(long = "N", default_value_t = 6)]
        n: usize,
        #[arg(long = "quad-order", default_value_t = 16)]
        quad_order: usize,
        /// Emit f_0..f_{N−1} on this many grid points instead of the Gram matrix.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Write the full desk-scale evidence bundle into a directory.
    Report {
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
}

fn resolve_config(global: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &global.config {
        cfg.apply_file(path)?;
    }
    if let Some(v) = global.c0 {
        cfg.c0 = v;
    }
    if let Some(v) = global.t_min {
        cfg.t_min = v;
    }
    if let Some(v) = global.tol {
        cfg.tol = v;
    }
    if let Some(v) = &global.checkpoint {
        cfg.checkpoint_path = Some(v.clone());
    }
    if let Some(v) = &global.out {
        cfg.output_path = Some(v.clone());
    }
    if let Some(v) = global.format {
        cfg.format = v;
    }
    if let Some(v) = global.threads {
        cfg.threads = Some(v);
    }
    cfg.apply_env(std::env::vars())?;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let cfg = resolve_config(&cli.global)?;
    if let Some(n) = cfg.threads {
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    commands::dispatch(&cfg, cli.command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
