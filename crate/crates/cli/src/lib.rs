//! Configuration, orchestration and persistence for `vvwave` experiments.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;

use std::path::{Path, PathBuf};

use clap::Parser;
use toml::{Table, Value};

pub use config::{parse_config, parse_config_in, Config, ConfigError, Issue};
pub use run::{execute, Outcome, RunError, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "vvwave", version, about = "Stochastic viscous variational wave experiments")]
pub struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    pub command: Subcommand,

    /// TOML configuration file; every key has a default.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,

    /// Worker threads. Affects wall time only.
    #[arg(long, value_name = "INT", default_value_t = 1)]
    pub workers: usize,

    #[arg(long, value_name = "PATH")]
    pub output_dir: Option<PathBuf>,

    /// Galerkin order, or a comma-separated list of orders for studies that sweep N.
    #[arg(long, value_name = "N[,N...]", value_delimiter = ',')]
    pub modes: Option<Vec<usize>>,

    #[arg(long)]
    pub dt: Option<f64>,

    #[arg(long)]
    pub nu: Option<f64>,

    /// Number of Brownian paths (seeds) in ensemble-type studies.
    #[arg(long)]
    pub paths: Option<usize>,

    /// Comma-separated mollifier widths for the commutator study.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
}

fn int(v: usize) -> Value {
    Value::Integer(i64::try_from(v).unwrap_or(i64::MAX))
}

fn override_issue(flag: &str, message: &str) -> ConfigError {
    ConfigError { issues: vec![Issue { key: flag.into(), message: message.into() }] }
}

/// Apply command-line overrides to the raw table before validation.
pub fn apply_overrides(table: &mut Table, cli: &Cli) -> Result<(), ConfigError> {
    let set = |t: &mut Table, s: &str, k: &str, v: Value| config::set_key(t, s, k, v);
    if let Some(seed) = cli.seed {
        let v = i64::try_from(seed).map(Value::Integer).unwrap_or_else(|_| Value::String(seed.to_string()));
        set(table, "run", "seed", v);
    }
    if let Some(dir) = &cli.output_dir {
        set(table, "run", "output_dir", Value::String(dir.display().to_string()));
    }
    if let Some(modes) = &cli.modes {
        let list = Value::Array(modes.iter().map(|&m| int(m)).collect());
        match cli.command {
            Subcommand::Ensemble => set(table, "ensemble", "orders", list),
            Subcommand::ConvergenceStudy => set(table, "convergence", "orders", list),
            Subcommand::CommutatorStudy => {
                return Err(override_issue("--modes", "the commutator study has no Galerkin order; set commutator.grid"))
            }
            _ => match modes.as_slice() {
                [m] => set(table, "grid", "modes", int(*m)),
                _ => return Err(override_issue("--modes", "this subcommand takes a single order")),
            },
        }
    }
    if let Some(dt) = cli.dt {
        set(table, "time", "dt", Value::Float(dt));
    }
    if let Some(nu) = cli.nu {
        set(table, "physics", "nu", Value::Float(nu));
    }
    if let Some(paths) = cli.paths {
        match cli.command.paths_section() {
            Some(section) => set(table, section, "paths", int(paths)),
            None => return Err(override_issue("--paths", "this subcommand runs a single path")),
        }
    }
    if let Some(deltas) = &cli.deltas {
        if cli.command != Subcommand::CommutatorStudy {
            return Err(override_issue("--deltas", "only the commutator study uses mollifier widths"));
        }
        set(table, "commutator", "deltas", Value::Array(deltas.iter().map(|&d| Value::Float(d)).collect()));
    }
    Ok(())
}

/// Read the config named on the command line (or defaults) and apply overrides.
pub fn load(cli: &Cli) -> Result<Config, ConfigError> {
    let (mut table, base) = match &cli.config {
        Some(path) => {
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (config::load_table(path)?, base)
        }
        None => (Table::new(), PathBuf::from(".")),
    };
    apply_overrides(&mut table, cli)?;
    config::from_table(&table, &base)
}

/// Full command-line entry point; returns the process exit code.
pub fn run_cli(cli: &Cli) -> i32 {
    if cli.workers == 0 {
        eprintln!("--workers must be at least 1");
        return 2;
    }
    let config = match load(cli) {
        Ok(c) => c,
        Err(e) => {
            eprint!("{e}");
            return 2;
        }
    };
    match execute(cli.command, &config, cli.workers) {
        Ok(outcome) => {
            for c in &outcome.checks {
                let bound = match (c.lower, c.upper) {
                    (Some(lo), Some(hi)) => format!("in [{lo:e}, {hi:e}]"),
                    (Some(lo), None) => format!(">= {lo:e}"),
                    (None, Some(hi)) => format!("<= {hi:e}"),
                    (None, None) => String::new(),
                };
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                println!("{verdict} {} = {:e} {bound}", c.name, c.measured);
            }
            if let Some(err) = &outcome.error {
                println!("FAIL run aborted: {err}");
            }
            println!("report written to {}", outcome.dir.join("report.json").display());
            outcome.exit_code()
        }
        Err(RunError::Config(e)) => {
            eprint!("{e}");
            2
        }
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}
