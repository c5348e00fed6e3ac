//! Command-line front end: a TOML run configuration overridden by flags,
//! one subcommand per experiment, and an output directory holding CSV tables
//! plus a single JSON metadata sidecar.

mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Analysis, Engine, Numerics, Output, RunConfig};
pub use output::{config_hash, read_metadata, OutputDir, METADATA_FILE};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "jcsr", version, about = "Stochastic resonance in the driven dissipative Jaynes-Cummings model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semiclassical branches (or the quantum steady state) across the control drive.
    SteadyState,
    /// Effective potential and its extrema.
    Potential,
    /// Time series of one or more trajectories.
    Trajectory {
        /// Continue from checkpoints left in the output directory.
        #[arg(long)]
        resume: bool,
    },
    /// Switching detection and residence-time statistics.
    Residence,
    /// Seed-averaged SNR across the noise grid.
    SnrSweep,
    /// Mean residence time against noise strength.
    Kramers,
    /// Wigner functions of the unconditional steady state.
    Wigner,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::SteadyState => "steady-state",
            Command::Potential => "potential",
            Command::Trajectory { .. } => "trajectory",
            Command::Residence => "residence",
            Command::SnrSweep => "snr-sweep",
            Command::Kramers => "kramers",
            Command::Wigner => "wigner",
        }
    }
}

/// Flags that take precedence over the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub engine: Option<Engine>,
    #[arg(long, global = true)]
    pub e1: Option<f64>,
    #[arg(long, global = true)]
    pub e2: Option<f64>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true)]
    pub noise: Option<f64>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long, global = true)]
    pub duration: Option<f64>,
    #[arg(long, global = true)]
    pub stride: Option<usize>,
    #[arg(long, global = true)]
    pub trajectories: Option<usize>,
    #[arg(long, global = true)]
    pub fock_dim: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) {
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(d) = &self.out {
            cfg.output.dir = d.clone();
        }
        if let Some(e) = self.engine {
            cfg.engine = e;
        }
        set(&mut cfg.params.e1, self.e1);
        set(&mut cfg.params.e2, self.e2);
        set(&mut cfg.params.delta, self.delta);
        set(&mut cfg.params.noise, self.noise);
        set(&mut cfg.numerics.dt, self.dt);
        set(&mut cfg.numerics.duration, self.duration);
        if let Some(s) = self.stride {
            cfg.numerics.stride = s;
        }
        if let Some(n) = self.trajectories {
            cfg.numerics.trajectories = n;
        }
        if self.fock_dim.is_some() {
            cfg.numerics.fock_dim = self.fock_dim;
        }
    }

    /// The config file (or defaults) with the flags applied, validated.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        self.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs a parsed command line; the config is validated before anything is
/// written.
pub fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.overrides.resolve()?;
    commands::dispatch(&cli.command, &cfg)
}

/// Parses `args` (program name first), runs, reports errors on stderr and
/// returns the process exit code: 0 success, 2 configuration error, 3
/// numerical failure.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
