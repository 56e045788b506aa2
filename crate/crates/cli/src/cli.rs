use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

pub const SUBCOMMANDS: &[&str] = &["spectrum", "table", "wavefunction", "oracle", "degeneracy", "critical-coupling"];

#[derive(Debug, Parser)]
#[command(name = "manning-rosen", version, about = "Bound states of the D-dimensional Manning-Rosen problem")]
pub struct Cli {
    /// File of `key = value` defaults for long flags; explicit flags win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energies of selected states.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Spectrum(SpectrumArgs),
    /// Recompute the reference table and diff it against the embedded values.
    #[command(args_override_self = true)]
    Table(TableArgs),
    /// Sample a normalized radial wavefunction.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Wavefunction(WavefunctionArgs),
    /// Compare the closed form with the finite-difference eigensolver.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Oracle(OracleArgs),
    /// List interdimensional partners (n, l±1, D∓2) of a state.
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Degeneracy(DegeneracyArgs),
    /// Coupling A at which each state reaches zero binding energy.
    #[command(name = "critical-coupling", args_override_self = true, allow_negative_numbers = true)]
    CriticalCoupling(CriticalArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Decimal places in text output.
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,

    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Potential parameters, given as (A, b) or as (A/b, 1/b).
#[derive(Debug, Clone, Args)]
pub struct PhysicsArgs {
    /// Coupling A.
    #[arg(long = "A", value_name = "A", conflicts_with = "a_over_b")]
    pub coupling: Option<f64>,

    /// Coupling as the ratio A/b.
    #[arg(long = "A-over-b", value_name = "RATIO")]
    pub a_over_b: Option<f64>,

    /// Screening length b (comma-separated list allowed).
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "inv_b")]
    pub b: Vec<f64>,

    /// Screening strength 1/b (comma-separated list allowed).
    #[arg(long = "inv-b", value_delimiter = ',', num_args = 1..)]
    pub inv_b: Vec<f64>,

    /// Shape parameter α.
    #[arg(long)]
    pub alpha: Option<f64>,

    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,

    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
}

/// State selection: spectroscopic labels, or ranges of n and l.
#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Comma-separated labels such as `2p,3d`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub states: Vec<String>,

    /// Radial number or inclusive range `a..b`; default: every bound n.
    #[arg(long, conflicts_with = "states")]
    pub n: Option<String>,

    /// Orbital number or inclusive range `a..b`; default 0.
    #[arg(long, conflicts_with = "states")]
    pub l: Option<String>,

    #[arg(long, default_value_t = 3)]
    pub dim: u32,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub states: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub states: StateArgs,
    /// Number of radial samples.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Approx,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Log,
    Uniform,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Mesh type.
    #[arg(long, value_enum, default_value_t = GridArg::Log)]
    pub grid: GridArg,

    /// Grid points including both walls.
    #[arg(long)]
    pub points: Option<usize>,

    /// Inner wall radius.
    #[arg(long = "r-min")]
    pub r_min: Option<f64>,

    /// Outer wall radius.
    #[arg(long = "r-max")]
    pub r_max: Option<f64>,

    /// Report the single-grid eigenvalue instead of the Richardson estimate.
    #[arg(long = "no-extrapolate")]
    pub no_extrapolate: bool,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub states: StateArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Approx)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DegeneracyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub l: u32,
    #[arg(long)]
    pub dim: u32,
    #[arg(long, default_value_t = 2)]
    pub dmin: u32,
    /// Largest partner dimension; default D + 2l.
    #[arg(long)]
    pub dmax: Option<u32>,
    /// Optional parameters; when complete, the shared energy is printed.
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub states: StateArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
