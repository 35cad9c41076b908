use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Capacity, capacity per unit energy, PPM error rates and spectral
/// efficiency of one-bit quantized Gaussian channels.
#[derive(Debug, Parser)]
#[command(name = "onebit-cap", version)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Directory receiving the output file and its manifest.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "ONEBIT_CAP_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity at one power budget.
    Capacity(CapacityArgs),
    /// Best relative entropy per unit energy over a probe lattice.
    Cue(CueArgs),
    /// Pulse-position modulation error rates.
    Ppm(PpmArgs),
    /// Spectral efficiency against energy per bit.
    Spectral(SpectralArgs),
    /// Numerical checks of the inequalities and limits the library relies on.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CapacityMode {
    Avg,
    Peak,
    Sym,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(long, value_enum)]
    pub mode: CapacityMode,
    /// Average or peak power budget.
    #[arg(long)]
    pub power: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub out: OutFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    Awgn,
    Coherent,
    Noncoherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Lin,
    Log,
}

/// Lattice over probe magnitudes and a second parameter: the back-off
/// `μ = ξ - Υ` on the Gaussian channel, the threshold slope on coherent
/// fading and the radial threshold on noncoherent fading. Unset flags take
/// per-channel defaults.
#[derive(Debug, Args)]
pub struct CueArgs {
    #[arg(long, value_enum, default_value = "awgn")]
    pub channel: Channel,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long)]
    pub xi_min: Option<f64>,
    #[arg(long)]
    pub xi_max: Option<f64>,
    #[arg(long)]
    pub xi_count: Option<usize>,
    #[arg(long)]
    pub param_min: Option<f64>,
    #[arg(long)]
    pub param_max: Option<f64>,
    #[arg(long)]
    pub param_count: Option<usize>,
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
}

#[derive(Debug, Args)]
pub struct PpmArgs {
    /// Number of slots (messages).
    #[arg(long, default_value_t = 1 << 16)]
    pub m: u64,
    /// Rate per unit energy in nats.
    #[arg(long, default_value_t = 0.25)]
    pub rate: f64,
    /// Miss probability of the signal slot.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectralModeArg {
    Gaussian,
    Sym,
    Opt,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    #[arg(long, value_enum)]
    pub mode: SpectralModeArg,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Smallest power, in units of σ².
    #[arg(long, default_value_t = 1e-4)]
    pub p_min: f64,
    /// Largest power, in units of σ².
    #[arg(long, default_value_t = 10.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 60)]
    pub per_decade: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Specfun,
    Inequalities,
    Limits,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
}
