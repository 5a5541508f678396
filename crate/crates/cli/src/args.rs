use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Ground states and phase diagrams of the correlated-hopping Hubbard chain
/// for a polarized two-species Fermi gas.
#[derive(Debug, Parser)]
#[command(name = "flp", version, propagate_version = true)]
pub struct Cli {
    /// Worker threads for parallel sections (defaults to all cores).
    #[arg(long, global = true, env = "FLP_JOBS", value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact ground state at one (n, p) point; requires delta_g = -t.
    Exact(ExactArgs),
    /// Phase diagram over a Δ–p grid at fixed filling (CSV).
    Scan(ScanArgs),
    /// Critical polarization p_c as a function of filling (CSV `n,p_c`).
    PcCurve(PcCurveArgs),
    /// Pair density n_d as a function of polarization (CSV `p,n_d`).
    NdCurve(NdCurveArgs),
    /// Lanczos ground state of a finite ring and its observables.
    Ed(EdArgs),
    /// Seed-averaged charge structure factor N(q) (JSON).
    StructureFactor(StructureFactorArgs),
    /// Charge gap E0(N+1) + E0(N-1) - 2 E0(N) at p = 0.
    Gap(GapArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Model {
    /// Bare hopping t (energy unit).
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    /// Correlated-hopping shift: g = t + delta_g.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub delta_g: f64,
    /// Pair-assisted shift: t_ad = t + 2 delta_g + delta_t.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta_t: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Minimizer {
    /// Coarse grid points per variational axis.
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Lanczos {
    /// Residual tolerance ‖Hx − e₀x‖.
    #[arg(long, default_value = "1e-10")]
    pub tol: f64,
    /// Maximum number of Hamiltonian applications.
    #[arg(long, default_value_t = 3000)]
    pub max_iter: usize,
    /// Krylov vectors kept per restart cycle.
    #[arg(long, default_value_t = 400)]
    pub krylov_cap: usize,
    /// Memory for Krylov vectors in MiB; lowers the cap on large sectors.
    #[arg(long, default_value_t = 256)]
    pub memory_mib: usize,
    /// Permit sectors above the default dimension limit (L = 16 and beyond).
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ExactArgs {
    /// Total filling n = N/L in [0, 2].
    #[arg(long)]
    pub n: f64,
    /// Polarization p = |N_up - N_dn|/N in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// Detuning Δ (on-site energy of a dressed molecule).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[command(flatten)]
    pub model: Model,
    #[command(flatten)]
    pub minimizer: Minimizer,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (stdout if omitted).
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ScanArgs {
    /// Total filling n = N/L in [0, 2].
    #[arg(long)]
    pub n: f64,
    #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 121)]
    pub delta_steps: usize,
    #[arg(long, default_value_t = 0.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 101)]
    pub p_steps: usize,
    #[command(flatten)]
    pub model: Model,
    #[command(flatten)]
    pub minimizer: Minimizer,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Also write the analytic phase boundaries as JSON.
    #[arg(long)]
    #[serde(skip)]
    pub lines: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PcCurveArgs {
    #[arg(long, default_value_t = 0.1)]
    pub n_min: f64,
    #[arg(long, default_value_t = 1.9)]
    pub n_max: f64,
    #[arg(long, default_value_t = 37)]
    pub n_steps: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[command(flatten)]
    pub model: Model,
    #[command(flatten)]
    pub minimizer: Minimizer,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct NdCurveArgs {
    /// Total filling n = N/L in [0, 2].
    #[arg(long)]
    pub n: f64,
    #[arg(long, default_value_t = 0.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 101)]
    pub p_steps: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[command(flatten)]
    pub model: Model,
    #[command(flatten)]
    pub minimizer: Minimizer,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Ring {
    /// Number of sites.
    #[arg(long = "L", default_value_t = 12, value_parser = clap::value_parser!(u8).range(2..=32))]
    pub l: u8,
    /// Filling n = N/L; n·L and the species split must be integers.
    #[arg(long)]
    pub n: f64,
    /// Polarization p = |N_up - N_dn|/N.
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    /// Detuning Δ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[command(flatten)]
    pub model: Model,
    #[command(flatten)]
    pub lanczos: Lanczos,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EdArgs {
    #[command(flatten)]
    pub ring: Ring,
    /// Lanczos start-vector seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Reference site of the correlator (defaults to L/2).
    #[arg(long)]
    pub site: Option<usize>,
    /// Write the ground-state vector in the FLP1 binary format.
    #[arg(long)]
    #[serde(skip)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct StructureFactorArgs {
    #[command(flatten)]
    pub ring: Ring,
    /// Number of Lanczos start vectors averaged.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub seeds: u32,
    /// First seed of the ensemble.
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Reference site of the correlator (defaults to L/2).
    #[arg(long)]
    pub site: Option<usize>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GapArgs {
    /// Number of sites.
    #[arg(long = "L", default_value_t = 12, value_parser = clap::value_parser!(u8).range(2..=32))]
    pub l: u8,
    /// Filling of the reference sector; n·L must be an integer.
    #[arg(long)]
    pub n: f64,
    /// Detuning Δ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    #[command(flatten)]
    pub model: Model,
    #[command(flatten)]
    pub lanczos: Lanczos,
    /// Lanczos start-vector seed, shared by the three sectors.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}
