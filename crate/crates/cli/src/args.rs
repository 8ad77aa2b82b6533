use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "aperiodic",
    version,
    about = "Lattice-gas models with non-periodic ground states",
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel scans (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    /// Bare text (only for `generate` and `tiling-complete`).
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum System {
    ThueMorse,
    Sturmian,
    Periodic,
}

/// Which configuration to use. Commands that take a spec default to the
/// spec's own ground state.
#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    #[arg(long, value_enum)]
    pub system: Option<System>,
    /// Rotation number, `quad:(p+q*sqrtD)/c` or `dec:0.ddd[:precision]`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Repeating word for `--system periodic`.
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,
    /// Symbol labels for `--system periodic` (default `01`).
    #[arg(long, allow_hyphen_values = true)]
    pub alphabet: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub start: i64,
    #[arg(long)]
    pub width: usize,
    /// Restrict to excitations changing at most this many sites.
    #[arg(long)]
    pub max_flips: Option<usize>,
    /// Largest number of configurations to enumerate.
    #[arg(long, default_value_t = aperiodic::hamiltonian::DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GibbsMethod {
    Exact,
    Metropolis,
}

#[derive(Args, Debug, Clone)]
pub struct GibbsArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub source: SourceArgs,
    /// First site of the volume.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    pub start: i64,
    /// Number of sites in the volume.
    #[arg(long)]
    pub volume: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: GibbsMethod,
    #[arg(long, default_value_t = 100_000)]
    pub sweeps: u64,
    #[arg(long, default_value_t = 1000)]
    pub burn_in: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Patches whose densities are estimated, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub observables: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Single,
    Block,
    Dyadic,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print a window of a configuration.
    Generate {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        start: i64,
        #[arg(long)]
        len: usize,
    },
    /// Patch frequency: exact for Sturmian systems, empirical otherwise.
    Frequency {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_hyphen_values = true)]
        patch: String,
        /// Window length for the empirical estimate.
        #[arg(long, default_value_t = 1 << 20)]
        len: usize,
    },
    /// Forbidden pair distances and the zero-run bound of a Sturmian system.
    Forbidden {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value_t = aperiodic::symbolic::DEFAULT_K_MAX)]
        k_max: u64,
    },
    /// Continued-fraction expansion of a rotation number.
    Cf {
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Also test whether all quotients stay at or below this bound.
        #[arg(long)]
        bound: Option<i128>,
    },
    /// Energy per site of a configuration over a window.
    Energy {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        start: i64,
        #[arg(long)]
        len: usize,
    },
    /// Relative energy of an excitation of the ground state.
    RelativeEnergy {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
        /// Sites to flip, e.g. `0,3,-2`.
        #[arg(long, allow_hyphen_values = true)]
        flip: Option<String>,
        /// Flip a block, `start:len`.
        #[arg(long, allow_hyphen_values = true)]
        block: Option<String>,
        /// Explicit overrides, `site:label,...`.
        #[arg(long, allow_hyphen_values = true)]
        set: Option<String>,
    },
    /// Exhaustive check that no excitation in a window lowers the energy.
    GroundCheck {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Patch-count discrepancy over windows of given lengths.
    Discrepancy {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_hyphen_values = true)]
        patch: String,
        /// Window lengths, e.g. `10,100,1000` or `10..20`.
        #[arg(long)]
        lengths: String,
        #[arg(long)]
        prefix: usize,
        /// Frequency; defaults to the exact Sturmian value or an empirical
        /// estimate at 64 times the largest length.
        #[arg(long)]
        omega: Option<f64>,
        /// Examine every `stride`-th window start only.
        #[arg(long)]
        stride: Option<usize>,
    },
    /// Largest count difference of a symbol between equal-length windows.
    Balance {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
        #[arg(long)]
        l_max: usize,
    },
    /// Threshold chemical potential along a family of excitations.
    StabilityScan {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
        /// Favored patches, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        favored: String,
        #[arg(long, value_enum)]
        family: FamilyKind,
        /// Sites for `single`, block starts for `block`.
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        starts: String,
        /// Block widths for `block`.
        #[arg(long, default_value = "1")]
        widths: String,
        /// Exponents k of the block sizes 2^k for `dyadic`.
        #[arg(long, default_value = "0")]
        scales: String,
        #[arg(long, default_value_t = aperiodic::stability::DEFAULT_BLOCKS_PER_SCALE)]
        blocks_per_scale: usize,
    },
    /// Lowest relative energy over all excitations in a window.
    Search {
        #[arg(long)]
        spec: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Finite-volume Gibbs state at one inverse temperature.
    Gibbs {
        #[command(flatten)]
        gibbs: GibbsArgs,
        #[arg(long)]
        beta: f64,
    },
    /// Gibbs estimates along an ascending list of inverse temperatures.
    Anneal {
        #[command(flatten)]
        gibbs: GibbsArgs,
        /// Comma-separated ascending β values.
        #[arg(long)]
        betas: String,
    },
    /// Matching-rule violations of a complete tiling.
    TilingVerify {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        /// Per-tile chemical potentials, `id:epsilon,...`.
        #[arg(long, allow_hyphen_values = true)]
        chem: Option<String>,
    },
    /// Fill the holes of a grid with matching tiles.
    TilingComplete {
        #[arg(long)]
        tileset: PathBuf,
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value_t = aperiodic::wang::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Occurrences of a 2D patch and their deviation from a frequency.
    TilingCount {
        #[arg(long)]
        grid: PathBuf,
        /// Cells `x,y:tile` separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        patch: String,
        #[arg(long, default_value_t = 0.0)]
        omega: f64,
    },
}
