//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Certified brackets for constants of polynomial Banach spaces.
#[derive(Parser, Debug, Clone, Serialize)]
#[command(name = "bpl", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Serialize)]
pub struct GlobalArgs {
    /// Seed for every random stream
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Optimizer step tolerance
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,

    /// Restarts per optimization
    #[arg(long, global = true, default_value_t = 64)]
    pub budget: usize,

    /// Iterations per restart
    #[arg(long, global = true, default_value_t = 500)]
    pub iters: usize,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file (stdout when absent)
    #[arg(long, short, global = true)]
    pub output: Option<String>,

    /// Record wall-clock times (breaks byte-level reproducibility)
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Lattice selection.
#[derive(Args, Debug, Clone, Serialize)]
pub struct LatticeArgs {
    /// Lattice family: lp or lorentz
    #[arg(long, default_value = "lp")]
    pub family: String,

    /// First exponent (`inf` allowed)
    #[arg(long, default_value = "2")]
    pub p: String,

    /// Second Lorentz exponent (`inf` allowed)
    #[arg(long)]
    pub q: Option<String>,
}

/// Index-set selection.
#[derive(Args, Debug, Clone, Serialize)]
pub struct IndexArgs {
    /// Dimension
    #[arg(long)]
    pub n: usize,

    /// Degree
    #[arg(long)]
    pub m: u32,

    /// Generator: full, full_up_to, tetra, tetra_up_to, even, support_level
    #[arg(long = "gen", default_value = "full")]
    pub generator: String,

    /// Support size for support_level
    #[arg(long)]
    pub l: Option<u32>,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Enumerate an index set
    Idxset(IndexArgs),

    /// Characteristic of one multi-index
    Char {
        /// Exponents, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<u32>,
        #[command(flatten)]
        lattice: LatticeArgs,
    },

    /// Polynomial projection constant
    LambdaHat {
        #[command(flatten)]
        index: IndexArgs,
        #[command(flatten)]
        lattice: LatticeArgs,
    },

    /// Unconditional basis constant of the monomials
    Chimon {
        #[command(flatten)]
        index: IndexArgs,
        #[command(flatten)]
        lattice: LatticeArgs,
    },

    /// Bohr radius of an index set (use full_up_to or tetra_up_to)
    Bohr {
        #[command(flatten)]
        index: IndexArgs,
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Largest homogeneous degree computed in full
        #[arg(long)]
        m_max: Option<u32>,
    },

    /// Closed-form constants
    Constants(ConstantsArgs),

    /// Lorentz-space projection constants and pointwise estimates
    LorentzSuite {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: f64,
        /// Second exponent (`inf` allowed)
        #[arg(long)]
        s: String,
    },

    /// Verification suites
    Verify {
        /// Suite name or `all`
        #[arg(long, default_value = "all")]
        suite: String,
    },

    /// Grid sweep of one quantity (row-major over family, p, q, n, m)
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ConstantsArgs {
    /// Partial product κ over the first `--primes` primes
    #[arg(long)]
    pub kappa: bool,

    /// Number of primes in the κ product
    #[arg(long, default_value_t = 1_000_000)]
    pub primes: usize,

    /// Ryll–Wojtaszczyk value at `m,n`
    #[arg(long, value_delimiter = ',')]
    pub rw: Option<Vec<usize>>,

    /// Lebesgue constant of degree `m`
    #[arg(long)]
    pub lebesgue: Option<u32>,

    /// Kadets–Snobar bound for a dimension
    #[arg(long)]
    pub kadets: Option<f64>,

    /// Reference curve name
    #[arg(long)]
    pub reference: Option<String>,

    /// Dimension at which the reference curve is evaluated
    #[arg(long)]
    pub at: Option<f64>,

    /// Exponent `r` of the reference curve
    #[arg(long)]
    pub r: Option<f64>,

    /// Exponent `s` of the reference curve
    #[arg(long)]
    pub s: Option<f64>,

    /// Degree `m` of the reference curve
    #[arg(long = "curve-m")]
    pub curve_m: Option<u32>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SweepArgs {
    /// lambda-hat, chimon, km or bohr
    #[arg(long)]
    pub quantity: String,

    /// Dimensions: list and ranges such as `2,3` or `2..16x2`
    #[arg(long)]
    pub n: String,

    /// Degrees: list and ranges
    #[arg(long)]
    pub m: String,

    #[arg(long = "gen", default_value = "full")]
    pub generator: String,

    #[arg(long)]
    pub l: Option<u32>,

    #[arg(long, default_value = "lp")]
    pub family: String,

    /// First exponents: list and ranges, `inf` allowed
    #[arg(long, default_value = "2")]
    pub p: String,

    /// Second exponents (Lorentz only)
    #[arg(long)]
    pub q: Option<String>,

    /// Truncation for bohr
    #[arg(long)]
    pub m_max: Option<u32>,
}
