use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "speckit", version, about = "Specular derivatives and specular Euler schemes for scalar ODEs")]
pub struct Cli {
    /// Suppress the version banner and warnings on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem with one scheme and write the trajectory.
    Solve(SolveArgs),
    /// Run a convergence sweep over N = 2^k for one or more schemes.
    Sweep(SweepArgs),
    /// Numeric checks of the quasi-Fermat, quasi-Rolle and quasi-MVT statements.
    Probe(ProbeArgs),
    /// Preset five-scheme error tables for the benchmark problems.
    Table(TableArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Built-in problem: dahlquist, circle or nonsmooth.
    #[arg(long, conflicts_with = "config")]
    pub builtin: Option<String>,
    /// TOML problem file (a builtin with parameters, or `source`/`exact` expressions).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub u0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    /// End time.
    #[arg(long = "T", visible_alias = "t-end", allow_negative_numbers = true)]
    pub t_end: Option<f64>,
    /// Constant of the nonsmooth benchmark.
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Fixed-point tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub eta: f64,
    /// Fixed-point iteration cap.
    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,
    /// How two-step schemes get u1: exact, ee or cn (default: exact when available, else ee).
    #[arg(long)]
    pub u1: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
    Svg,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Scheme code: ee, ie, cn, st, se1 .. se6.
    #[arg(long)]
    pub scheme: String,
    /// Step size.
    #[arg(long)]
    pub h: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Comma-separated scheme codes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub schemes: Vec<String>,
    #[arg(long)]
    pub k_min: u32,
    #[arg(long)]
    pub k_max: u32,
    /// Norm: 1, 2 or inf.
    #[arg(long, default_value = "inf")]
    pub p: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeKind {
    Fermat,
    Mvt,
    Rolle,
    Lipschitz,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    pub kind: ProbeKind,
    /// Target function as an expression in x.
    #[arg(long, conflicts_with = "builtin", allow_hyphen_values = true)]
    pub expr: Option<String>,
    /// Built-in target: kink, relu or lsc.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Jump size of the lsc target.
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Claimed extremum (fermat).
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 1024)]
    pub grid_n: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Claimed bound on |f^s| (lipschitz).
    #[arg(long = "M")]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Circle,
    Dahlquist,
    Nonsmooth,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    pub preset: Preset,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 3)]
    pub k_min: u32,
    #[arg(long, default_value_t = 17)]
    pub k_max: u32,
    #[arg(long, default_value = "inf")]
    pub p: String,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
