use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "multiband",
    version,
    about = "Robust LPs under multi-band uncertainty"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Write the compact robust counterpart of an instance.
    Reformulate(ReformulateArgs),
    /// Solve the robust problem by the compact counterpart or by cutting planes.
    Solve(SolveArgs),
    /// Certify each row of a point and optionally print robustness cuts.
    Separate(SeparateArgs),
    /// Generate a synthetic power assignment instance with calibrated bands.
    Generate(GenerateArgs),
    /// Print the band profile calibrated from a deviation distribution.
    Calibrate(CalibrateArgs),
    /// Monte Carlo protection of a point, plus an optional in-set stress test.
    Evaluate(EvaluateArgs),
    /// Nominal, multi-band (both routes) and budgeted solves side by side.
    Compare(CompareArgs),
    /// Solve an `[lp]` section read from stdin and answer in the exec-solver
    /// reply format.
    #[command(hide = true)]
    LpSolve,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Compact,
    Cuts,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Output on stdout.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Also write the machine-readable output to this file.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Include wall-clock timings in machine-readable output.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args)]
pub struct ModelArgs {
    /// Reject `=` rows instead of splitting them into two inequalities.
    #[arg(long)]
    pub strict: bool,
    /// Drop counterpart columns and rows that cannot affect the optimum.
    #[arg(long)]
    pub elide_trivial_rows: bool,
}

#[derive(Args)]
pub struct SolverArgs {
    /// LP solver: `builtin`, or `exec:<program> [args]` speaking the
    /// `lp-solve` reply format.
    #[arg(long, default_value = "builtin")]
    pub solver: String,
    /// Relative violation tolerance of the separation.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Maximum separation rounds (default 10 m n).
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Time limit of the cutting-plane loop, in seconds.
    #[arg(long, value_name = "SECONDS")]
    pub time_limit: Option<f64>,
}

#[derive(Args)]
pub struct DistArgs {
    /// Log-normal standard deviation, in dB.
    #[arg(long, default_value_t = 5.5)]
    pub sigma_db: f64,
    /// Empirical distribution instead: a file of relative deviations, one per line.
    #[arg(long, value_name = "PATH")]
    pub samples: Option<PathBuf>,
}

#[derive(Args)]
pub struct CalibrationArgs {
    /// Number of negative bands.
    #[arg(long, default_value_t = 3)]
    pub neg: u32,
    /// Number of positive bands.
    #[arg(long, default_value_t = 3)]
    pub pos: u32,
    /// Band width as a fraction of the nominal coefficient.
    #[arg(long, default_value_t = 0.05)]
    pub width: f64,
    /// Lower counts are floor(n P shrink).
    #[arg(long, default_value_t = 0.8)]
    pub shrink: f64,
    /// Upper counts are ceil(n P stretch).
    #[arg(long, default_value_t = 1.2)]
    pub stretch: f64,
}

#[derive(Args)]
pub struct ReformulateArgs {
    pub instance: PathBuf,
    /// Where to write the counterpart.
    #[arg(short, long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Compact)]
    pub method: Method,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Write the robust solution vector here, one value per line.
    #[arg(long, value_name = "PATH")]
    pub x_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct SeparateArgs {
    pub instance: PathBuf,
    /// The point, one value per line.
    pub x: PathBuf,
    /// Print a robustness cut for every violated row.
    #[arg(long)]
    pub cuts: bool,
    /// Relative violation tolerance.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 50)]
    pub tx: usize,
    #[arg(long, default_value_t = 20)]
    pub users: usize,
    /// Side of the square area.
    #[arg(long, default_value_t = 10.0)]
    pub area: f64,
    /// Expected number of transmitters a user hears.
    #[arg(long, default_value_t = 6.0)]
    pub density: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Coverage threshold as a fraction of the full-power signal.
    #[arg(long, default_value_t = 0.3)]
    pub coverage: f64,
    /// Write only the nominal problem, without bands.
    #[arg(long)]
    pub nominal_only: bool,
    #[command(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    pub calibration: CalibrationArgs,
    #[arg(short, long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct CalibrateArgs {
    /// Number of uncertain coefficients in the row.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    pub calibration: CalibrationArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct EvaluateArgs {
    pub instance: PathBuf,
    /// The point, one value per line.
    pub x: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub realizations: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Sample deviations conditioned on |r| <= this fraction.
    #[arg(long, value_name = "FRACTION")]
    pub truncate: Option<f64>,
    /// Also sample this many scenarios inside the uncertainty set.
    #[arg(long, value_name = "SAMPLES")]
    pub in_set: Option<usize>,
    #[command(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args)]
pub struct CompareArgs {
    /// One or more instance files; each gives one line of the table.
    #[arg(required = true)]
    pub instances: Vec<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub realizations: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Sample deviations conditioned on |r| <= this fraction.
    #[arg(long, value_name = "FRACTION")]
    pub truncate: Option<f64>,
    #[command(flatten)]
    pub dist: DistArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
