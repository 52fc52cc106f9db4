mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "sympindex",
    version,
    about = "Index iteration and symmetric closed characteristics"
)]
struct Cli {
    /// Worker threads; defaults to SYMPINDEX_THREADS, then all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a symplectic matrix into basic normal forms.
    NormalForm(NormalFormArgs),
    /// Tabulate odd-iterate indices of a decomposition.
    Iterate(IterateArgs),
    /// Smallest m with an index gap of at least 4.
    Gap(GapArgs),
    /// Search for symmetric closed characteristics on an ellipsoid.
    Find(FindArgs),
    /// Spectral indices against the iteration formulas.
    Spectral(SpectralArgs),
    /// Direct form against the sum over roots of −1.
    BottCheck(BottArgs),
    /// Same as `find --verify`.
    Verify(FindArgs),
}

#[derive(Args, Serialize)]
pub struct NormalFormArgs {
    /// JSON file with the matrix rows, either `[[..],..]` or `{"matrix": [[..],..]}`.
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = sympindex::symplectic::DEFAULT_CLUSTER_TOL)]
    pub cluster_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub rank_tol: f64,
    /// First index assigned to the leading block.
    #[arg(long, default_value_t = 0)]
    pub i1: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Serialize)]
pub struct IterateArgs {
    #[arg(long)]
    pub decomp: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub m_min: u32,
    #[arg(long, default_value_t = 20)]
    pub m_max: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct GapArgs {
    #[arg(long)]
    pub decomp: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub m_max: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Serialize, Clone)]
pub struct FindArgs {
    /// Semi-axes r₁,r₂,… of the ellipsoid.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ellipsoid: Vec<f64>,
    /// Fourier truncation K (power of two).
    #[arg(long, default_value_t = 128)]
    pub modes: usize,
    #[arg(long, default_value_t = 1024)]
    pub quad_nodes: usize,
    /// Random seeds in addition to one per coordinate plane.
    #[arg(long, default_value_t = 4)]
    pub seeds: usize,
    /// Gradient tolerance of the descent.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = sympindex::dual::DEFAULT_ORBIT_TOL)]
    pub orbit_tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub distinct_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Truncation for the index forms (power of two).
    #[arg(long, default_value_t = 64)]
    pub index_modes: usize,
    #[arg(long, default_value_t = sympindex::spectral::DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    #[arg(long, default_value = "chars.json")]
    pub out: PathBuf,
    /// Run the full cross-validation and fail on any mismatch.
    #[arg(long)]
    pub verify: bool,
    /// Largest iterate checked by `--verify`.
    #[arg(long, default_value_t = 4)]
    pub verify_m: u32,
    /// Also write the orbit samples as CSV.
    #[arg(long)]
    pub dump_samples: Option<PathBuf>,
}

#[derive(Args, Serialize)]
pub struct SpectralArgs {
    #[arg(long)]
    pub chars: PathBuf,
    /// Iterates as `a..b` (inclusive) or a single value.
    #[arg(long, default_value = "1..4", value_parser = parse_range)]
    pub m: (u32, u32),
    /// Base truncation K; stability is confirmed at 2K.
    #[arg(long, default_value_t = 64)]
    pub modes: usize,
    #[arg(long, default_value_t = sympindex::spectral::DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    #[arg(long, default_value = "report.json")]
    pub report: PathBuf,
}

#[derive(Args, Serialize)]
pub struct BottArgs {
    #[arg(long)]
    pub chars: PathBuf,
    #[arg(long, default_value = "1..3", value_parser = parse_range)]
    pub m: (u32, u32),
    #[arg(long, default_value_t = 64)]
    pub modes: usize,
    #[arg(long, default_value_t = sympindex::spectral::DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a == 0 || b < a {
        return Err(format!("range {s:?} must satisfy 1 ≤ a ≤ b"));
    }
    Ok((a, b))
}

#[derive(Debug)]
pub enum CliError {
    Lib(sympindex::Error),
    Usage(String),
    Verification(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_nonconvergence() => 3,
            CliError::Lib(_) | CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<sympindex::Error> for CliError {
    fn from(e: sympindex::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Lib(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    sympindex::exec::configure_threads(cli.threads);
    let result = match cli.command {
        Command::NormalForm(a) => commands::normal_form(&a),
        Command::Iterate(a) => commands::iterate_cmd(&a),
        Command::Gap(a) => commands::gap(&a),
        Command::Find(a) => commands::find(&a),
        Command::Verify(mut a) => {
            a.verify = true;
            commands::find(&a)
        }
        Command::Spectral(a) => commands::spectral(&a),
        Command::BottCheck(a) => commands::bott_check_cmd(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sympindex: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
