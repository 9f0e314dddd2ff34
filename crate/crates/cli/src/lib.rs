//! Command-line front end for `rankone-core`.
//!
//! Every command writes a line-oriented report to standard output. Reports
//! depend only on the arguments and the input files, so identical invocations
//! print identical bytes (wall time is added only with `--timing`).
//!
//! Exit codes: 0 success, 1 usage or input error, 2 size cap refusal,
//! 3 failed verification.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rankone_core::Error;

pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "rankone",
    version,
    about = "Rank-one robust low-rank approximation, norms and reductions"
)]
pub struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Append wall-clock time to the report.
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cut norm or infinity-to-one norm of a matrix.
    Norm(NormArgs),
    /// Rank-one l0 or l1 approximation.
    Lra(LraArgs),
    /// Build a derived matrix (support binarization, doubling, gadget, lifting).
    Reduce(ReduceArgs),
    /// Run a property suite or check a gadget threshold.
    Verify(VerifyArgs),
    /// Community extraction from a bipartite graph or biadjacency matrix.
    Community(CommunityArgs),
    /// Built-in worked examples.
    Demo(DemoArgs),
}

#[derive(Args, Debug, Clone, Copy)]
#[group(required = true, multiple = false)]
pub struct Mode {
    /// Exhaustive enumeration (subject to --cap).
    #[arg(long)]
    pub exact: bool,
    /// Iterative heuristic.
    #[arg(long)]
    pub heur: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Random seed for heuristic restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of heuristic restarts.
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    /// Largest enumerated dimension for exact solvers.
    #[arg(long, default_value_t = rankone_core::oracle::DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    Inf1,
    Cut,
}

#[derive(Args, Debug)]
pub struct NormArgs {
    #[arg(long, value_enum)]
    pub kind: NormKind,
    #[command(flatten)]
    pub mode: Mode,
    /// Matrix file.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Args, Debug)]
pub struct LraArgs {
    /// 0 for the mismatch count (binary input), 1 for the sum of absolute errors.
    #[arg(long = "p", value_parser = clap::value_parser!(u8).range(0..=1))]
    pub p: u8,
    #[command(flatten)]
    pub mode: Mode,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Heuristic start: svd, random or file:PATH (a factor file).
    #[arg(long, default_value = "svd")]
    pub init: String,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    /// Support indicators of a factor file.
    Phi,
    /// The block matrix [A, -A; -A, A].
    Double,
    /// MAX CUT gadget of a graph file.
    Gadget,
    /// Block diagonal with --r copies.
    Lift,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long, value_enum)]
    pub what: Construction,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Gadget block size: a power of two or "auto".
    #[arg(long = "p", default_value = "auto")]
    pub p: String,
    /// Number of diagonal copies for lifting.
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    /// Output file; the constructed text goes to standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Property {
    /// MAX CUT gadget threshold for --in GRAPH and --cstar N.
    Gadget,
    /// Cut norm and inf1 norm of the doubling matrix.
    Doubling,
    /// Sign optima and move deltas of rank-one l1 fits.
    #[value(name = "theorem2")]
    SignOptimum,
    /// min l1 error = mn - inf1 norm on sign matrices.
    #[value(name = "lemma3")]
    SignIdentity,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub what: Property,
    /// Graph file (gadget only).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Cut-size threshold (gadget only).
    #[arg(long)]
    pub cstar: Option<usize>,
    /// Gadget block size: a power of two or "auto".
    #[arg(long = "p", default_value = "auto")]
    pub p: String,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest random matrix side.
    #[arg(long, default_value_t = 5)]
    pub size: usize,
}

#[derive(Args, Debug)]
pub struct CommunityArgs {
    #[command(flatten)]
    pub mode: Mode,
    /// Bipartite edge list ("m n e" header) or biadjacency matrix.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub search: SearchArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    /// Single-community recovery on a 4x5 binary matrix.
    #[value(name = "example1")]
    Community,
    /// 6x6 sign matrix where coordinate descent stalls.
    #[value(name = "remark2")]
    Trap,
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub name: DemoName,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Cap(String),
    /// The report is printed before the failure is signalled.
    Verify(Report),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { size, .. } => {
                CliError::Cap(format!("{e} (--cap {size} would allow it)"))
            }
            Error::GadgetTooLarge { .. } => CliError::Cap(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let echo = std::iter::once("rankone".to_string())
        .chain(
            args.iter()
                .skip(1)
                .map(|a| a.to_string_lossy().into_owned()),
        )
        .collect::<Vec<_>>()
        .join(" ");

    let start = Instant::now();
    let outcome = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(&cli.command, &echo)),
            Err(e) => Err(CliError::Usage(format!("cannot start {n} threads: {e}"))),
        },
        None => commands::dispatch(&cli.command, &echo),
    };
    let elapsed = cli.timing.then(|| start.elapsed().as_secs_f64());
    emit(outcome, elapsed, out, err)
}

/// Writes the outcome and returns its exit code.
fn emit(
    outcome: CliResult<commands::Output>,
    elapsed: Option<f64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let timing = |mut r: Report| {
        if let Some(secs) = elapsed {
            r.field("wall time", format!("{secs:.3} s"));
        }
        r
    };
    match outcome {
        Ok(commands::Output::Report(r)) => {
            let _ = write!(out, "{}", timing(r).render());
            EXIT_OK
        }
        Ok(commands::Output::Raw(text)) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(CliError::Verify(r)) => {
            let _ = write!(out, "{}", timing(r).render());
            let _ = writeln!(err, "error: verification failed");
            EXIT_VERIFY
        }
        Err(CliError::Cap(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CAP
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}
