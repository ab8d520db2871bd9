//! Command-line front end: curve sweeps, family sweeps, SDP tradeoffs, SIC
//! construction and verification suites.
//!
//! Curves and sweeps are written as CSV, objects as JSON. Exit codes are
//! `0` on success, `1` when a verified property or a solve fails and `2`
//! for usage and validation errors.

mod commands;
mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::curves::CurvePair;
use crate::error::Error;

pub use verify::{Property, Report};

/// Environment variable holding the default SDP tolerance.
pub const TOL_ENV: &str = "DISTURBANCE_SDP_TOL";

#[derive(Debug, Parser)]
#[command(name = "disturbance", version, about = "Information-disturbance tradeoffs for quantum measurements")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Base seed of all random restarts and samples.
    #[arg(long, global = true, default_value_t = crate::measures::DEFAULT_SEED)]
    pub seed: u64,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Writes a gnuplot script plotting the CSV given by `--out`.
    #[arg(long, global = true, requires = "out")]
    pub emit_plot: Option<PathBuf>,

    /// Relative duality gap and infeasibility tolerance of the SDP solver.
    #[arg(long, global = true, env = TOL_ENV, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form optimal tradeoff curve.
    Curve(CurveArgs),
    /// Measures of the optimal instrument family on a δ grid.
    FamilySweep(FamilyArgs),
    /// SDP tradeoff ν(E, λ) for a target POVM.
    SdpTradeoff(SdpArgs),
    /// SIC POVM as JSON.
    Sic(SicArgs),
    /// Runs a property suite and prints a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, clap::Args)]
pub struct CurveArgs {
    #[arg(long, value_parser = parse_pair)]
    pub pair: CurvePair,
    /// Dimensions (comma separated) for the fidelity and trace pairs.
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<usize>,
    /// Outcome counts (comma separated) for the diamond pair.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// First grid value of the disturbance coordinate.
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<f64>,
    /// Last grid value of the disturbance coordinate.
    #[arg(long, allow_hyphen_values = true)]
    pub stop: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct FamilyArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Number of δ values spread over `[0, 1 − 1/d]`.
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    /// Explicit δ values; overrides `--points`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub delta: Vec<f64>,
    #[arg(long, default_value_t = crate::measures::DEFAULT_RESTARTS)]
    pub restarts: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinPovm {
    Basis,
    Sic2,
    Sic3,
    Degenerate,
}

#[derive(Debug, clap::Args)]
pub struct SdpArgs {
    /// `basis`, `sic2`, `sic3`, `degenerate` or the path of a POVM JSON file.
    #[arg(long)]
    pub povm: String,
    /// Dimension for `basis` and `degenerate`.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Explicit λ values; overrides `--points`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<f64>,
    /// Number of λ values spread over `[0, λ_max]`, beyond which ν = 0.
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    /// Directory receiving one optimal-instrument JSON per λ.
    #[arg(long)]
    pub dump_instruments: Option<PathBuf>,
    /// Directory receiving the SDPA sparse form of each solved program.
    #[arg(long)]
    pub dump_problem: Option<PathBuf>,
    /// CSV comparing the Lüders family `tE + (1−t)·tr(E)/d` with the SDP.
    #[arg(long)]
    pub heuristic_out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SicArgs {
    #[arg(long)]
    pub d: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Twirl,
    FuchsVanDeGraaf,
    Corz,
    /// Convexity and invariance of every measure.
    Axioms,
    Curves,
    Sdp,
    All,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Random instances per property.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = crate::measures::DEFAULT_RESTARTS)]
    pub restarts: usize,
}

fn parse_pair(s: &str) -> Result<CurvePair, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a successful command produced.
pub(crate) enum Outcome {
    Done,
    /// A verification report that may contain failures.
    Report(Report),
}

/// Parses `args`, runs the command and returns the exit code. Results go to
/// `--out` or `stdout`; diagnostics go to `stderr`.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    run(&config, stdout, stderr)
}

pub fn run(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match commands::dispatch(config, stdout, stderr) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::Report(r)) => {
            if r.passed {
                0
            } else {
                for p in r.properties.iter().filter(|p| !p.passed) {
                    let _ = writeln!(stderr, "property failed: {}: {}", p.name, p.detail);
                }
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Solver { .. } => 1,
        _ => 2,
    }
}
