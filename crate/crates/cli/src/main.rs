//! `qfan`: solve, verify and inspect sector-equipartition problems from the command line.
//!
//! Exit status: 0 success, 1 input error, 2 solver did not converge, 3 bound violated.

mod commands;
mod io;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;

/// Thread count for the internally parallel computations; results do not depend on it.
pub const THREADS_ENV: &str = "QFAN_THREADS";

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "qfan",
    version,
    about = "Regular q-sector equipartitions of masses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Find a hyperplane annihilating the requested Fourier coefficients.
    Solve(SolveArgs),
    /// Annihilate coefficients 1..n and check the resulting deviation bounds.
    Verify(VerifyArgs),
    /// Sample a sector-measure profile and its Fourier coefficients.
    Scan(ScanArgs),
    /// Regular 6-fan of bisecting lines for a planar mass.
    Fan6(Fan6Args),
    /// Write a two-cluster disk mass.
    Adversarial(AdversarialArgs),
    /// Check the sector deviation at the 6-fan center, optionally sweeping a center grid.
    Certify(CertifyArgs),
    /// Tail sum of m^-2 over m > n not divisible by q.
    Tailsum(TailsumArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SolverFlags {
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    #[arg(long, default_value_t = qfan::solver::DEFAULT_STARTS)]
    pub starts: usize,
    #[arg(long)]
    pub seed: u64,
    /// Residual tolerance relative to the largest total mass.
    #[arg(long, default_value_t = qfan::solver::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SolveArgs {
    /// Mass files; each holds one mass or a JSON array of masses.
    #[arg(long, required = true, num_args = 1..)]
    pub measures: Vec<String>,
    #[arg(long)]
    pub q: u32,
    /// One positive exponent per mass, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub exponents: Vec<u32>,
    #[command(flatten)]
    pub solver: SolverFlags,
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Mass files; `d` masses on `C^{d n}`.
    #[arg(long, required = true, num_args = 1..)]
    pub measures: Vec<String>,
    #[arg(long)]
    pub q: u32,
    /// Annihilate coefficients 1..=n of every mass.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Slack added to every bound.
    #[arg(long, default_value_t = 1e-6)]
    pub slack: f64,
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub measure: String,
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Apex `re,im` of the planar wedges (d = 1; default the origin).
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "x"
    )]
    pub apex: Option<Vec<f64>>,
    /// Configuration as reals `re a_1,im a_1,...,re b,im b`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    /// Profile CSV (theta, f_theta).
    #[arg(long)]
    pub out: String,
    /// Coefficient CSV (m, re_c, im_c, abs_c); defaults to `<out>.coeffs.csv`.
    #[arg(long)]
    pub coeffs: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct Fan6Args {
    #[arg(long)]
    pub measure: String,
    #[arg(long, default_value_t = qfan::fan::DEFAULT_SCAN_POINTS)]
    pub scan_points: usize,
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args, Serialize)]
pub struct AdversarialArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub measure: String,
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Points per side of a center grid to sweep (0 disables the sweep).
    #[arg(long, default_value_t = 0)]
    pub sweep: usize,
    /// Sweep window `lo_re,lo_im,hi_re,hi_im`; defaults to the support box enlarged by 10%.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub window: Option<Vec<f64>>,
    /// Compare the sweep minimum with the two-cluster lower bound for this many disks per cluster.
    #[arg(long)]
    pub lower_n: Option<usize>,
    #[arg(long)]
    pub out: String,
}

#[derive(Debug, Args, Serialize)]
pub struct TailsumArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    #[arg(long)]
    pub out: String,
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // an already-initialized pool keeps its size
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match commands::run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
