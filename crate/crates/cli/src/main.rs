//! `hypiss`: certify, simulate and tabulate scenarios from TOML/JSON files.
//!
//! Output files under `--out`:
//!
//! - `certify`: `certificate.json`, `certificate.txt`
//! - `run`: the certificate files, `trace.csv` (n, t, L, U, sup_b_sq),
//!   `summary.json`, and `trajectory.csv` when `--stride` is given
//! - `table`: `table.csv`, `table.txt`
//! - `sweep`: `sweep.csv`, `sweep.txt`
//!
//! Exit codes: 0 success, 1 failed certificate (or failed table row), 2 bad
//! input, 3 non-finite simulation state.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod csvout;
mod reference;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{exit, InputError, Options};

#[derive(Parser)]
#[command(name = "hypiss", version, about = "ISS certification and simulation of 1-D linear hyperbolic balance laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the sufficient conditions and write the certificate.
    Certify(Common),
    /// Simulate and compare the Lyapunov function with its envelope.
    Run(Common),
    /// Envelope gap norms over a list of mesh sizes.
    Table(Common),
    /// Feedback-gain bounds and envelope constant across a range of xi.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (.toml, or .json).
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Simulate even when the certificate fails.
    #[arg(long)]
    force: bool,
    /// Write every n-th state to trajectory.csv.
    #[arg(long, value_name = "n")]
    stride: Option<usize>,
    /// Mesh sizes for `table`.
    #[arg(long = "J-list", value_delimiter = ',', default_value = "200,400,800,1600")]
    cells: Vec<usize>,
    /// `a:b:steps` for `sweep`; defaults to the scenario's xi.
    #[arg(long, value_parser = commands::parse_xi_range)]
    xi_range: Option<(f64, f64, usize)>,
}

fn configure_threads() -> Result<(), InputError> {
    let Ok(v) = std::env::var("HYPISS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| InputError(format!("HYPISS_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| InputError(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(exit::INPUT);
    }
    let (cmd, c): (fn(&Options) -> anyhow::Result<u8>, Common) = match cli.command {
        Command::Certify(c) => (commands::certify, c),
        Command::Run(c) => (commands::run, c),
        Command::Table(c) => (commands::table, c),
        Command::Sweep(c) => (commands::sweep, c),
    };
    let opts = Options {
        scenario: c.scenario,
        out: c.out,
        force: c.force,
        stride: c.stride,
        cells: c.cells,
        xi_range: c.xi_range,
    };
    match cmd(&opts) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.downcast_ref::<InputError>().is_some() { exit::INPUT } else { exit::FAILED };
            ExitCode::from(code)
        }
    }
}
