mod cartan;
mod euler;
mod lie;
mod output;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spencer_core::Error;

/// Lie-algebra checks, characteristic integration and 2D Euler runs with
/// invariant monitoring.
#[derive(Debug, Parser)]
#[command(name = "spencer", version)]
struct Cli {
    /// Directory for machine-readable outputs; created if missing.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Print JSON on stdout instead of the human-readable summary.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structure-constant checks, cohomology and Spencer differentials.
    Lie {
        #[command(subcommand)]
        command: lie::LieCommand,
    },
    /// Integrate one characteristic of the covariant-constancy equation.
    Cartan(cartan::CartanArgs),
    /// Pseudo-spectral 2D Euler runs.
    Euler {
        #[command(subcommand)]
        command: euler::EulerCommand,
    },
    /// Recompute the conservation report from an invariant series CSV.
    Report(report::ReportArgs),
}

/// Shared output settings.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub out: Option<PathBuf>,
    pub json: bool,
}

impl Ctx {
    /// The output directory, created on first use.
    pub fn out_dir(&self) -> spencer_core::Result<Option<&PathBuf>> {
        if let Some(dir) = &self.out {
            std::fs::create_dir_all(dir)?;
        }
        Ok(self.out.as_ref())
    }
}

/// 0 success, 1 configuration, 2 numerical gate, 3 I/O.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::CflViolation { .. } | Error::AdvectiveCfl { .. } => 2,
        Error::Io(_) | Error::Csv(_) => 3,
        _ => 1,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("SPENCER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("SPENCER_THREADS must be a positive integer, got '{raw}'"))?;
    if n == 0 {
        return Err("SPENCER_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }

    let ctx = Ctx {
        out: cli.out,
        json: cli.json,
    };
    let result = match cli.command {
        Command::Lie { command } => lie::run(&ctx, command),
        Command::Cartan(args) => cartan::run(&ctx, args),
        Command::Euler { command } => euler::run(&ctx, command),
        Command::Report(args) => report::run(&ctx, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::CflViolation { .. }) {
                eprintln!("hint: lower ds or pass --auto-ds");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
