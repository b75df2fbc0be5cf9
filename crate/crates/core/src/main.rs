use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use usc_trio::config::RunConfig;
use usc_trio::runner::{cmd_simulate, cmd_sweep, cmd_verify, open_output, RunError, RunResult};

/// Exact intrinsic-decoherence dynamics of three coupled oscillators.
#[derive(Parser)]
#[command(name = "usc-trio", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Path to a `key = value` configuration file.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    /// Override one key, e.g. `--set gamma=25`; repeatable, last wins.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one parameter set over a time grid, one CSV row per point.
    Simulate(RunArgs),
    /// Vary one parameter, one steady-time CSV row per value.
    Sweep(RunArgs),
    /// Run the cross-validation suites, one JSON line per suite.
    Verify(RunArgs),
}

fn load(args: &RunArgs) -> RunResult<RunConfig> {
    let text = match &args.config {
        Some(path) => Some(std::fs::read_to_string(path).map_err(|e| {
            RunError::Config(format!("config: cannot read {}: {e}", path.display()))
        })?),
        None => None,
    };
    RunConfig::from_sources(text.as_deref(), &args.set).map_err(|e| RunError::Config(e.to_string()))
}

/// Caps the worker pool when `USC_TRIO_THREADS` is set.
fn configure_threads() -> RunResult<()> {
    match std::env::var("USC_TRIO_THREADS") {
        Ok(raw) => {
            let n = raw
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    RunError::Config(format!(
                        "USC_TRIO_THREADS = {raw:?} must be a positive integer"
                    ))
                })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| RunError::Config(format!("thread pool: {e}")))?;
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

type CmdFn = fn(&RunConfig, &mut dyn Write) -> RunResult<()>;

fn run() -> RunResult<()> {
    configure_threads()?;
    let cli = Cli::parse();
    let (args, cmd): (&RunArgs, CmdFn) = match &cli.command {
        Command::Simulate(a) => (a, cmd_simulate),
        Command::Sweep(a) => (a, cmd_sweep),
        Command::Verify(a) => (a, cmd_verify),
    };
    let cfg = load(args)?;
    let mut out = open_output(&cfg)?;
    cmd(&cfg, &mut out)
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
