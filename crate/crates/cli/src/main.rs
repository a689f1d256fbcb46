use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use splinecdr_cli::commands::{cmd_check, cmd_compare, cmd_convergence, cmd_solve, render_check, CliError};
use splinecdr_cli::config::{parse_config, RunConfig};

#[derive(Parser)]
#[command(
    name = "splinecdr",
    version,
    about = "Monotone dual-grid quadratic-spline solver for 1D convection-diffusion-reaction problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// March the scheme to t_end; write solution-<t>.csv files and summary.csv.
    Solve(RunArgs),
    /// Print monotonicity thresholds and the verdict for the configured step.
    Check(RunArgs),
    /// Run spatial and temporal refinement sweeps; write convergence.csv.
    Convergence(ConvergenceArgs),
    /// Monotone spline vs. upwind and central baselines; write compare.csv.
    Compare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep stepping when the monotonicity check fails.
    #[arg(long)]
    permissive: bool,
}

#[derive(Args)]
struct ConvergenceArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Refinement levels per sweep (at least 2).
    #[arg(long, default_value_t = 3)]
    levels: usize,
}

fn load(args: &RunArgs) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|source| CliError::Io {
        path: args.config.clone(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if args.permissive {
        cfg.strict_monotone = false;
    }
    Ok(cfg)
}

fn dispatch(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Solve(args) => {
            let cfg = load(&args)?;
            for path in cmd_solve(&cfg)? {
                println!("wrote {}", path.display());
            }
            Ok(0)
        }
        Command::Check(args) => {
            let cfg = load(&args)?;
            let report = cmd_check(&cfg)?;
            print!("{}", render_check(&report));
            Ok(if report.monotone { 0 } else { 2 })
        }
        Command::Convergence(args) => {
            let cfg = load(&args.run)?;
            let path = cmd_convergence(&cfg, args.levels)?;
            println!("wrote {}", path.display());
            Ok(0)
        }
        Command::Compare(args) => {
            let cfg = load(&args)?;
            let path = cmd_compare(&cfg)?;
            println!("wrote {}", path.display());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems are config errors under the exit-code contract;
            // --help and --version stay successful.
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
