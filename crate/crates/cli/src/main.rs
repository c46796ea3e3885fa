//! `hidden-shift`: seeded experiments for the injectivization toolkit.
//!
//! Exit codes: 0 when every verdict passes, 1 when any fails, 2 for
//! configuration or usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hidden_shift_cli::bent::{run_bent_suite, BentConfig};
use hidden_shift_cli::bounds::{run_injectivization_bounds, BoundsConfig};
use hidden_shift_cli::end_to_end::{run_end_to_end, EndToEndConfig};
use hidden_shift_cli::game::{run_classical_game, GameConfig};
use hidden_shift_cli::oracle_cmd::{generate, inspect, GenerateArgs, InspectArgs};
use hidden_shift_cli::periodicity::{run_periodicity_census, PeriodicityConfig};
use hidden_shift_cli::report::{ExperimentReport, ReportFormat};
use hidden_shift_cli::ConfigError;

#[derive(Parser)]
#[command(
    name = "hidden-shift",
    version,
    about = "Hidden shift injectivization experiments: failure bounds, end-to-end recovery, bent suites, the classical elimination game, and periodicity censuses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the full report here (verdicts always go to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Injectivization failure rates vs the exact bounds.
    Bounds {
        #[command(flatten)]
        cfg: BoundsConfig,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full hidden-shift recovery on planted instances.
    EndToEnd {
        #[command(flatten)]
        cfg: EndToEndConfig,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Bent function constructions and exhaustive scans.
    Bent {
        #[command(flatten)]
        cfg: BentConfig,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The line-elimination guessing game.
    ClassicalGame {
        #[command(flatten)]
        cfg: GameConfig,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Census of periodic functions vs the union bound.
    Periodicity {
        #[command(flatten)]
        cfg: PeriodicityConfig,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generate and inspect oracle files.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    Generate(GenerateArgs),
    Inspect(InspectArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Bounds { cfg, output } => experiment(run_injectivization_bounds(&cfg), &output),
        Command::EndToEnd { cfg, output } => experiment(run_end_to_end(&cfg), &output),
        Command::Bent { cfg, output } => experiment(run_bent_suite(&cfg), &output),
        Command::ClassicalGame { cfg, output } => experiment(run_classical_game(&cfg), &output),
        Command::Periodicity { cfg, output } => experiment(run_periodicity_census(&cfg), &output),
        Command::Oracle { command } => {
            let result = match command {
                OracleCommand::Generate(args) => generate(&args),
                OracleCommand::Inspect(args) => inspect(&args),
            };
            match result {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
    };
    ExitCode::from(code)
}

fn experiment(result: Result<ExperimentReport, ConfigError>, output: &OutputArgs) -> u8 {
    match result {
        Ok(report) => {
            report.print_verdicts();
            if let Some(path) = &output.out {
                if let Err(e) = report.write(path, output.format) {
                    eprintln!("error: {e}");
                    return 2;
                }
                println!("report written to {}", path.display());
            }
            if report.all_pass() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
