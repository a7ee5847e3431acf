use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use wcop_cli::{commands, verify, CliError, ExperimentConfig, Report, EXIT_TOLERANCE};

/// Experiments on weighted composition operators of the unit disc.
#[derive(Parser)]
#[command(name = "wcop", version)]
struct Cli {
    /// JSON experiment config; the bundled default is used when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for report.json, timing.json and CSV point clouds.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides grid.radial_levels.
    #[arg(long, global = true)]
    grid_levels: Option<u32>,
    /// Print the JSON report to stdout instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Fixed points, type and multiplier of the selfmap.
    Classify,
    /// Predicted spectrum of the operator.
    Predict,
    /// Cocycle estimate of the spectral radius along the schedule.
    EstimateRadius,
    /// Boundedness verdict with refinement witnesses.
    CheckBounded,
    /// Invertibility and the inverse weight.
    CheckInvertible,
    /// Root cloud of a periodic elliptic operator.
    RootCloud,
    /// Eigenvalues of Taylor truncations (exploratory).
    TruncateEigs,
    /// Resolvent norms of truncations on the hyperbolic annulus (exploratory).
    ProbeConjecture,
    /// The reproduction suite; exit 4 if any check misses its tolerance.
    Verify,
}

fn run(cli: &Cli) -> Result<(Report, f64), CliError> {
    let mut cfg = ExperimentConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(levels) = cli.grid_levels {
        cfg.grid.radial_levels = levels;
    }
    if cli.out.is_some() {
        cfg.out = cli.out.clone();
    }
    let start = Instant::now();
    let report = match cli.command {
        Command::Classify => commands::classify(&cfg),
        Command::Predict => commands::predict(&cfg),
        Command::EstimateRadius => commands::estimate_radius(&cfg),
        Command::CheckBounded => commands::check_bounded(&cfg),
        Command::CheckInvertible => commands::check_invertible(&cfg),
        Command::RootCloud => commands::root_cloud(&cfg),
        Command::TruncateEigs => commands::truncate_eigs(&cfg),
        Command::ProbeConjecture => commands::probe_conjecture(&cfg),
        Command::Verify => verify::verify(&cfg),
    }?;
    let wall = start.elapsed().as_secs_f64();
    if let Some(dir) = &cfg.out {
        report.write(dir, wall)?;
    }
    Ok((report, wall))
}

fn main() -> ExitCode {
    // usage errors count as config errors (1), not clap's default 2
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((report, wall)) => {
            if cli.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            eprintln!("wall time: {wall:.3} s");
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_TOLERANCE as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
