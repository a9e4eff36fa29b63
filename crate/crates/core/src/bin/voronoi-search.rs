use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use voronoi_search::harness::{emit_outputs, parse_config, run_single, run_sweep, ExperimentConfig};
use voronoi_search::{Error, StrategyKind};

/// Multi-robot search simulations over a Voronoi-partitioned domain.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the first grid point of a configuration once.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `[output] dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// SDS, CDS, VGS, TGS or RS.
        #[arg(long)]
        strategy: Option<StrategyKind>,
    },
    /// Run every (N, R, U) x strategy x seed cell of a configuration.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &PathBuf, out: Option<PathBuf>) -> Result<ExperimentConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut config = parse_config(&text)?;
    if let Some(out) = out {
        config.output_dir = out;
    }
    Ok(config)
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            strategy,
        } => {
            let config = load(&config, out)?;
            let cell = run_single(&config, seed, strategy)?;
            emit_outputs(std::slice::from_ref(&cell), &config.output_dir)?;
            if let Ok(r) = &cell.result {
                println!(
                    "{} {} seed {}: {} steps, {} searches, {} (final average uncertainty {})",
                    cell.label(),
                    cell.strategy,
                    cell.seed,
                    r.steps_elapsed,
                    r.searches_performed,
                    r.terminated_by.name(),
                    voronoi_search::harness::format_float(r.final_uncertainty()),
                );
            }
        }
        Command::Sweep { config, out } => {
            let config = load(&config, out)?;
            let cells = run_sweep(&config);
            for cell in &cells {
                if let Err(message) = &cell.result {
                    eprintln!("cell {} {} seed {} failed: {message}", cell.label(), cell.strategy, cell.seed);
                }
            }
            emit_outputs(&cells, &config.output_dir)?;
            println!("{} cells written to {}", cells.len(), config.output_dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
