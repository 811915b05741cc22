use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hybridsim::harness::{run_sweep, trace_design, SweepSpec};

#[derive(Parser)]
#[command(name = "hybridsim", version, about = "ADMM hybrid precoding Monte Carlo simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write CSV rows plus a `.meta.json` summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Dump the per-iteration trace of one precoder design.
    Trace {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a config without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> hybridsim::Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            runs,
            seed,
            workers,
        } => {
            let mut spec = SweepSpec::from_path(&config)?;
            if let Some(r) = runs {
                spec.runs = r;
            }
            if let Some(s) = seed {
                spec.base_seed = s;
            }
            let report = run_sweep(&spec, &out, workers)?;
            for p in &report.metadata.points {
                println!(
                    "n_rf={:<3} snr_db={:>6.1} {:<16} mean={:.4} se={:.4} errors={}",
                    p.n_rf,
                    p.snr_db,
                    p.method.as_str(),
                    p.mean,
                    p.std_error,
                    p.errors
                );
            }
            println!("wrote {} rows to {}", report.records.len(), report.csv_path.display());
        }
        Command::Trace { config, out } => {
            let spec = SweepSpec::from_path(&config)?;
            let design = trace_design(&spec)?;
            std::fs::write(&out, design.trace_csv())?;
            println!("{} iterations, final objective {:.6e}", design.iterations, design.objective);
        }
        Command::Validate { config } => {
            let spec = SweepSpec::from_path(&config)?;
            spec.validate()?;
            println!("ok: {} scenario, {} runs", spec.scenario.as_str(), spec.runs);
        }
    }
    Ok(())
}
