use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use mrp_smc_sim::{emit_plots, load_scenario, run_simulation, sweep, verify, write_csv, write_sweep_csv, SweepConfig};

#[derive(Parser)]
#[command(name = "mrp-smc-sim", version, about = "Sliding-mode MRP attitude control simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the closed loop and write telemetry (and optionally SVG plots).
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        plots: Option<PathBuf>,
    },
    /// Run the stability checks; exit status 0 on pass, 1 on failure.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Monte Carlo sweep over initial conditions around the scenario's nominal start.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long = "omega-range")]
        omega_range: f64,
        #[arg(long = "sigma-range")]
        sigma_range: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate { config, out, plots } => {
            let scenario = load_scenario(&config)?;
            let start = Instant::now();
            let records = run_simulation(&scenario).context("simulation failed")?;
            write_csv(&records, &out).with_context(|| format!("writing {}", out.display()))?;
            if let Some(dir) = plots {
                emit_plots(&records, &dir).with_context(|| format!("writing plots to {}", dir.display()))?;
            }
            let last = records.last().expect("simulation yields samples");
            println!(
                "{} samples to t = {} s in {:.2?}; |sigma_db| = {:.3e}, |omega| = {:.3e}, |xi| = {:.3e}",
                records.len(),
                last.t,
                start.elapsed(),
                last.sigma_db.norm(),
                last.omega.norm(),
                last.xi.norm()
            );
            Ok(true)
        }
        Command::Verify { config } => {
            let scenario = load_scenario(&config)?;
            let report = verify(&scenario);
            println!("{report}");
            Ok(report.passed())
        }
        Command::Sweep {
            config,
            samples,
            seed,
            omega_range,
            sigma_range,
            out,
        } => {
            let scenario = load_scenario(&config)?;
            let cfg = SweepConfig {
                samples,
                seed,
                omega_range,
                sigma_range,
            };
            let summary = sweep(&scenario, &cfg)?;
            write_sweep_csv(&summary, &out).with_context(|| format!("writing {}", out.display()))?;
            println!(
                "{}/{} runs converged, {} integrator failures, worst settling time {}",
                summary.converged(),
                summary.rows.len(),
                summary.failed(),
                summary
                    .worst_settling_time()
                    .map_or_else(|| "n/a".to_string(), |t| format!("{t} s"))
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
