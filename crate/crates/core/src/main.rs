use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dyadic_stiffness::commands::{cmd_run_experiment, cmd_run_trial, TrialRequest};
use dyadic_stiffness::config::{parse_config, ExperimentConfig};
use dyadic_stiffness::experiment::Axis;
use dyadic_stiffness::Result;

/// Exit status when some trials failed but outputs were written.
const EXIT_TRIALS_FAILED: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "dyadic-stiffness", version, about = "Delay-compensated novice stiffness estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file; omitted keys take their defaults.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's output_dir).
    #[arg(long, value_name = "DIR", env = "DYADIC_STIFFNESS_OUT")]
    out: Option<PathBuf>,
    /// Base seed (overrides base_seed).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full factorial experiment.
    RunExperiment {
        #[command(flatten)]
        common: Common,
        /// Worker threads (default: one per core).
        #[arg(long)]
        jobs: Option<usize>,
        /// Comma-separated one-way delays in seconds.
        #[arg(long, value_delimiter = ',')]
        delays: Option<Vec<f64>>,
        /// Comma-separated novice stiffness levels in N/m.
        #[arg(long, value_delimiter = ',')]
        stiffness: Option<Vec<f64>>,
        /// Comma-separated axes (x, y).
        #[arg(long, value_delimiter = ',')]
        axes: Option<Vec<Axis>>,
        /// Trials per (delay, stiffness, axis) cell.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Simulate one trial and dump its time series.
    RunTrial {
        #[command(flatten)]
        common: Common,
        /// One-way delay, s.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Novice stiffness, N/m.
        #[arg(long, default_value_t = 60.0)]
        k0: f64,
        #[arg(long, default_value = "x")]
        axis: Axis,
        /// Excitation amplitude override, m.
        #[arg(long)]
        amplitude: Option<f64>,
        /// Excitation frequency override, rad/s.
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Print the fully resolved configuration as TOML.
    PrintConfig {
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => parse_config(&std::fs::read_to_string(p)?),
        None => Ok(ExperimentConfig::default()),
    }
}

fn out_dir(common: &Common, config: &ExperimentConfig) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from(&config.output_dir))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::RunExperiment { common, jobs, delays, stiffness, axes, trials } => {
            let mut config = load_config(common.config.as_deref())?;
            if let Some(seed) = common.seed {
                config.base_seed = seed;
            }
            if let Some(d) = delays {
                config.factors.delays_s = d;
            }
            if let Some(k) = stiffness {
                config.factors.stiffness_levels = k;
            }
            if let Some(a) = axes {
                config.factors.axes = a;
            }
            if let Some(n) = trials {
                config.factors.trials_per_cell = n;
            }
            let dir = out_dir(&common, &config);
            let run = cmd_run_experiment(&config, &dir, jobs)?;
            let failed = run.n_failed();
            eprintln!(
                "{} trials ({} failed), {} summary rows written to {}",
                run.records.len(),
                failed,
                run.summary.len(),
                dir.display()
            );
            eprintln!("trials.csv  sha256 {}", run.trials_sha256);
            eprintln!("summary.csv sha256 {}", run.summary_sha256);
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_TRIALS_FAILED) })
        }
        Command::RunTrial { common, delta, k0, axis, amplitude, omega } => {
            let mut config = load_config(common.config.as_deref())?;
            if let Some(a) = amplitude {
                config.controller.amplitude = a;
            }
            if let Some(w) = omega {
                config.controller.omega = w;
            }
            let request = TrialRequest {
                delay: delta,
                novice_stiffness: k0,
                axis,
                seed: common.seed.unwrap_or(config.base_seed),
            };
            let dir = out_dir(&common, &config);
            let run = cmd_run_trial(&config, request, &dir)?;
            eprintln!("{} samples written to {}", run.samples, dir.display());
            match run.record.estimates() {
                Some(e) => {
                    eprintln!(
                        "k_ref {:.4}  naive {:.4}  ols {:.4}  nwls {:.4}",
                        e.reference.stiffness, e.naive.stiffness, e.ols.stiffness, e.nwls.stiffness
                    );
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    eprintln!("trial failed: {}", run.record.failure_reason().unwrap_or("unknown"));
                    Ok(ExitCode::from(EXIT_TRIALS_FAILED))
                }
            }
        }
        Command::PrintConfig { config } => {
            print!("{}", load_config(config.as_deref())?.to_toml());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
