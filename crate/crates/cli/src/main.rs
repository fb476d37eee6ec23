//! `qswitch`: experiment runner for measurement-model simulations.
//!
//! Subcommands: `run` (config-driven experiment), `sweep` (parameter
//! sweep with margin table and plot), `audit` (bound evaluation over
//! supplied tuples), `probe` (finite no-go falsification trials),
//! `chain` (spin-chain locality scan).
//!
//! Exit codes: 0 success, 1 config error, 2 validation error,
//! 3 numerical-tolerance failure.

mod config;
mod experiments;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;
use experiments::{CliError, Overrides};

#[derive(Parser)]
#[command(name = "qswitch", version, about = "measurement-model experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured experiment and write its artifacts.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "grid-n")]
        grid_n: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        quiet: bool,
    },
    /// Sweep a declared parameter and tabulate the trade-off margins.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "grid-n")]
        grid_n: Option<usize>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        quiet: bool,
    },
    /// Evaluate every applicable bound on externally supplied tuples.
    Audit {
        values: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        quiet: bool,
    },
    /// Finite-dimensional no-go falsification trials.
    Probe {
        #[arg(long = "d-system", default_value_t = 2)]
        d_system: usize,
        #[arg(long = "d-apparatus", default_value_t = 2)]
        d_apparatus: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        quiet: bool,
    },
    /// Spin-chain locality scan with boxed-bound margins.
    Chain {
        /// Optional chain config; flags override its values.
        config: Option<PathBuf>,
        #[arg(long)]
        sites: Option<usize>,
        #[arg(long)]
        coupling: Option<f64>,
        #[arg(long)]
        time: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        quiet: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run {
            config,
            out,
            seed,
            grid_n,
            dt,
            quiet,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
            let cfg = Config::parse(&text)?;
            let ov = Overrides { seed, grid_n, dt };
            let artifacts = experiments::run_experiment(&cfg, &ov)?;
            artifacts
                .write_all(&out)
                .map_err(|e| CliError::Validation(format!("cannot write artifacts: {e}")))?;
            if !quiet {
                println!(
                    "wrote {} artifacts to {}",
                    artifacts.files.len(),
                    out.display()
                );
            }
            Ok(())
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
            seed,
            grid_n,
            dt,
            quiet,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config.display())))?;
            let cfg = Config::parse(&text)?;
            let parsed: Vec<f64> = values
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Config(format!("bad sweep value `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let ov = Overrides { seed, grid_n, dt };
            let artifacts = experiments::run_sweep(&cfg, &ov, &param, &parsed)?;
            artifacts
                .write_all(&out)
                .map_err(|e| CliError::Validation(format!("cannot write artifacts: {e}")))?;
            if !quiet {
                println!(
                    "wrote {} artifacts to {}",
                    artifacts.files.len(),
                    out.display()
                );
            }
            Ok(())
        }
        Command::Audit { values, out, quiet } => {
            let text = std::fs::read_to_string(&values)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", values.display())))?;
            let artifacts = experiments::run_audit(&text)?;
            artifacts
                .write_all(&out)
                .map_err(|e| CliError::Validation(format!("cannot write artifacts: {e}")))?;
            if !quiet {
                println!(
                    "wrote {} artifacts to {}",
                    artifacts.files.len(),
                    out.display()
                );
            }
            Ok(())
        }
        Command::Probe {
            d_system,
            d_apparatus,
            trials,
            seed,
            out,
            quiet,
        } => {
            let (artifacts, counterexamples) =
                experiments::run_probe(d_system, d_apparatus, trials, seed)?;
            artifacts
                .write_all(&out)
                .map_err(|e| CliError::Validation(format!("cannot write artifacts: {e}")))?;
            if !quiet {
                println!("{trials} trials, {counterexamples} counterexamples");
            }
            if counterexamples > 0 {
                return Err(CliError::Tolerance(format!(
                    "{counterexamples} certified trials kept a nonvanishing interaction"
                )));
            }
            Ok(())
        }
        Command::Chain {
            config,
            sites,
            coupling,
            time,
            seed,
            out,
            quiet,
        } => {
            let cfg = match &config {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| {
                        CliError::Config(format!("cannot read {}: {e}", path.display()))
                    })?;
                    let cfg = Config::parse(&text)?;
                    cfg.check_known(&[
                        "units",
                        "chain.sites",
                        "chain.coupling",
                        "chain.time",
                        "seed",
                    ])?;
                    Some(cfg)
                }
                None => None,
            };
            let from_cfg_u64 = |key: &str| -> Result<Option<u64>, CliError> {
                Ok(match &cfg {
                    Some(c) => c.get_u64(key)?,
                    None => None,
                })
            };
            let from_cfg_f64 = |key: &str| -> Result<Option<f64>, CliError> {
                Ok(match &cfg {
                    Some(c) => c.get_f64(key)?,
                    None => None,
                })
            };
            let sites = sites
                .or(from_cfg_u64("chain.sites")?.map(|v| v as usize))
                .unwrap_or(8);
            let coupling = coupling.or(from_cfg_f64("chain.coupling")?).unwrap_or(1.0);
            let time = time.or(from_cfg_f64("chain.time")?).unwrap_or(1.0);
            let seed = seed.or(from_cfg_u64("seed")?).unwrap_or(0);
            let artifacts = experiments::run_chain(sites, coupling, time, seed)?;
            artifacts
                .write_all(&out)
                .map_err(|e| CliError::Validation(format!("cannot write artifacts: {e}")))?;
            if !quiet {
                println!(
                    "wrote {} artifacts to {}",
                    artifacts.files.len(),
                    out.display()
                );
            }
            Ok(())
        }
    }
}
