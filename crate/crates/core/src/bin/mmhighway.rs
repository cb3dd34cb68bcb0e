//! Command line driver for theory curves, simulations and validation sweeps.
//!
//! Configs hold angles in degrees and gains in dB; they are converted to
//! radians and linear units when the scenario is built.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mmhighway::harness::{emit_csv, load_config, run_experiment, write_csv, write_trace, Curve, Experiment};
use mmhighway::mcsim::simulate;
use mmhighway::Error;

#[derive(Parser)]
#[command(
    name = "mmhighway",
    version,
    about = "mmWave highway coverage: theory, simulation and validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytical curves only.
    Theory(RunArgs),
    /// Monte Carlo curves only.
    Simulate(RunArgs),
    /// Theory and simulation with MSE gates; exits 1 if a gate is exceeded.
    Validate(RunArgs),
    /// Runs the sweep with exactly the curves listed in the config.
    Sweep(RunArgs),
    /// Prints the resolved config as TOML.
    ConfigEmit(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in experiment, e.g. paper_defaults.
    #[arg(long)]
    preset: Option<String>,
    /// Overrides the simulation seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the number of independent trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Writes the per-snapshot SINR trace of the base point to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

enum Failure {
    Gate,
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn resolve(args: &RunArgs) -> Result<Experiment, Error> {
    let mut e = match (&args.config, &args.preset) {
        (Some(path), _) => load_config(path)?,
        (None, Some(name)) => Experiment::preset(name)?,
        (None, None) => Experiment::paper_defaults(),
    };
    if let Some(seed) = args.seed {
        e.sim.seed = seed;
    }
    if let Some(trials) = args.trials {
        e.sim.n_trials = trials;
    }
    e.validate()?;
    Ok(e)
}

fn counterpart(c: Curve, sim: bool) -> Option<Curve> {
    use Curve::*;
    match (c, sim) {
        (PtTheory | PtSim, false) => Some(PtTheory),
        (RcTheory | RcSim, false) => Some(RcTheory),
        (PlTheory | PlSim, false) => Some(PlTheory),
        (PtTheory | PtSim, true) => Some(PtSim),
        (RcTheory | RcSim, true) => Some(RcSim),
        (PlTheory | PlSim, true) => Some(PlSim),
        (Mse, _) => None,
    }
}

/// Curve set for a subcommand derived from the configured curves.
fn select_curves(requested: &[Curve], theory: bool, sim: bool) -> Vec<Curve> {
    let mut out = Vec::new();
    for &c in requested {
        for (wanted, is_sim) in [(theory, false), (sim, true)] {
            if let Some(k) = counterpart(c, is_sim).filter(|_| wanted) {
                if !out.contains(&k) {
                    out.push(k);
                }
            }
        }
    }
    if out.is_empty() {
        if theory {
            out.push(Curve::PtTheory);
        }
        if sim {
            out.push(Curve::PtSim);
        }
    }
    if theory && sim {
        out.push(Curve::Mse);
    }
    out
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let (args, curves) = match &cli.command {
        Command::ConfigEmit(args) => {
            let e = resolve(args)?;
            output(&args.out)?
                .write_all(e.to_toml_string()?.as_bytes())
                .map_err(Error::from)?;
            return Ok(());
        }
        Command::Theory(a) => (a, Some((true, false))),
        Command::Simulate(a) => (a, Some((false, true))),
        Command::Validate(a) => (a, Some((true, true))),
        Command::Sweep(a) => (a, None),
    };
    let mut e = resolve(args)?;
    if let Some((theory, sim)) = curves {
        e.sweep.curves = select_curves(&e.sweep.curves, theory, sim);
    }
    let table = run_experiment(&e)?;
    for f in &table.failures {
        eprintln!("point failed: {f}");
    }
    match &args.out {
        Some(p) => emit_csv(&table, p)?,
        None => write_csv(&table, std::io::stdout().lock())?,
    }
    if let Some(path) = &args.trace {
        let out = simulate(&e.scenario()?, &e.sim_config())?;
        write_trace(&out.records, std::fs::File::create(path).map_err(Error::from)?)?;
    }
    let gated = matches!(cli.command, Command::Validate(_) | Command::Sweep(_));
    if let (true, Some(gate)) = (gated, e.sweep.mse_gate) {
        let failed = table.gate_failures(gate);
        for (name, v) in &failed {
            eprintln!("gate exceeded: {name} = {v} > {gate}");
        }
        if !failed.is_empty() {
            return Err(Failure::Gate);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Gate) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
