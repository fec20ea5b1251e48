use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ebcm::{config, load_config, output, run_to_dir, CliError};
use ebcm_core::experiments::{oracle_curve, ExperimentConfig, ExperimentKind, Setup};
use ebcm_core::oracles::PairState;

#[derive(Parser)]
#[command(name = "ebcm", version, about = "Event-by-event corpuscular simulation of optics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write CSV outputs and a manifest.
    Run(RunArgs),
    /// List experiments with their default parameters.
    List,
    /// Write the wave-theory curve for an experiment without simulating.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Selection {
    /// Experiment name, using its figure defaults.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    experiment: Option<String>,
    /// Config file (one `[experiment]` section).
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    selection: Selection,
    /// Master seed; point i uses seed XOR i.
    #[arg(long, env = "EBCM_SEED")]
    seed: Option<u64>,
    /// Events (or pairs) per sweep point.
    #[arg(long)]
    events: Option<u64>,
    /// Memory parameter of the optical units, in [0, 1).
    #[arg(long)]
    gamma: Option<f64>,
    /// Memory parameter of the detectors, in [0, 1).
    #[arg(long = "gamma-hat")]
    gamma_hat: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StateArg {
    Singlet,
    Product,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    selection: Selection,
    /// EPRB pair state.
    #[arg(long, value_enum)]
    state: Option<StateArg>,
    /// Write `<name>_oracle.csv` here instead of printing to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn select(sel: &Selection) -> Result<ExperimentConfig, CliError> {
    match (&sel.experiment, &sel.config) {
        (_, Some(path)) => Ok(load_config(path)?),
        (Some(name), None) => {
            let kind = ExperimentKind::from_name(name).ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                CliError::Config(format!("unknown experiment `{name}`; choose one of {}", names.join(", ")))
            })?;
            Ok(ExperimentConfig::defaults(kind))
        }
        (None, None) => Err(CliError::Config("either --experiment or --config is required".into())),
    }
}

fn run(args: &RunArgs) -> Result<(), CliError> {
    let mut cfg = select(&args.selection)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(events) = args.events {
        cfg.events_per_point = events;
    }
    if let Some(g) = args.gamma {
        cfg.gamma = g;
    }
    if let Some(g) = args.gamma_hat {
        cfg.gamma_hat = g;
    }
    if args.threads == Some(0) {
        return Err(CliError::Config("--threads must be at least 1".into()));
    }
    cfg.validate()?;
    let manifest = run_to_dir(&cfg, &args.out, args.threads)?;
    for path in &manifest.outputs {
        println!("{path}");
    }
    Ok(())
}

fn list() -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    for kind in ExperimentKind::ALL {
        let cfg = ExperimentConfig::defaults(kind);
        writeln!(out, "{kind}: {}", kind.description())?;
        writeln!(out, "  points: {}, sweep: {}", cfg.points(), cfg.sweep_name())?;
        for (key, value) in config::section(&cfg) {
            writeln!(out, "  {key} = {value}")?;
        }
    }
    Ok(())
}

fn oracle(args: &OracleArgs) -> Result<(), CliError> {
    let mut cfg = select(&args.selection)?;
    if let Some(state) = args.state {
        let Setup::Eprb(s) = &mut cfg.setup else {
            return Err(CliError::Config("--state applies to the eprb experiment only".into()));
        };
        s.state = match state {
            StateArg::Singlet => PairState::Singlet,
            StateArg::Product => PairState::Product,
        };
    }
    cfg.validate()?;
    let table = output::oracle_table(&oracle_curve(&cfg)?);
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("{}_oracle.csv", cfg.kind().name()));
            output::write_table(std::fs::File::create(&path)?, &table)?;
            println!("{}", path.display());
        }
        None => output::write_table(std::io::stdout().lock(), &table)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::List => list(),
        Command::Oracle(args) => oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // A closed stdout (e.g. piping into `head`) is not a failure.
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ebcm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
