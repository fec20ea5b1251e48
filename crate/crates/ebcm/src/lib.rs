//! File formats, configuration and the parallel runner around `ebcm-core`.

pub mod config;
pub mod manifest;
pub mod output;
pub mod report;
pub mod runner;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use ebcm_core::experiments::{oracle_curve, split_stations, summary_table, ExperimentConfig, ExperimentKind};

pub use config::{load_config, parse_config, ConfigError};
pub use manifest::RunManifest;
pub use runner::run_points;

/// Process exit code for configuration errors.
pub const EXIT_CONFIG: i32 = 2;
/// Process exit code for runtime aborts.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("run aborted: {0}")]
    Runtime(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            _ => EXIT_RUNTIME,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<ebcm_core::Error> for CliError {
    fn from(e: ebcm_core::Error) -> Self {
        match e {
            ebcm_core::Error::Config(m) => CliError::Config(m),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Runs `cfg`, writes every output file into `out_dir` and returns the manifest.
///
/// Files, prefixed with the experiment name: `<name>.csv` (per-point summary
/// with the oracle alongside), `<name>_oracle.csv`, `<name>_analysis.csv`,
/// event records when the experiment produces them (one file per station for
/// EPRB), `<name>_config.toml` and `<name>_manifest.toml`.
pub fn run_to_dir(cfg: &ExperimentConfig, out_dir: &Path, threads: Option<usize>) -> Result<RunManifest, CliError> {
    let started = manifest::unix_now();
    let points = run_points(cfg, threads)?;
    std::fs::create_dir_all(out_dir)?;
    let name = cfg.kind().name();
    let path = |suffix: &str| out_dir.join(format!("{name}{suffix}"));
    let mut written: Vec<PathBuf> = Vec::new();

    let summary = summary_table(cfg, &points)?;
    output::write_table(create(&path(".csv"))?, &summary)?;
    written.push(path(".csv"));

    output::write_table(create(&path("_oracle.csv"))?, &output::oracle_table(&oracle_curve(cfg)?))?;
    written.push(path("_oracle.csv"));

    output::write_table(create(&path("_analysis.csv"))?, &report::analysis_table(cfg, &points, &summary)?)?;
    written.push(path("_analysis.csv"));

    let records: Vec<_> = points.iter().flat_map(|p| p.records.iter().copied()).collect();
    if cfg.kind() == ExperimentKind::Eprb {
        let (one, two) = split_stations(&records);
        for (suffix, recs) in [("_station1_events.csv", one), ("_station2_events.csv", two)] {
            output::write_records(create(&path(suffix))?, &recs)?;
            written.push(path(suffix));
        }
    } else if !records.is_empty() {
        output::write_records(create(&path("_events.csv"))?, &records)?;
        written.push(path("_events.csv"));
    }

    std::fs::write(path("_config.toml"), config::to_toml(cfg))?;
    written.push(path("_config.toml"));

    let mut manifest = RunManifest::new(cfg, &points, started);
    written.push(path("_manifest.toml"));
    manifest.outputs = written.iter().map(|p| p.display().to_string()).collect();
    std::fs::write(path("_manifest.toml"), manifest.to_toml())?;
    Ok(manifest)
}
