//! Run manifest: everything needed to reproduce a run.

use std::time::{SystemTime, UNIX_EPOCH};

use ebcm_core::experiments::{ExperimentConfig, PointOutput};

#[derive(Debug, Clone, PartialEq)]
pub struct PointTotal {
    pub index: usize,
    pub sweep_value: f64,
    pub variant: f64,
    pub emitted: u64,
    pub clicks: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub rng_algorithm: String,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub started: f64,
    pub finished: f64,
    pub points: Vec<PointTotal>,
    pub outputs: Vec<String>,
    pub version: String,
}

pub fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

impl RunManifest {
    pub fn new(config: &ExperimentConfig, points: &[PointOutput], started: f64) -> Self {
        Self {
            config: config.clone(),
            rng_algorithm: ebcm_core::RNG_ALGORITHM.to_string(),
            seed: config.seed,
            started,
            finished: unix_now(),
            points: points
                .iter()
                .map(|p| PointTotal {
                    index: p.index,
                    sweep_value: p.sweep_value,
                    variant: p.variant,
                    emitted: p.emitted,
                    clicks: p.counts.iter().sum(),
                })
                .collect(),
            outputs: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    /// TOML rendering. The `[config.<experiment>]` table is a valid config
    /// section on its own.
    pub fn to_toml(&self) -> String {
        use toml::Value;
        let mut run = toml::Table::new();
        run.insert("experiment".into(), Value::String(self.config.kind().name().into()));
        run.insert("version".into(), Value::String(self.version.clone()));
        run.insert("rng_algorithm".into(), Value::String(self.rng_algorithm.clone()));
        run.insert("seed".into(), Value::String(self.seed.to_string()));
        run.insert("seed_derivation".into(), Value::String("seed XOR point index".into()));
        run.insert("started_unix".into(), Value::Float(self.started));
        run.insert("finished_unix".into(), Value::Float(self.finished));
        run.insert("outputs".into(), Value::Array(self.outputs.iter().cloned().map(Value::String).collect()));
        let points = self
            .points
            .iter()
            .map(|p| {
                let mut t = toml::Table::new();
                t.insert("index".into(), Value::Integer(p.index as i64));
                t.insert("sweep_value".into(), Value::Float(p.sweep_value));
                t.insert("variant".into(), Value::Float(p.variant));
                t.insert("emitted".into(), Value::Integer(p.emitted as i64));
                t.insert("clicks".into(), Value::Integer(p.clicks as i64));
                Value::Table(t)
            })
            .collect();
        let mut config = toml::Table::new();
        config.insert(self.config.kind().name().into(), Value::Table(crate::config::section(&self.config)));
        let mut doc = toml::Table::new();
        doc.insert("run".into(), Value::Table(run));
        doc.insert("config".into(), Value::Table(config));
        doc.insert("points".into(), Value::Array(points));
        doc.to_string()
    }
}
