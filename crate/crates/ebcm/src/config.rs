//! Experiment configuration files.
//!
//! A config is a TOML document with exactly one table named after the
//! experiment. Keys left out take the figure defaults from
//! [`ExperimentConfig::defaults`]:
//!
//! ```toml
//! [mzi]
//! seed = 42
//! events = 10000
//! sweep = { start = 0.0, stop = 1.0, points = 21 }
//! polarizations = [0.0, 0.785398163397, 1.570796326795]
//! ```
//!
//! Angles are in radians, lengths in units of c/f and times in units of 1/f.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use ebcm_core::experiments::{ExperimentConfig, ExperimentKind, HbtMode, PlateSweep, Setup};
use ebcm_core::math::linspace;
use ebcm_core::oracles::PairState;
use toml::de::{DeTable, DeValue};
use toml::Spanned;

/// A configuration problem, located at a line of the input when possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Keys accepted in every experiment section.
const COMMON_KEYS: &[&str] = &["seed", "events", "gamma", "gamma_hat", "reset_detectors", "sweep"];

/// Experiment-specific keys.
pub fn setup_keys(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::Indivisibility => &["xi"],
        ExperimentKind::Interface => &["n1", "n2", "polarizations"],
        ExperimentKind::Plate => &["n1", "n2", "n3", "thickness", "theta", "polarizations", "sweep_variable"],
        ExperimentKind::TwoBeam => &["a", "d", "radius", "xi", "ports"],
        ExperimentKind::Mzi => &["polarizations", "arm_length"],
        ExperimentKind::Wheeler => &["xi", "theta_eom", "arm_length"],
        ExperimentKind::Eraser => &["theta0", "theta1", "theta2", "arm_length"],
        ExperimentKind::Tunneling => &["n", "theta", "polarizations"],
        ExperimentKind::Eprb => &["state", "t_eprb", "d", "windows", "alpha2", "eta1", "eta2"],
        ExperimentKind::Hbt => &["radius", "separation", "refresh_period", "xi", "ports", "mode", "window", "t_max", "h"],
    }
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError { line: None, message: format!("cannot read {}: {e}", path.display()) })?;
    parse_config(&text)
}

/// Parses config text into a validated [`ExperimentConfig`].
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let doc = DeTable::parse(text).map_err(|e| ConfigError {
        line: e.span().map(|s| line_of(text, s.start)),
        message: e.message().trim().to_string(),
    })?;
    let doc = doc.into_inner();
    let mut sections = doc.iter();
    let Some((name, body)) = sections.next() else {
        return Err(ConfigError { line: None, message: "no experiment section".into() });
    };
    let src = Source { text };
    if let Some((extra, _)) = sections.next() {
        return Err(src.err(extra.span(), format!("only one experiment section allowed, found another: [{}]", extra.get_ref())));
    }
    let kind = ExperimentKind::from_name(name.get_ref())
        .ok_or_else(|| src.err(name.span(), format!("unknown experiment `{}`", name.get_ref())))?;
    let DeValue::Table(table) = body.get_ref() else {
        return Err(src.err(name.span(), format!("`{}` must be a section, not a value", name.get_ref())));
    };
    let header_line = line_of(text, name.span().start);
    let cfg = src.build(kind, table)?;
    cfg.validate().map_err(|e| ConfigError { line: Some(header_line), message: e.to_string() })?;
    Ok(cfg)
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

struct Source<'a> {
    text: &'a str,
}

type Value<'i> = Spanned<DeValue<'i>>;

impl Source<'_> {
    fn err(&self, span: Range<usize>, message: impl Into<String>) -> ConfigError {
        ConfigError { line: Some(line_of(self.text, span.start)), message: message.into() }
    }

    fn build(&self, kind: ExperimentKind, table: &DeTable<'_>) -> Result<ExperimentConfig, ConfigError> {
        let allowed = setup_keys(kind);
        for (key, _) in table.iter() {
            let k = key.get_ref().as_ref();
            if !COMMON_KEYS.contains(&k) && !allowed.contains(&k) {
                let mut valid: Vec<&str> = COMMON_KEYS.to_vec();
                valid.extend_from_slice(allowed);
                return Err(self.err(key.span(), format!("unknown key `{k}` in [{kind}]; valid keys: {}", valid.join(", "))));
            }
        }
        let get = |k: &str| table.get(k);
        let mut cfg = ExperimentConfig::defaults(kind);
        if let Some(v) = get("seed") {
            cfg.seed = self.seed(v)?;
        }
        if let Some(v) = get("events") {
            cfg.events_per_point = self.unsigned(v, "events")?;
            if cfg.events_per_point == 0 {
                return Err(self.err(v.span(), "events must be at least 1"));
            }
        }
        if let Some(v) = get("gamma") {
            cfg.gamma = self.unit_interval(v, "gamma")?;
        }
        if let Some(v) = get("gamma_hat") {
            cfg.gamma_hat = self.unit_interval(v, "gamma_hat")?;
        }
        if let Some(v) = get("reset_detectors") {
            cfg.reset_detectors = self.boolean(v, "reset_detectors")?;
        }
        if let Some(v) = get("sweep") {
            cfg.sweep = self.sweep(v)?;
        }
        match &mut cfg.setup {
            Setup::Indivisibility(s) => {
                self.set_real(get("xi"), "xi", &mut s.xi)?;
            }
            Setup::Interface(s) => {
                self.set_positive(get("n1"), "n1", &mut s.n1)?;
                self.set_positive(get("n2"), "n2", &mut s.n2)?;
                self.set_list(get("polarizations"), "polarizations", &mut s.polarizations)?;
            }
            Setup::Plate(s) => {
                self.set_positive(get("n1"), "n1", &mut s.n1)?;
                self.set_positive(get("n2"), "n2", &mut s.n2)?;
                self.set_positive(get("n3"), "n3", &mut s.n3)?;
                self.set_real(get("thickness"), "thickness", &mut s.thickness)?;
                self.set_real(get("theta"), "theta", &mut s.theta)?;
                self.set_list(get("polarizations"), "polarizations", &mut s.polarizations)?;
                if let Some(v) = get("sweep_variable") {
                    s.sweep_variable = match self.string(v, "sweep_variable")? {
                        "angle" => PlateSweep::Angle,
                        "optical_thickness" => PlateSweep::OpticalThickness,
                        other => {
                            return Err(self.err(v.span(), format!("sweep_variable must be \"angle\" or \"optical_thickness\", got \"{other}\"")))
                        }
                    };
                }
            }
            Setup::TwoBeam(s) => {
                self.set_positive(get("a"), "a", &mut s.a)?;
                self.set_positive(get("d"), "d", &mut s.d)?;
                self.set_positive(get("radius"), "radius", &mut s.radius)?;
                self.set_real(get("xi"), "xi", &mut s.xi)?;
                self.set_count(get("ports"), "ports", &mut s.ports)?;
            }
            Setup::Mzi(s) => {
                self.set_list(get("polarizations"), "polarizations", &mut s.polarizations)?;
                self.set_real(get("arm_length"), "arm_length", &mut s.arm_length)?;
            }
            Setup::Wheeler(s) => {
                self.set_real(get("xi"), "xi", &mut s.xi)?;
                self.set_real(get("theta_eom"), "theta_eom", &mut s.theta_eom)?;
                self.set_real(get("arm_length"), "arm_length", &mut s.arm_length)?;
            }
            Setup::Eraser(s) => {
                self.set_real(get("theta0"), "theta0", &mut s.theta0)?;
                self.set_real(get("theta1"), "theta1", &mut s.theta1)?;
                self.set_real(get("theta2"), "theta2", &mut s.theta2)?;
                self.set_real(get("arm_length"), "arm_length", &mut s.arm_length)?;
            }
            Setup::Tunneling(s) => {
                self.set_positive(get("n"), "n", &mut s.n)?;
                self.set_real(get("theta"), "theta", &mut s.theta)?;
                self.set_list(get("polarizations"), "polarizations", &mut s.polarizations)?;
            }
            Setup::Eprb(s) => {
                if let Some(v) = get("state") {
                    s.state = match self.string(v, "state")? {
                        "singlet" => PairState::Singlet,
                        "product" => PairState::Product,
                        other => return Err(self.err(v.span(), format!("state must be \"singlet\" or \"product\", got \"{other}\""))),
                    };
                }
                self.set_positive(get("t_eprb"), "t_eprb", &mut s.t_eprb)?;
                self.set_real(get("d"), "d", &mut s.tag_exponent)?;
                self.set_list(get("windows"), "windows", &mut s.windows)?;
                if let Some(v) = get("windows") {
                    if s.windows.iter().any(|w| !(*w > 0.0)) {
                        return Err(self.err(v.span(), "coincidence windows must be positive"));
                    }
                }
                self.set_list(get("alpha2"), "alpha2", &mut s.alpha2)?;
                self.set_real(get("eta1"), "eta1", &mut s.eta1)?;
                self.set_real(get("eta2"), "eta2", &mut s.eta2)?;
            }
            Setup::Hbt(s) => {
                self.set_positive(get("radius"), "radius", &mut s.radius)?;
                self.set_positive(get("separation"), "separation", &mut s.separation)?;
                if let Some(v) = get("refresh_period") {
                    let n = self.unsigned(v, "refresh_period")?;
                    s.refresh_period = u32::try_from(n)
                        .ok()
                        .filter(|n| *n > 0)
                        .ok_or_else(|| self.err(v.span(), "refresh_period must be between 1 and 2^32 - 1"))?;
                }
                self.set_real(get("xi"), "xi", &mut s.xi)?;
                self.set_count(get("ports"), "ports", &mut s.ports)?;
                if let Some(v) = get("mode") {
                    s.mode = match self.string(v, "mode")? {
                        "base" => HbtMode::Base,
                        "delay" => HbtMode::Delay,
                        other => return Err(self.err(v.span(), format!("mode must be \"base\" or \"delay\", got \"{other}\""))),
                    };
                }
                self.set_positive(get("window"), "window", &mut s.window)?;
                self.set_positive(get("t_max"), "t_max", &mut s.t_max)?;
                self.set_real(get("h"), "h", &mut s.h)?;
            }
        }
        Ok(cfg)
    }

    fn real(&self, v: &Value<'_>, key: &str) -> Result<f64, ConfigError> {
        let x = match v.get_ref() {
            DeValue::Float(f) => f.as_str().replace('_', "").parse::<f64>().ok(),
            DeValue::Integer(i) => i64::from_str_radix(&i.as_str().replace('_', ""), i.radix()).ok().map(|n| n as f64),
            _ => return Err(self.err(v.span(), format!("`{key}` must be a number"))),
        };
        match x {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(self.err(v.span(), format!("`{key}` must be a finite number"))),
        }
    }

    fn unsigned(&self, v: &Value<'_>, key: &str) -> Result<u64, ConfigError> {
        match v.get_ref() {
            DeValue::Integer(i) => u64::from_str_radix(&i.as_str().replace('_', ""), i.radix())
                .map_err(|_| self.err(v.span(), format!("`{key}` must be a non-negative integer"))),
            _ => Err(self.err(v.span(), format!("`{key}` must be an integer"))),
        }
    }

    fn seed(&self, v: &Value<'_>) -> Result<u64, ConfigError> {
        match v.get_ref() {
            DeValue::Integer(i) => {
                let digits = i.as_str().replace('_', "");
                u64::from_str_radix(&digits, i.radix())
                    .or_else(|_| i64::from_str_radix(&digits, i.radix()).map(|n| n as u64))
                    .map_err(|_| self.err(v.span(), "`seed` must be a 64-bit integer"))
            }
            _ => Err(self.err(v.span(), "`seed` must be an integer")),
        }
    }

    fn boolean(&self, v: &Value<'_>, key: &str) -> Result<bool, ConfigError> {
        match v.get_ref() {
            DeValue::Boolean(b) => Ok(*b),
            _ => Err(self.err(v.span(), format!("`{key}` must be true or false"))),
        }
    }

    fn string<'v>(&self, v: &'v Value<'_>, key: &str) -> Result<&'v str, ConfigError> {
        match v.get_ref() {
            DeValue::String(s) => Ok(s.as_ref()),
            _ => Err(self.err(v.span(), format!("`{key}` must be a string"))),
        }
    }

    fn list(&self, v: &Value<'_>, key: &str) -> Result<Vec<f64>, ConfigError> {
        match v.get_ref() {
            DeValue::Array(items) => {
                if items.is_empty() {
                    return Err(self.err(v.span(), format!("`{key}` must not be empty")));
                }
                items.iter().map(|item| self.real(item, key)).collect()
            }
            _ => Err(self.err(v.span(), format!("`{key}` must be an array of numbers"))),
        }
    }

    fn unit_interval(&self, v: &Value<'_>, key: &str) -> Result<f64, ConfigError> {
        let x = self.real(v, key)?;
        if !(0.0..1.0).contains(&x) {
            return Err(self.err(v.span(), format!("`{key}` = {x} out of range: must satisfy 0 <= {key} < 1")));
        }
        Ok(x)
    }

    fn set_real(&self, v: Option<&Value<'_>>, key: &str, slot: &mut f64) -> Result<(), ConfigError> {
        if let Some(v) = v {
            *slot = self.real(v, key)?;
        }
        Ok(())
    }

    fn set_positive(&self, v: Option<&Value<'_>>, key: &str, slot: &mut f64) -> Result<(), ConfigError> {
        if let Some(v) = v {
            let x = self.real(v, key)?;
            if !(x > 0.0) {
                return Err(self.err(v.span(), format!("`{key}` = {x} out of range: must be positive")));
            }
            *slot = x;
        }
        Ok(())
    }

    fn set_count(&self, v: Option<&Value<'_>>, key: &str, slot: &mut usize) -> Result<(), ConfigError> {
        if let Some(v) = v {
            let n = self.unsigned(v, key)?;
            if n == 0 {
                return Err(self.err(v.span(), format!("`{key}` must be at least 1")));
            }
            *slot = usize::try_from(n).map_err(|_| self.err(v.span(), format!("`{key}` is too large")))?;
        }
        Ok(())
    }

    fn set_list(&self, v: Option<&Value<'_>>, key: &str, slot: &mut Vec<f64>) -> Result<(), ConfigError> {
        if let Some(v) = v {
            *slot = self.list(v, key)?;
        }
        Ok(())
    }

    /// Either an explicit array or `{ start, stop, points }`.
    fn sweep(&self, v: &Value<'_>) -> Result<Vec<f64>, ConfigError> {
        match v.get_ref() {
            DeValue::Array(_) => self.list(v, "sweep"),
            DeValue::Table(t) => {
                for (key, _) in t.iter() {
                    if !["start", "stop", "points"].contains(&key.get_ref().as_ref()) {
                        return Err(self.err(key.span(), format!("unknown key `{}` in sweep; valid keys: start, stop, points", key.get_ref())));
                    }
                }
                let field = |k: &str| t.get(k).ok_or_else(|| self.err(v.span(), format!("sweep range needs `{k}`")));
                let start = self.real(field("start")?, "start")?;
                let stop = self.real(field("stop")?, "stop")?;
                let points_value = field("points")?;
                let points = self.unsigned(points_value, "points")?;
                if points == 0 {
                    return Err(self.err(points_value.span(), "sweep needs at least one point"));
                }
                Ok(linspace(start, stop, points as usize))
            }
            _ => Err(self.err(v.span(), "`sweep` must be an array or a { start, stop, points } table")),
        }
    }
}

/// Full config as a TOML document that [`parse_config`] reads back to the same value.
pub fn to_toml(cfg: &ExperimentConfig) -> String {
    let mut outer = toml::Table::new();
    outer.insert(cfg.kind().name().to_string(), toml::Value::Table(section(cfg)));
    outer.to_string()
}

/// Key/value pairs of the experiment section.
pub fn section(cfg: &ExperimentConfig) -> toml::Table {
    use toml::Value;
    let real = Value::Float;
    let list = |v: &[f64]| Value::Array(v.iter().map(|x| Value::Float(*x)).collect());
    let int = |n: u64| Value::Integer(n as i64);
    let text = |s: &str| Value::String(s.to_string());
    let mut t = toml::Table::new();
    // Seeds above i64::MAX do not fit a TOML integer; they are echoed as the
    // two's-complement value, which the reader maps back.
    t.insert("seed".into(), Value::Integer(cfg.seed as i64));
    t.insert("events".into(), int(cfg.events_per_point));
    t.insert("gamma".into(), real(cfg.gamma));
    t.insert("gamma_hat".into(), real(cfg.gamma_hat));
    t.insert("reset_detectors".into(), Value::Boolean(cfg.reset_detectors));
    t.insert("sweep".into(), list(&cfg.sweep));
    let mut put = |k: &str, v: Value| {
        t.insert(k.to_string(), v);
    };
    match &cfg.setup {
        Setup::Indivisibility(s) => put("xi", real(s.xi)),
        Setup::Interface(s) => {
            put("n1", real(s.n1));
            put("n2", real(s.n2));
            put("polarizations", list(&s.polarizations));
        }
        Setup::Plate(s) => {
            put("n1", real(s.n1));
            put("n2", real(s.n2));
            put("n3", real(s.n3));
            put("thickness", real(s.thickness));
            put("theta", real(s.theta));
            put("polarizations", list(&s.polarizations));
            let v = match s.sweep_variable {
                PlateSweep::Angle => "angle",
                PlateSweep::OpticalThickness => "optical_thickness",
            };
            put("sweep_variable", text(v));
        }
        Setup::TwoBeam(s) => {
            put("a", real(s.a));
            put("d", real(s.d));
            put("radius", real(s.radius));
            put("xi", real(s.xi));
            put("ports", int(s.ports as u64));
        }
        Setup::Mzi(s) => {
            put("polarizations", list(&s.polarizations));
            put("arm_length", real(s.arm_length));
        }
        Setup::Wheeler(s) => {
            put("xi", real(s.xi));
            put("theta_eom", real(s.theta_eom));
            put("arm_length", real(s.arm_length));
        }
        Setup::Eraser(s) => {
            put("theta0", real(s.theta0));
            put("theta1", real(s.theta1));
            put("theta2", real(s.theta2));
            put("arm_length", real(s.arm_length));
        }
        Setup::Tunneling(s) => {
            put("n", real(s.n));
            put("theta", real(s.theta));
            put("polarizations", list(&s.polarizations));
        }
        Setup::Eprb(s) => {
            put("state", text(match s.state {
                PairState::Singlet => "singlet",
                PairState::Product => "product",
            }));
            put("t_eprb", real(s.t_eprb));
            put("d", real(s.tag_exponent));
            put("windows", list(&s.windows));
            put("alpha2", list(&s.alpha2));
            put("eta1", real(s.eta1));
            put("eta2", real(s.eta2));
        }
        Setup::Hbt(s) => {
            put("radius", real(s.radius));
            put("separation", real(s.separation));
            put("refresh_period", int(u64::from(s.refresh_period)));
            put("xi", real(s.xi));
            put("ports", int(s.ports as u64));
            put("mode", text(match s.mode {
                HbtMode::Base => "base",
                HbtMode::Delay => "delay",
            }));
            put("window", real(s.window));
            put("t_max", real(s.t_max));
            put("h", real(s.h));
        }
    }
    t
}
