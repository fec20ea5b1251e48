//! Experiment networks and the one-messenger-at-a-time event loop.
//!
//! Every experiment is a list of independent sweep points. Point `i` runs in
//! its own network with a generator seeded from `seed ^ i`, so points can be
//! executed in any order or in parallel with identical results.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use rand::SeedableRng;

use crate::error::{config, Error, Result};
use crate::math::linspace;
use crate::optics::DetectorUnit;
use crate::oracles::{OracleCurve, PairState};

mod eprb;
mod eraser;
mod hbt;
mod indivisibility;
mod interface;
mod mzi;
mod plate;
mod tunneling;
mod two_beam;
mod wheeler;

pub use eprb::{eprb_analysis, eprb_correlations, split_stations, EprbCorrelation};
pub use hbt::hbt_delay_difference;
pub use two_beam::{two_beam_arc_half_width, DETECTORS as TWO_BEAM_DETECTORS};

/// The experiment networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Indivisibility,
    Interface,
    Plate,
    TwoBeam,
    Mzi,
    Wheeler,
    Eraser,
    Tunneling,
    Eprb,
    Hbt,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::Indivisibility,
        ExperimentKind::Interface,
        ExperimentKind::Plate,
        ExperimentKind::TwoBeam,
        ExperimentKind::Mzi,
        ExperimentKind::Wheeler,
        ExperimentKind::Eraser,
        ExperimentKind::Tunneling,
        ExperimentKind::Eprb,
        ExperimentKind::Hbt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Indivisibility => "indivisibility",
            ExperimentKind::Interface => "interface",
            ExperimentKind::Plate => "plate",
            ExperimentKind::TwoBeam => "two_beam",
            ExperimentKind::Mzi => "mzi",
            ExperimentKind::Wheeler => "wheeler",
            ExperimentKind::Eraser => "eraser",
            ExperimentKind::Tunneling => "tunneling",
            ExperimentKind::Eprb => "eprb",
            ExperimentKind::Hbt => "hbt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentKind::Indivisibility => "single beam splitter with two detectors; counts coincidences",
            ExperimentKind::Interface => "reflectivity of a dielectric interface versus incidence angle",
            ExperimentKind::Plate => "plane-parallel plate with multiple internal reflections",
            ExperimentKind::TwoBeam => "two-slit source and 181 detectors on a semicircle",
            ExperimentKind::Mzi => "Mach-Zehnder interferometer versus arm delay",
            ExperimentKind::Wheeler => "Wheeler delayed choice with a randomly switched EOM",
            ExperimentKind::Eraser => "quantum eraser: MZI with wave plates and a polarizer",
            ExperimentKind::Tunneling => "frustrated total internal reflection versus gap width",
            ExperimentKind::Eprb => "EPR-Bohm pairs with time-tagged detection at two stations",
            ExperimentKind::Hbt => "Hanbury Brown-Twiss intensity interferometry",
        }
    }
}

impl core::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// What the plate sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlateSweep {
    /// Incidence angle in radians at fixed thickness.
    Angle,
    /// Optical thickness `n₂·h` (in wavelengths) at fixed angle.
    OpticalThickness,
}

/// How HBT coincidences are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbtMode {
    /// Both detectors click within the same pair step.
    Base,
    /// Clicks carry the intensity-dependent delay and are windowed.
    Delay,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndivisibilitySetup {
    pub xi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceSetup {
    pub n1: f64,
    pub n2: f64,
    pub polarizations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlateSetup {
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
    /// Geometric thickness in units of c/f, used by angle sweeps.
    pub thickness: f64,
    /// Incidence angle, used by thickness sweeps.
    pub theta: f64,
    pub polarizations: Vec<f64>,
    pub sweep_variable: PlateSweep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoBeamSetup {
    pub a: f64,
    pub d: f64,
    pub radius: f64,
    pub xi: f64,
    pub ports: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MziSetup {
    pub polarizations: Vec<f64>,
    /// Common arm length added to both arms.
    pub arm_length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WheelerSetup {
    pub xi: f64,
    pub theta_eom: f64,
    pub arm_length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EraserSetup {
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub arm_length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TunnelingSetup {
    pub n: f64,
    pub theta: f64,
    pub polarizations: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EprbSetup {
    pub state: PairState,
    pub t_eprb: f64,
    /// Exponent parameter: tags scale with `sin^{2d} 2(ξ − α)`.
    pub tag_exponent: f64,
    /// Coincidence windows evaluated by the analysis.
    pub windows: Vec<f64>,
    /// Station-2 settings; station 1 uses the sweep grid.
    pub alpha2: Vec<f64>,
    pub eta1: f64,
    pub eta2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HbtSetup {
    pub radius: f64,
    pub separation: f64,
    pub refresh_period: u32,
    pub xi: f64,
    pub ports: usize,
    pub mode: HbtMode,
    pub window: f64,
    pub t_max: f64,
    pub h: f64,
}

/// Experiment-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Setup {
    Indivisibility(IndivisibilitySetup),
    Interface(InterfaceSetup),
    Plate(PlateSetup),
    TwoBeam(TwoBeamSetup),
    Mzi(MziSetup),
    Wheeler(WheelerSetup),
    Eraser(EraserSetup),
    Tunneling(TunnelingSetup),
    Eprb(EprbSetup),
    Hbt(HbtSetup),
}

/// Declarative description of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub events_per_point: u64,
    pub gamma: f64,
    pub gamma_hat: f64,
    /// Fresh detector state at every sweep point.
    pub reset_detectors: bool,
    /// Values of the swept variable, see [`ExperimentConfig::sweep_name`].
    pub sweep: Vec<f64>,
    pub setup: Setup,
}

const DEG: f64 = PI / 180.0;

impl ExperimentConfig {
    /// Parameter set of the corresponding figure.
    pub fn defaults(kind: ExperimentKind) -> Self {
        let delay_grid = linspace(0.0, 1.0, 21);
        let (events, sweep, setup) = match kind {
            ExperimentKind::Indivisibility => (10_000, alloc::vec![0.0], Setup::Indivisibility(IndivisibilitySetup { xi: 0.0 })),
            ExperimentKind::Interface => (
                10_000,
                linspace(0.0, 85.0 * DEG, 19),
                Setup::Interface(InterfaceSetup { n1: 1.0, n2: 1.52, polarizations: alloc::vec![0.0, FRAC_PI_4, FRAC_PI_2] }),
            ),
            ExperimentKind::Plate => (
                10_000,
                linspace(0.0, 1.0, 41),
                Setup::Plate(PlateSetup {
                    n1: 1.0,
                    n2: 3.0,
                    n3: 1.5,
                    thickness: 1.0 / 12.0,
                    theta: 0.0,
                    polarizations: alloc::vec![0.0],
                    sweep_variable: PlateSweep::OpticalThickness,
                }),
            ),
            ExperimentKind::TwoBeam => (
                181 * 10_000,
                alloc::vec![0.0],
                Setup::TwoBeam(TwoBeamSetup { a: 1.0, d: 5.0, radius: 100.0, xi: 0.0, ports: 500 }),
            ),
            ExperimentKind::Mzi => (
                10_000,
                delay_grid,
                Setup::Mzi(MziSetup { polarizations: alloc::vec![0.0, FRAC_PI_4, FRAC_PI_2], arm_length: 10.0 }),
            ),
            ExperimentKind::Wheeler => (
                2_600,
                delay_grid,
                Setup::Wheeler(WheelerSetup { xi: FRAC_PI_4, theta_eom: FRAC_PI_8, arm_length: 10.0 }),
            ),
            ExperimentKind::Eraser => (
                10_000,
                delay_grid,
                Setup::Eraser(EraserSetup { theta0: PI / 3.0, theta1: FRAC_PI_4, theta2: FRAC_PI_8, arm_length: 10.0 }),
            ),
            ExperimentKind::Tunneling => (
                10_000,
                linspace(0.0, 5.0, 26),
                Setup::Tunneling(TunnelingSetup {
                    n: 1.52,
                    theta: FRAC_PI_4,
                    polarizations: alloc::vec![0.0, FRAC_PI_4, FRAC_PI_2],
                }),
            ),
            ExperimentKind::Eprb => (
                300_000,
                linspace(0.0, PI, 13),
                Setup::Eprb(EprbSetup {
                    state: PairState::Singlet,
                    t_eprb: 1000.0,
                    tag_exponent: 4.0,
                    windows: alloc::vec![1.0, 10.0, 100.0, 1000.0],
                    alpha2: alloc::vec![0.0],
                    eta1: 0.0,
                    eta2: FRAC_PI_2,
                }),
            ),
            ExperimentKind::Hbt => (
                200_000,
                linspace(0.0, 100.0, 21),
                Setup::Hbt(HbtSetup {
                    radius: 1e5,
                    separation: 2000.0,
                    refresh_period: 40,
                    xi: 0.0,
                    ports: 2,
                    mode: HbtMode::Base,
                    window: 2.0,
                    t_max: 2000.0,
                    h: 8.0,
                }),
            ),
        };
        Self {
            seed: 0,
            events_per_point: events,
            gamma: crate::dlm::DEFAULT_GAMMA,
            gamma_hat: crate::dlm::DEFAULT_GAMMA,
            reset_detectors: true,
            sweep,
            setup,
        }
    }

    pub fn kind(&self) -> ExperimentKind {
        match self.setup {
            Setup::Indivisibility(_) => ExperimentKind::Indivisibility,
            Setup::Interface(_) => ExperimentKind::Interface,
            Setup::Plate(_) => ExperimentKind::Plate,
            Setup::TwoBeam(_) => ExperimentKind::TwoBeam,
            Setup::Mzi(_) => ExperimentKind::Mzi,
            Setup::Wheeler(_) => ExperimentKind::Wheeler,
            Setup::Eraser(_) => ExperimentKind::Eraser,
            Setup::Tunneling(_) => ExperimentKind::Tunneling,
            Setup::Eprb(_) => ExperimentKind::Eprb,
            Setup::Hbt(_) => ExperimentKind::Hbt,
        }
    }

    /// Name of the swept variable.
    pub fn sweep_name(&self) -> &'static str {
        match &self.setup {
            Setup::Indivisibility(_) => "point",
            Setup::Interface(_) => "theta",
            Setup::Plate(p) => match p.sweep_variable {
                PlateSweep::Angle => "theta",
                PlateSweep::OpticalThickness => "optical_thickness",
            },
            Setup::TwoBeam(_) => "point",
            Setup::Mzi(_) | Setup::Wheeler(_) | Setup::Eraser(_) => "f_delta_t",
            Setup::Tunneling(_) => "gap_width",
            Setup::Eprb(_) => "alpha1",
            Setup::Hbt(_) => "detector_y",
        }
    }

    /// Polarization variants run at every sweep value, if any.
    fn variants(&self) -> &[f64] {
        match &self.setup {
            Setup::Interface(s) => &s.polarizations,
            Setup::Plate(s) => &s.polarizations,
            Setup::Mzi(s) => &s.polarizations,
            Setup::Tunneling(s) => &s.polarizations,
            _ => &[],
        }
    }

    /// Number of independent sweep points.
    pub fn points(&self) -> usize {
        match &self.setup {
            Setup::Indivisibility(_) | Setup::TwoBeam(_) | Setup::Eprb(_) => 1,
            _ => self.sweep.len() * self.variants().len().max(1),
        }
    }

    /// Sweep value and polarization variant of point `index`.
    pub fn point_coordinates(&self, index: usize) -> (f64, f64) {
        let variants = self.variants();
        match &self.setup {
            Setup::Indivisibility(_) | Setup::TwoBeam(_) | Setup::Eprb(_) => (0.0, 0.0),
            _ if variants.is_empty() => (self.sweep[index], 0.0),
            _ => {
                let n = self.sweep.len();
                (self.sweep[index % n], variants[index / n])
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.events_per_point == 0 {
            return Err(config("events per point must be at least 1"));
        }
        for (name, g) in [("gamma", self.gamma), ("gamma_hat", self.gamma_hat)] {
            if !(0.0..1.0).contains(&g) {
                return Err(config(alloc::format!("{name} must lie in [0, 1), got {g}")));
            }
        }
        if self.sweep.is_empty() {
            return Err(config("sweep must contain at least one value"));
        }
        if self.sweep.iter().any(|v| !v.is_finite()) {
            return Err(config("sweep values must be finite"));
        }
        if self.variants().is_empty() && matches!(self.setup, Setup::Interface(_) | Setup::Plate(_) | Setup::Mzi(_) | Setup::Tunneling(_)) {
            return Err(config("at least one polarization is required"));
        }
        match &self.setup {
            Setup::Indivisibility(_) => Ok(()),
            Setup::Interface(s) => interface::validate(self, s),
            Setup::Plate(s) => plate::validate(self, s),
            Setup::TwoBeam(s) => two_beam::validate(s),
            Setup::Mzi(_) | Setup::Wheeler(_) | Setup::Eraser(_) => Ok(()),
            Setup::Tunneling(s) => tunneling::validate(self, s),
            Setup::Eprb(s) => eprb::validate(s),
            Setup::Hbt(s) => hbt::validate(self, s),
        }
    }
}

/// One detection event as persisted for offline analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventRecord {
    pub event_index: u64,
    pub station: u8,
    /// `±1` for two-outcome stations, otherwise the detector that clicked
    /// (`-1` when no detector clicked).
    pub outcome: i8,
    pub time_tag: f64,
    pub setting: f64,
    pub sweep_value: f64,
}

/// Raw tallies of one sweep point.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointOutput {
    pub index: usize,
    pub sweep_value: f64,
    /// Polarization variant, 0 when the experiment has none.
    pub variant: f64,
    pub emitted: u64,
    /// Clicks per experiment-specific counter, see [`count_labels`].
    pub counts: Vec<u64>,
    /// Messengers absorbed per detector (including beam dumps).
    pub received: Vec<u64>,
    /// Events in which two different detectors clicked.
    pub coincidences: u64,
    pub records: Vec<EventRecord>,
}

/// Names of the entries of [`PointOutput::counts`].
pub fn count_labels(cfg: &ExperimentConfig) -> Vec<String> {
    let fixed: &[&str] = match cfg.kind() {
        ExperimentKind::Indivisibility => &["d0", "d1"],
        ExperimentKind::Interface | ExperimentKind::Plate | ExperimentKind::Tunneling => &["reflected", "transmitted"],
        ExperimentKind::Mzi | ExperimentKind::Eraser => &["d0", "d1"],
        ExperimentKind::Wheeler => &["d0_r0", "d1_r0", "d0_r1", "d1_r1"],
        ExperimentKind::Eprb => &["station1_plus", "station1_minus", "station2_plus", "station2_minus"],
        ExperimentKind::Hbt => &["d0", "d1"],
        ExperimentKind::TwoBeam => {
            return (0..two_beam::DETECTORS).map(|j| alloc::format!("detector_{j}")).collect();
        }
    };
    fixed.iter().map(|s| s.to_string()).collect()
}

/// Detector state carried between sweep points when resets are disabled.
pub type DetectorBank = Vec<DetectorUnit>;

/// Runs one sweep point in a fresh network. With `carried` detectors the
/// network reuses their state; the final detector state is returned.
pub fn run_point(cfg: &ExperimentConfig, index: usize, carried: Option<DetectorBank>) -> Result<(PointOutput, DetectorBank)> {
    if index >= cfg.points() {
        return Err(config(alloc::format!("point {index} out of range ({} points)", cfg.points())));
    }
    let mut rng = crate::Rng::seed_from_u64(cfg.seed ^ index as u64);
    let (sweep_value, variant) = cfg.point_coordinates(index);
    let ctx = PointContext { cfg, sweep_value, variant };
    let (mut out, bank) = match &cfg.setup {
        Setup::Indivisibility(s) => indivisibility::run(&ctx, s, carried, &mut rng)?,
        Setup::Interface(s) => interface::run(&ctx, s, carried, &mut rng)?,
        Setup::Plate(s) => plate::run(&ctx, s, carried, &mut rng)?,
        Setup::TwoBeam(s) => two_beam::run(&ctx, s, carried, &mut rng)?,
        Setup::Mzi(s) => mzi::run(&ctx, s, carried, &mut rng)?,
        Setup::Wheeler(s) => wheeler::run(&ctx, s, carried, &mut rng)?,
        Setup::Eraser(s) => eraser::run(&ctx, s, carried, &mut rng)?,
        Setup::Tunneling(s) => tunneling::run(&ctx, s, carried, &mut rng)?,
        Setup::Eprb(s) => eprb::run(&ctx, s, carried, &mut rng)?,
        Setup::Hbt(s) => hbt::run(&ctx, s, carried, &mut rng)?,
    };
    out.index = index;
    out.sweep_value = sweep_value;
    out.variant = variant;
    let absorbed: u64 = out.received.iter().sum();
    if absorbed != out.emitted * messengers_per_emission(cfg) {
        return Err(Error::Aborted(alloc::format!(
            "conservation audit failed at point {index}: {} messengers emitted, {absorbed} absorbed",
            out.emitted * messengers_per_emission(cfg)
        )));
    }
    Ok((out, bank))
}

fn messengers_per_emission(cfg: &ExperimentConfig) -> u64 {
    match cfg.kind() {
        ExperimentKind::Eprb | ExperimentKind::Hbt => 2,
        _ => 1,
    }
}

/// Runs every sweep point in order.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<PointOutput>> {
    cfg.validate()?;
    let mut carried: Option<DetectorBank> = None;
    let mut out = Vec::with_capacity(cfg.points());
    for i in 0..cfg.points() {
        let (p, bank) = run_point(cfg, i, carried.take())?;
        if !cfg.reset_detectors {
            carried = Some(bank);
        }
        out.push(p);
    }
    Ok(out)
}

pub(crate) struct PointContext<'a> {
    pub cfg: &'a ExperimentConfig,
    pub sweep_value: f64,
    pub variant: f64,
}

/// Takes carried detectors or builds `n` fresh single-port ones.
pub(crate) fn single_port_detectors(carried: Option<DetectorBank>, n: usize, gamma_hat: f64) -> Result<DetectorBank> {
    match carried {
        Some(bank) if bank.len() == n => Ok(bank),
        Some(_) => Err(config("carried detector bank does not match the network")),
        None => (0..n).map(|_| DetectorUnit::single(gamma_hat)).collect(),
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    /// No data, e.g. a correlation over zero coincidences.
    Undefined,
}

/// Column-labeled rows ready for serialization.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.columns.iter().position(|n| n == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[c] {
                    Cell::Int(v) => *v as f64,
                    Cell::Real(v) => *v,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }
}

pub(crate) fn int(v: u64) -> Cell {
    Cell::Int(v as i64)
}

pub(crate) fn ratio(num: u64, den: u64) -> Cell {
    if den == 0 {
        Cell::Undefined
    } else {
        Cell::Real(num as f64 / den as f64)
    }
}

/// Per-point summary of a finished run, with oracle values alongside.
pub fn summary_table(cfg: &ExperimentConfig, points: &[PointOutput]) -> Result<Table> {
    match &cfg.setup {
        Setup::Indivisibility(_) => Ok(indivisibility::table(points)),
        Setup::Interface(s) => interface::table(s, points),
        Setup::Plate(s) => plate::table(s, points),
        Setup::TwoBeam(s) => Ok(two_beam::table(s, points)),
        Setup::Mzi(_) => Ok(mzi::table(points)),
        Setup::Wheeler(s) => Ok(wheeler::table(s, points)),
        Setup::Eraser(s) => Ok(eraser::table(s, points)),
        Setup::Tunneling(s) => tunneling::table(s, points),
        Setup::Eprb(s) => eprb::table(s, points),
        Setup::Hbt(s) => Ok(hbt::table(s, points)),
    }
}

/// Wave-theory prediction over the configured sweep.
pub fn oracle_curve(cfg: &ExperimentConfig) -> Result<OracleCurve> {
    match &cfg.setup {
        Setup::Indivisibility(_) => Ok(indivisibility::oracle(cfg)),
        Setup::Interface(s) => interface::oracle(cfg, s),
        Setup::Plate(s) => plate::oracle(cfg, s),
        Setup::TwoBeam(s) => Ok(two_beam::oracle(s)),
        Setup::Mzi(_) => Ok(mzi::oracle(cfg)),
        Setup::Wheeler(s) => Ok(wheeler::oracle(cfg, s)),
        Setup::Eraser(s) => Ok(eraser::oracle(cfg, s)),
        Setup::Tunneling(s) => tunneling::oracle(cfg, s),
        Setup::Eprb(s) => Ok(eprb::oracle(cfg, s)),
        Setup::Hbt(s) => Ok(hbt::oracle(cfg, s)),
    }
}

pub(crate) fn curve(label: &str, sweep_name: &str, sweep: Vec<f64>, channels: Vec<(&str, Vec<f64>)>) -> OracleCurve {
    let (names, values): (Vec<_>, Vec<_>) = channels.into_iter().map(|(n, v)| (n.to_string(), v)).unzip();
    OracleCurve { label: label.to_string(), sweep_name: sweep_name.to_string(), sweep, channel_names: names, channels: values }
}

/// Arm times of flight `(T0, T1)` realizing `f·ΔT = T0 − T1` with both non-negative.
pub(crate) fn arm_times(arm_length: f64, fdt: f64) -> (f64, f64) {
    (arm_length + fdt.max(0.0), arm_length + (-fdt).max(0.0))
}

pub(crate) fn single(e: crate::messaging::Emission) -> Result<crate::messaging::Messenger> {
    match e {
        crate::messaging::Emission::Single(m) => Ok(m),
        crate::messaging::Emission::Pair(..) => Err(Error::Aborted("expected a single-messenger source".to_string())),
    }
}

pub(crate) fn pair(e: crate::messaging::Emission) -> Result<(crate::messaging::Messenger, crate::messaging::Messenger)> {
    match e {
        crate::messaging::Emission::Pair(a, b) => Ok((a, b)),
        crate::messaging::Emission::Single(..) => Err(Error::Aborted("expected a pair source".to_string())),
    }
}

/// Feeds a messenger to detector `k` of a bank, updating the tallies.
pub(crate) fn detect(
    bank: &mut DetectorBank,
    k: usize,
    msg: crate::messaging::Message,
    direction: f64,
    tof: f64,
    out: &mut PointOutput,
    counter: usize,
    rng: &mut crate::Rng,
) -> Result<crate::optics::Detection> {
    let e = bank[k].process(msg, direction, tof, rng)?;
    out.received[k] += 1;
    if e.click {
        out.counts[counter] += 1;
    }
    Ok(e)
}
