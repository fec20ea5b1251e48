use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng as _;

use super::{detect, int, pair, Cell, DetectorBank, ExperimentConfig, HbtMode, HbtSetup, PointContext, PointOutput, Table};
use crate::analysis::within_window;
use crate::error::{config, Result};
use crate::math::{atan2, fabs, sqrt};
use crate::messaging::{Source, SourceSpec};
use crate::optics::{DelayModel, DetectorUnit, PortMapper};
use crate::oracles::{hbt_oracle, OracleCurve};

pub(super) fn validate(cfg: &ExperimentConfig, s: &HbtSetup) -> Result<()> {
    if !(s.radius > 0.0 && s.separation > 0.0) {
        return Err(config("detector distance and source separation must be positive"));
    }
    if s.refresh_period == 0 || s.ports == 0 {
        return Err(config("refresh period and port count must be at least 1"));
    }
    if !(s.window > 0.0) {
        return Err(config("coincidence window must be positive"));
    }
    if !(s.t_max >= 0.0 && s.h >= 0.0) {
        return Err(config("delay parameters must be non-negative"));
    }
    if cfg.sweep.iter().any(|y| !(fabs(*y) < s.radius)) {
        return Err(config("detector positions must lie within the detector distance"));
    }
    Ok(())
}

fn source_y(s: &HbtSetup, n: usize) -> f64 {
    (1.0 - 2.0 * n as f64) * 0.5 * s.separation
}

/// Time of flight from source `n` to a detector at `(X, y)`.
fn flight(s: &HbtSetup, n: usize, y: f64) -> f64 {
    let dy = source_y(s, n) - y;
    sqrt(s.radius * s.radius + dy * dy)
}

/// `f·ΔT = (T₀₀ − T₁₀) − (T₀₁ − T₁₁)` for D0 at `y0` and D1 at 0.
pub fn hbt_delay_difference(s: &HbtSetup, y0: f64) -> f64 {
    (flight(s, 0, y0) - flight(s, 1, y0)) - (flight(s, 0, 0.0) - flight(s, 1, 0.0))
}

fn detector(s: &HbtSetup, y: f64, gamma_hat: f64) -> Result<DetectorUnit> {
    let center = atan2(y, s.radius);
    let spread = (0..2).map(|n| fabs(atan2(y - source_y(s, n), s.radius) - center)).fold(0.0f64, f64::max);
    let half_width = if spread > 0.0 { (2.0 * spread).min(PI) } else { PI };
    let delay = match s.mode {
        HbtMode::Base => None,
        HbtMode::Delay => Some(DelayModel { t_max: s.t_max, h: s.h }),
    };
    DetectorUnit::new(PortMapper::new(center, half_width, s.ports)?, gamma_hat, delay)
}

/// Sources at `y = ±d/2`, detectors D0 at `(X, y0)` and D1 at `(X, 0)`. At
/// every step both sources emit; each messenger goes to D0 or D1 with equal
/// probability. The D0 position is the swept variable.
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &HbtSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let ys = [ctx.sweep_value, 0.0];
    let mut det = match carried {
        Some(bank) if bank.len() == 2 => bank,
        _ => vec![detector(s, ys[0], cfg.gamma_hat)?, detector(s, ys[1], cfg.gamma_hat)?],
    };
    let mut source = Source::new(SourceSpec::RandomPhasePair { xi: s.xi, d: s.separation, refresh_period: s.refresh_period })?;
    let mut out = PointOutput { counts: vec![0; 2], received: vec![0; 2], ..PointOutput::default() };
    for _ in 0..cfg.events_per_point {
        let (a, b) = pair(source.emit(rng))?;
        out.emitted += 1;
        let mut clicks: [Option<f64>; 2] = [None, None];
        for (n, m) in [a, b].into_iter().enumerate() {
            let k = usize::from(rng.random::<bool>());
            let tof = flight(s, n, ys[k]);
            let direction = atan2(ys[k] - source_y(s, n), s.radius);
            let e = detect(&mut det, k, m.msg.advance(tof), direction, tof, &mut out, k, rng)?;
            if e.click {
                clicks[k] = e.click_time;
            }
        }
        if let [Some(t0), Some(t1)] = clicks {
            let coincident = match s.mode {
                HbtMode::Base => true,
                HbtMode::Delay => within_window(t0, t1, s.window),
            };
            if coincident {
                out.coincidences += 1;
            }
        }
    }
    Ok((out, det))
}

pub(super) fn table(s: &HbtSetup, points: &[PointOutput]) -> Table {
    let mut t = Table::new(&["detector_y", "f_delta_t", "emitted", "d0", "d1", "coincidences", "oracle_coincidences"]);
    for p in points {
        let fdt = hbt_delay_difference(s, p.sweep_value);
        t.push(vec![
            Cell::Real(p.sweep_value),
            Cell::Real(fdt),
            int(p.emitted),
            int(p.counts[0]),
            int(p.counts[1]),
            int(p.coincidences),
            Cell::Real(hbt_oracle(fdt, p.emitted as f64).coincidences),
        ]);
    }
    t
}

pub(super) fn oracle(cfg: &ExperimentConfig, s: &HbtSetup) -> OracleCurve {
    let n = cfg.events_per_point as f64;
    let mut singles = Vec::new();
    let mut coinc = Vec::new();
    for &y in &cfg.sweep {
        let o = hbt_oracle(hbt_delay_difference(s, y), n);
        singles.push(o.singles);
        coinc.push(o.coincidences);
    }
    super::curve("hbt", "detector_y", cfg.sweep.clone(), vec![("singles", singles), ("coincidences", coinc)])
}
