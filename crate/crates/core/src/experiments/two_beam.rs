use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{detect, int, single, Cell, DetectorBank, PointContext, PointOutput, Table, TwoBeamSetup};
use crate::analysis::fit_scale;
use crate::error::{config, Result};
use crate::math::{asin, round};
use crate::messaging::{slit_hit_geometry, Source, SourceSpec};
use crate::optics::{DetectorUnit, PortMapper};
use crate::oracles::{two_beam_oracle, OracleCurve};

/// Detectors on the semicircle, one per degree from −90° to 90°.
pub const DETECTORS: usize = 181;

pub(super) fn validate(s: &TwoBeamSetup) -> Result<()> {
    if !(s.a > 0.0 && s.d > 0.0 && s.a <= s.d) {
        return Err(config("need 0 < a ≤ d for the slit pair"));
    }
    if !(s.radius > 0.5 * (s.a + s.d)) {
        return Err(config("detector radius must exceed the source extent"));
    }
    if s.ports == 0 {
        return Err(config("detectors need at least one port"));
    }
    Ok(())
}

/// Angular position of detector `j`.
pub fn detector_angle(j: usize) -> f64 {
    (j as f64 - 90.0) * PI / 180.0
}

/// Half-width of the arc of arrival directions a detector can see: the
/// largest angle between a ray from the source region and the detector's line
/// of sight, plus half a detector bin.
pub fn two_beam_arc_half_width(s: &TwoBeamSetup) -> f64 {
    let extent = (0.5 * (s.d + s.a) / s.radius).min(1.0);
    asin(extent) + PI / 360.0
}

/// Slit-pair source emitting towards 181 multi-port detectors.
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &TwoBeamSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let half_width = two_beam_arc_half_width(s);
    let mut det = match carried {
        Some(bank) if bank.len() == DETECTORS => bank,
        _ => (0..DETECTORS)
            .map(|j| DetectorUnit::new(PortMapper::new(detector_angle(j), half_width, s.ports)?, cfg.gamma_hat, None))
            .collect::<Result<Vec<_>>>()?,
    };
    let mut source = Source::new(SourceSpec::SlitPair { xi: s.xi, a: s.a, d: s.d })?;
    let mut out = PointOutput { counts: vec![0; DETECTORS], received: vec![0; DETECTORS], ..PointOutput::default() };
    for _ in 0..cfg.events_per_point {
        let m = single(source.emit(rng))?;
        out.emitted += 1;
        let beta = m.angle();
        let (theta, tof) = slit_hit_geometry(m.position[1], beta, s.radius)?;
        let j = (round(theta.to_degrees()) + 90.0).clamp(0.0, (DETECTORS - 1) as f64) as usize;
        detect(&mut det, j, m.msg.advance(tof), beta, tof, &mut out, j, rng)?;
    }
    Ok((out, det))
}

pub(super) fn table(s: &TwoBeamSetup, points: &[PointOutput]) -> Table {
    let mut t = Table::new(&["detector", "theta", "arrivals", "clicks", "oracle", "oracle_fitted"]);
    let Some(p) = points.first() else { return t };
    let thetas: Vec<f64> = (0..DETECTORS).map(detector_angle).collect();
    let clicks: Vec<f64> = p.counts.iter().map(|c| *c as f64).collect();
    let scale = fit_scale(&thetas, &clicks, |th| two_beam_oracle(th, s.a, s.d)).unwrap_or(0.0);
    for j in 0..DETECTORS {
        let o = two_beam_oracle(thetas[j], s.a, s.d);
        t.push(vec![
            int(j as u64),
            Cell::Real(thetas[j]),
            int(p.received[j]),
            int(p.counts[j]),
            Cell::Real(o),
            Cell::Real(scale * o),
        ]);
    }
    t
}

pub(super) fn oracle(s: &TwoBeamSetup) -> OracleCurve {
    let thetas: Vec<f64> = (0..DETECTORS).map(detector_angle).collect();
    let i = thetas.iter().map(|&t| two_beam_oracle(t, s.a, s.d)).collect();
    super::curve("two_beam", "theta", thetas, vec![("relative_intensity", i)])
}
