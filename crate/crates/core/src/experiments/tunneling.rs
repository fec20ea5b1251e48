use alloc::vec;
use alloc::vec::Vec;

use super::{detect, int, ratio, single, single_port_detectors, Cell, DetectorBank, ExperimentConfig, PointContext, PointOutput, Table, TunnelingSetup};
use crate::error::{config, Result};
use crate::math::{cos, sin};
use crate::messaging::{Source, SourceSpec};
use crate::optics::{make_gap_unit, Polarization};
use crate::oracles::{ftir_oracle, OracleCurve};

pub(super) fn validate(cfg: &ExperimentConfig, s: &TunnelingSetup) -> Result<()> {
    if !(s.n > 1.0) {
        return Err(config("prism index must exceed 1"));
    }
    if !(s.n * sin(s.theta) > 1.0) || !(0.0..core::f64::consts::FRAC_PI_2).contains(&s.theta) {
        return Err(config("internal angle must lie above the critical angle and below π/2"));
    }
    if cfg.sweep.iter().any(|w| !(*w >= 0.0)) {
        return Err(config("gap widths must be non-negative"));
    }
    Ok(())
}

/// Source → lumped gap unit → reflected to D0, tunneled to D1.
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &TunnelingSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let mut source = Source::new(SourceSpec::Coherent { xi: ctx.variant })?;
    let mut gap = make_gap_unit(ctx.sweep_value, s.n, s.theta, cfg.gamma)?;
    let mut det = single_port_detectors(carried, 2, cfg.gamma_hat)?;
    let mut out = PointOutput { counts: vec![0; 2], received: vec![0; 2], ..PointOutput::default() };
    for _ in 0..cfg.events_per_point {
        let m = single(source.emit(rng))?;
        out.emitted += 1;
        let (port, msg) = gap.process(0, m.msg, rng)?;
        let mut clicked = [false; 2];
        clicked[port] = detect(&mut det, port, msg, 0.0, 0.0, &mut out, port, rng)?.click;
        if clicked[0] && clicked[1] {
            out.coincidences += 1;
        }
    }
    Ok((out, det))
}

fn transmittance(s: &TunnelingSetup, w: f64, xi: f64) -> Result<f64> {
    let (c, sn) = (cos(xi), sin(xi));
    Ok(c * c * ftir_oracle(w, s.n, s.theta, Polarization::S)? + sn * sn * ftir_oracle(w, s.n, s.theta, Polarization::P)?)
}

pub(super) fn table(s: &TunnelingSetup, points: &[PointOutput]) -> Result<Table> {
    let mut t = Table::new(&["gap_width", "xi", "emitted", "reflected", "transmitted", "transmissivity", "oracle", "coincidences"]);
    for p in points {
        t.push(vec![
            Cell::Real(p.sweep_value),
            Cell::Real(p.variant),
            int(p.emitted),
            int(p.counts[0]),
            int(p.counts[1]),
            ratio(p.counts[1], p.counts[0] + p.counts[1]),
            Cell::Real(transmittance(s, p.sweep_value, p.variant)?),
            int(p.coincidences),
        ]);
    }
    Ok(t)
}

pub(super) fn oracle(cfg: &ExperimentConfig, s: &TunnelingSetup) -> Result<OracleCurve> {
    let mut names = Vec::new();
    let mut channels = Vec::new();
    for &xi in &s.polarizations {
        names.push(alloc::format!("transmittance_xi_{xi:.6}"));
        channels.push(cfg.sweep.iter().map(|&w| transmittance(s, w, xi)).collect::<Result<Vec<_>>>()?);
    }
    Ok(OracleCurve { label: "tunneling".into(), sweep_name: "gap_width".into(), sweep: cfg.sweep.clone(), channel_names: names, channels })
}
