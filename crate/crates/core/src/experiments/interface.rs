use alloc::vec;
use alloc::vec::Vec;

use super::{detect, int, ratio, single, single_port_detectors, DetectorBank, ExperimentConfig, InterfaceSetup, PointContext, PointOutput, Table};
use crate::error::{config, Result};
use crate::messaging::{Source, SourceSpec};
use crate::optics::make_interface_unit;
use crate::oracles::{fresnel_oracle_polarized, OracleCurve};

pub(super) fn validate(cfg: &ExperimentConfig, s: &InterfaceSetup) -> Result<()> {
    if !(s.n1 > 0.0 && s.n2 > 0.0) {
        return Err(config("refractive indices must be positive"));
    }
    for &t in &cfg.sweep {
        if !(0.0..core::f64::consts::FRAC_PI_2).contains(&t) {
            return Err(config(alloc::format!("incidence angle {t} outside [0, π/2)")));
        }
        if s.n1 * crate::math::sin(t) > s.n2 {
            return Err(config(alloc::format!("incidence angle {t} is beyond the critical angle")));
        }
    }
    Ok(())
}

/// Source → interface (port 0) → reflected to D0, transmitted to D1.
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &InterfaceSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let mut source = Source::new(SourceSpec::Coherent { xi: ctx.variant })?;
    let mut unit = make_interface_unit(ctx.sweep_value, s.n1, s.n2, cfg.gamma)?;
    let mut det = single_port_detectors(carried, 2, cfg.gamma_hat)?;
    let mut out = PointOutput { counts: vec![0; 2], received: vec![0; 2], ..PointOutput::default() };
    for _ in 0..cfg.events_per_point {
        let m = single(source.emit(rng))?;
        out.emitted += 1;
        let (port, msg) = unit.process(0, m.msg, rng)?;
        detect(&mut det, port, msg, 0.0, 0.0, &mut out, port, rng)?;
    }
    Ok((out, det))
}

pub(super) fn table(s: &InterfaceSetup, points: &[PointOutput]) -> Result<Table> {
    let mut t = Table::new(&["theta", "xi", "emitted", "reflected", "transmitted", "reflectivity", "oracle"]);
    for p in points {
        let oracle = fresnel_oracle_polarized(p.sweep_value, s.n1, s.n2, p.variant)?;
        t.push(vec![
            super::Cell::Real(p.sweep_value),
            super::Cell::Real(p.variant),
            int(p.emitted),
            int(p.counts[0]),
            int(p.counts[1]),
            ratio(p.counts[0], p.counts[0] + p.counts[1]),
            super::Cell::Real(oracle),
        ]);
    }
    Ok(t)
}

pub(super) fn oracle(cfg: &ExperimentConfig, s: &InterfaceSetup) -> Result<OracleCurve> {
    let mut names = Vec::new();
    let mut channels = Vec::new();
    for &xi in &s.polarizations {
        names.push(alloc::format!("reflectance_xi_{xi:.6}"));
        channels.push(cfg.sweep.iter().map(|&t| fresnel_oracle_polarized(t, s.n1, s.n2, xi)).collect::<Result<Vec<_>>>()?);
    }
    Ok(OracleCurve {
        label: "interface".into(),
        sweep_name: "theta".into(),
        sweep: cfg.sweep.clone(),
        channel_names: names,
        channels,
    })
}
