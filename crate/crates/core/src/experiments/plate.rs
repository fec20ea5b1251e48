use alloc::vec;
use alloc::vec::Vec;

use super::{
    detect, int, ratio, single, single_port_detectors, Cell, DetectorBank, ExperimentConfig, PlateSetup, PlateSweep, PointContext,
    PointOutput, Table,
};
use crate::error::{config, Error, Result};
use crate::math::{asin, cos, sin};
use crate::messaging::{Source, SourceSpec};
use crate::optics::{make_interface_unit, Polarization};
use crate::oracles::{plate_oracle, OracleCurve};

/// Safety cap on round trips inside the film for one messenger.
pub const MAX_BOUNCES: u32 = 10_000;

pub(super) fn validate(cfg: &ExperimentConfig, s: &PlateSetup) -> Result<()> {
    if !(s.n1 > 0.0 && s.n2 > 0.0 && s.n3 > 0.0) {
        return Err(config("refractive indices must be positive"));
    }
    if !(s.thickness >= 0.0) {
        return Err(config("plate thickness must be non-negative"));
    }
    for &v in &cfg.sweep {
        let (theta, h) = geometry(s, v);
        if !(0.0..core::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(config(alloc::format!("incidence angle {theta} outside [0, π/2)")));
        }
        if !(h >= 0.0) {
            return Err(config("optical thickness must be non-negative"));
        }
        let s1 = s.n1 * sin(theta);
        if s1 > s.n2 || s1 > s.n3 {
            return Err(config(alloc::format!("incidence angle {theta} leads to total internal reflection")));
        }
    }
    Ok(())
}

/// Incidence angle and geometric thickness for sweep value `v`.
fn geometry(s: &PlateSetup, v: f64) -> (f64, f64) {
    match s.sweep_variable {
        PlateSweep::Angle => (v, s.thickness),
        PlateSweep::OpticalThickness => (s.theta, v / s.n2),
    }
}

/// Two interfaces joined by the film. Unit I (n1|n2) receives the source on
/// port 0 and the returning messenger on port 1; output 0 goes to D0
/// (reflection), output 1 crosses the film to unit II. Unit II (n2|n3) sends
/// output 1 to D1 (transmission) and output 0 back across the film.
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &PlateSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let (theta, h) = geometry(s, ctx.sweep_value);
    let theta_film = asin(s.n1 * sin(theta) / s.n2);
    let leg = s.n2 * h * cos(theta_film);
    let mut source = Source::new(SourceSpec::Coherent { xi: ctx.variant })?;
    let mut first = make_interface_unit(theta, s.n1, s.n2, cfg.gamma)?;
    let mut second = make_interface_unit(theta_film, s.n2, s.n3, cfg.gamma)?;
    let mut det = single_port_detectors(carried, 2, cfg.gamma_hat)?;
    let mut out = PointOutput { counts: vec![0; 2], received: vec![0; 2], ..PointOutput::default() };
    for _ in 0..cfg.events_per_point {
        let m = single(source.emit(rng))?;
        out.emitted += 1;
        let mut msg = m.msg;
        let mut port = 0;
        let mut bounces = 0u32;
        let exit = loop {
            let (p, next) = first.process(port, msg, rng)?;
            if p == 0 {
                break (0, next);
            }
            let (q, back) = second.process(0, next.advance(leg), rng)?;
            if q == 1 {
                break (1, back);
            }
            msg = back.advance(leg);
            port = 1;
            bounces += 1;
            if bounces > MAX_BOUNCES {
                return Err(Error::Aborted(alloc::format!(
                    "messenger exceeded {MAX_BOUNCES} round trips in the plate at sweep value {}",
                    ctx.sweep_value
                )));
            }
        };
        detect(&mut det, exit.0, exit.1, 0.0, 0.0, &mut out, exit.0, rng)?;
    }
    Ok((out, det))
}

fn pol_reflectance(s: &PlateSetup, v: f64, xi: f64) -> Result<f64> {
    let (theta, h) = geometry(s, v);
    let c = cos(xi);
    let sn = sin(xi);
    Ok(c * c * plate_oracle(theta, s.n1, s.n2, s.n3, h, Polarization::S)?
        + sn * sn * plate_oracle(theta, s.n1, s.n2, s.n3, h, Polarization::P)?)
}

pub(super) fn table(s: &PlateSetup, points: &[PointOutput]) -> Result<Table> {
    let name = match s.sweep_variable {
        PlateSweep::Angle => "theta",
        PlateSweep::OpticalThickness => "optical_thickness",
    };
    let mut t = Table::new(&[name, "xi", "emitted", "reflected", "transmitted", "reflectivity", "oracle"]);
    for p in points {
        t.push(vec![
            Cell::Real(p.sweep_value),
            Cell::Real(p.variant),
            int(p.emitted),
            int(p.counts[0]),
            int(p.counts[1]),
            ratio(p.counts[0], p.counts[0] + p.counts[1]),
            Cell::Real(pol_reflectance(s, p.sweep_value, p.variant)?),
        ]);
    }
    Ok(t)
}

pub(super) fn oracle(cfg: &ExperimentConfig, s: &PlateSetup) -> Result<OracleCurve> {
    let mut names = Vec::new();
    let mut channels = Vec::new();
    for &xi in &s.polarizations {
        names.push(alloc::format!("reflectance_xi_{xi:.6}"));
        channels.push(cfg.sweep.iter().map(|&v| pol_reflectance(s, v, xi)).collect::<Result<Vec<_>>>()?);
    }
    Ok(OracleCurve { label: "plate".into(), sweep_name: cfg.sweep_name().into(), sweep: cfg.sweep.clone(), channel_names: names, channels })
}
