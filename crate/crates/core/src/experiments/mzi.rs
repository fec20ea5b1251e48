use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::{arm_times, detect, int, ratio, single, single_port_detectors, Cell, DetectorBank, ExperimentConfig, MziSetup, PointContext, PointOutput, Table};
use crate::error::Result;
use crate::messaging::{Source, SourceSpec};
use crate::optics::{make_bs_unit, mirror_apply};
use crate::oracles::{mzi_oracle, OracleCurve};

/// BS1 (input port 0) → two arms with one mirror each → BS2 → D0 (port 0), D1 (port 1).
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &MziSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let arms = {
        let (t0, t1) = arm_times(s.arm_length, ctx.sweep_value);
        [t0, t1]
    };
    let mut source = Source::new(SourceSpec::Coherent { xi: ctx.variant })?;
    let mut bs1 = make_bs_unit(cfg.gamma)?;
    let mut bs2 = make_bs_unit(cfg.gamma)?;
    let mut det = single_port_detectors(carried, 2, cfg.gamma_hat)?;
    let mut out = PointOutput { counts: vec![0; 2], received: vec![0; 2], ..PointOutput::default() };
    for _ in 0..cfg.events_per_point {
        let m = single(source.emit(rng))?;
        out.emitted += 1;
        let (arm, msg) = bs1.process(0, m.msg, rng)?;
        let (msg, _) = mirror_apply(&msg.advance(arms[arm]), [1.0, 0.0], [-1.0, 0.0]);
        let (port, msg) = bs2.process(arm, msg, rng)?;
        detect(&mut det, port, msg, 0.0, 0.0, &mut out, port, rng)?;
    }
    Ok((out, det))
}

pub(super) fn table(points: &[PointOutput]) -> Table {
    let mut t = Table::new(&["f_delta_t", "xi", "emitted", "d0", "d1", "d0_fraction", "oracle_d0"]);
    for p in points {
        t.push(vec![
            Cell::Real(p.sweep_value),
            Cell::Real(p.variant),
            int(p.emitted),
            int(p.counts[0]),
            int(p.counts[1]),
            ratio(p.counts[0], p.counts[0] + p.counts[1]),
            Cell::Real(mzi_oracle(TAU * p.sweep_value, 0.0).0),
        ]);
    }
    t
}

pub(super) fn oracle(cfg: &ExperimentConfig) -> OracleCurve {
    let (p0, p1): (Vec<f64>, Vec<f64>) = cfg.sweep.iter().map(|&x| mzi_oracle(TAU * x, 0.0)).unzip();
    super::curve("mzi", "f_delta_t", cfg.sweep.clone(), vec![("p0", p0), ("p1", p1)])
}
