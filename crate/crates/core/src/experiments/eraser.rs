use alloc::vec;
use alloc::vec::Vec;

use super::{arm_times, detect, int, ratio, single, single_port_detectors, Cell, DetectorBank, EraserSetup, ExperimentConfig, PointContext, PointOutput, Table};
use crate::error::Result;
use crate::messaging::{Source, SourceSpec};
use crate::optics::{make_bs_unit, make_pbs_unit, waveplate_apply, Waveplate};
use crate::oracles::{eraser_oracle, eraser_oracle_corrected, OracleCurve};

const DUMP: usize = 2;

/// S-polarized source → BS1. Arm 0 carries HWP0 (θ0). BS2 output 1 passes the
/// QWP (θ2) and HWP1 (θ1) into a PBS whose P output (port 1) feeds D0 and
/// whose S output (port 0) feeds D1. BS2 output 0 ends in a beam dump.
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &EraserSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let arms = {
        let (t0, t1) = arm_times(s.arm_length, ctx.sweep_value);
        [t0, t1]
    };
    let mut source = Source::new(SourceSpec::Coherent { xi: 0.0 })?;
    let mut bs1 = make_bs_unit(cfg.gamma)?;
    let mut bs2 = make_bs_unit(cfg.gamma)?;
    let mut analyzer = make_pbs_unit(cfg.gamma)?;
    let mut det = single_port_detectors(carried, 3, cfg.gamma_hat)?;
    let mut out = PointOutput { counts: vec![0; 2], received: vec![0; 3], ..PointOutput::default() };
    for _ in 0..cfg.events_per_point {
        let m = single(source.emit(rng))?;
        out.emitted += 1;
        let (arm, mut msg) = bs1.process(0, m.msg, rng)?;
        if arm == 0 {
            msg = waveplate_apply(Waveplate::Half, s.theta0, &msg);
        }
        let (port, msg) = bs2.process(arm, msg.advance(arms[arm]), rng)?;
        if port == 0 {
            det[DUMP].process(msg, 0.0, 0.0, rng)?;
            out.received[DUMP] += 1;
            continue;
        }
        let msg = waveplate_apply(Waveplate::Quarter, s.theta2, &msg);
        let msg = waveplate_apply(Waveplate::Half, s.theta1, &msg);
        let (p, msg) = analyzer.process(0, msg, rng)?;
        let d = 1 - p;
        detect(&mut det, d, msg, 0.0, 0.0, &mut out, d, rng)?;
    }
    Ok((out, det))
}

/// D0 share `I0/(I0 + I1)` of the corrected intensities.
pub fn normalized_d0(s: &EraserSetup, fdt: f64) -> f64 {
    let (i0, i1) = eraser_oracle_corrected(s.theta0, s.theta1, s.theta2, fdt);
    i0 / (i0 + i1)
}

pub(super) fn table(s: &EraserSetup, points: &[PointOutput]) -> Table {
    let mut t = Table::new(&["f_delta_t", "emitted", "d0", "d1", "d0_fraction", "oracle_d0_fraction"]);
    for p in points {
        t.push(vec![
            Cell::Real(p.sweep_value),
            int(p.emitted),
            int(p.counts[0]),
            int(p.counts[1]),
            ratio(p.counts[0], p.counts[0] + p.counts[1]),
            Cell::Real(normalized_d0(s, p.sweep_value)),
        ]);
    }
    t
}

pub(super) fn oracle(cfg: &ExperimentConfig, s: &EraserSetup) -> OracleCurve {
    let mut i0 = Vec::new();
    let mut i1_printed = Vec::new();
    let mut i1 = Vec::new();
    for &x in &cfg.sweep {
        let (a, b) = eraser_oracle(s.theta0, s.theta1, s.theta2, x);
        i0.push(a);
        i1_printed.push(b);
        i1.push(eraser_oracle_corrected(s.theta0, s.theta1, s.theta2, x).1);
    }
    let frac = cfg.sweep.iter().map(|&x| normalized_d0(s, x)).collect();
    super::curve(
        "eraser",
        "f_delta_t",
        cfg.sweep.clone(),
        vec![("i0", i0), ("i1_printed", i1_printed), ("i1", i1), ("d0_fraction", frac)],
    )
}
