use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{arm_times, detect, int, ratio, single, single_port_detectors, Cell, DetectorBank, EventRecord, ExperimentConfig, PointContext, PointOutput, Table, WheelerSetup};
use crate::error::Result;
use crate::messaging::{Source, SourceSpec};
use crate::optics::{make_pbs_unit, waveplate_apply, Waveplate};
use crate::oracles::{wheeler_oracle, OracleCurve};

/// Index of the beam dump behind the unused output of the recombining PBS.
const DUMP: usize = 2;

/// PBS1 splits S (arm 0) from P (arm 1); PBS2 recombines them on output 0.
/// After PBS1 has routed the messenger, a fresh random bit `r` selects the
/// EOM angle (0 or `theta_eom`); the EOM acts as a half-wave plate in front of
/// a third PBS whose outputs 0 and 1 feed D0 and D1.
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &WheelerSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let arms = {
        let (t0, t1) = arm_times(s.arm_length, ctx.sweep_value);
        [t0, t1]
    };
    let mut source = Source::new(SourceSpec::Coherent { xi: s.xi })?;
    let mut split = make_pbs_unit(cfg.gamma)?;
    let mut join = make_pbs_unit(cfg.gamma)?;
    let mut analyzer = make_pbs_unit(cfg.gamma)?;
    let mut det = single_port_detectors(carried, 3, cfg.gamma_hat)?;
    let mut out = PointOutput { counts: vec![0; 4], received: vec![0; 3], ..PointOutput::default() };
    out.records.reserve(cfg.events_per_point as usize);
    for n in 0..cfg.events_per_point {
        let m = single(source.emit(rng))?;
        out.emitted += 1;
        let (arm, msg) = split.process(0, m.msg, rng)?;
        let r = usize::from(rng.random::<bool>());
        let (port, msg) = join.process(arm, msg.advance(arms[arm]), rng)?;
        let mut outcome = -1i8;
        if port == 0 {
            let angle = if r == 1 { s.theta_eom } else { 0.0 };
            let msg = waveplate_apply(Waveplate::Half, angle, &msg);
            let (d, msg) = analyzer.process(0, msg, rng)?;
            if detect(&mut det, d, msg, 0.0, 0.0, &mut out, 2 * r + d, rng)?.click {
                outcome = d as i8;
            }
        } else {
            det[DUMP].process(msg, 0.0, 0.0, rng)?;
            out.received[DUMP] += 1;
        }
        out.records.push(EventRecord {
            event_index: n,
            station: 0,
            outcome,
            time_tag: 0.0,
            setting: r as f64,
            sweep_value: ctx.sweep_value,
        });
    }
    Ok((out, det))
}

pub(super) fn table(s: &WheelerSetup, points: &[PointOutput]) -> Table {
    let mut t = Table::new(&[
        "f_delta_t", "emitted", "d0_r0", "d1_r0", "d0_r1", "d1_r1", "d0_fraction_r0", "d0_fraction_r1", "oracle_r0", "oracle_r1",
    ]);
    for p in points {
        let c = &p.counts;
        t.push(vec![
            Cell::Real(p.sweep_value),
            int(p.emitted),
            int(c[0]),
            int(c[1]),
            int(c[2]),
            int(c[3]),
            ratio(c[0], c[0] + c[1]),
            ratio(c[2], c[2] + c[3]),
            Cell::Real(wheeler_oracle(0.0, s.xi, p.sweep_value).0),
            Cell::Real(wheeler_oracle(s.theta_eom, s.xi, p.sweep_value).0),
        ]);
    }
    t
}

pub(super) fn oracle(cfg: &ExperimentConfig, s: &WheelerSetup) -> OracleCurve {
    let r0: Vec<f64> = cfg.sweep.iter().map(|&x| wheeler_oracle(0.0, s.xi, x).0).collect();
    let r1: Vec<f64> = cfg.sweep.iter().map(|&x| wheeler_oracle(s.theta_eom, s.xi, x).0).collect();
    super::curve("wheeler", "f_delta_t", cfg.sweep.clone(), vec![("d0_r0", r0), ("d0_r1", r1)])
}
