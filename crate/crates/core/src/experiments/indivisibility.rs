use alloc::vec;

use super::{detect, int, single, single_port_detectors, DetectorBank, IndivisibilitySetup, PointContext, PointOutput, Table};
use crate::error::Result;
use crate::messaging::{Source, SourceSpec};
use crate::optics::make_bs_unit;
use crate::oracles::OracleCurve;

/// Source → beam splitter → detectors D0 (port 0) and D1 (port 1).
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &IndivisibilitySetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let mut source = Source::new(SourceSpec::Coherent { xi: s.xi })?;
    let mut bs = make_bs_unit(cfg.gamma)?;
    let mut det = single_port_detectors(carried, 2, cfg.gamma_hat)?;
    let mut out = PointOutput { counts: vec![0; 2], received: vec![0; 2], ..PointOutput::default() };
    for _ in 0..cfg.events_per_point {
        let m = single(source.emit(rng))?;
        out.emitted += 1;
        let (port, msg) = bs.process(0, m.msg, rng)?;
        let mut clicked = [false; 2];
        clicked[port] = detect(&mut det, port, msg, 0.0, 0.0, &mut out, port, rng)?.click;
        if clicked[0] && clicked[1] {
            out.coincidences += 1;
        }
    }
    Ok((out, det))
}

pub(super) fn table(points: &[PointOutput]) -> Table {
    let mut t = Table::new(&["emitted", "d0", "d1", "coincidences", "clicks_per_emission"]);
    for p in points {
        let clicks = p.counts[0] + p.counts[1];
        t.push(vec![int(p.emitted), int(p.counts[0]), int(p.counts[1]), int(p.coincidences), super::ratio(clicks, p.emitted)]);
    }
    t
}

pub(super) fn oracle(cfg: &super::ExperimentConfig) -> OracleCurve {
    let n = cfg.events_per_point as f64;
    super::curve("indivisibility", "point", vec![0.0], vec![("d0", vec![0.5 * n]), ("d1", vec![0.5 * n]), ("coincidences", vec![0.0])])
}
