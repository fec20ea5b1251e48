use alloc::vec;
use alloc::vec::Vec;

use rand::Rng as _;

use super::{detect, pair, single_port_detectors, Cell, DetectorBank, EprbSetup, EventRecord, ExperimentConfig, PointContext, PointOutput, Table};
use crate::analysis::{correlation, count_coincidences, single_particle_averages, CoincidenceTable};
use crate::error::{config, Result};
use crate::math::{fabs, pow, sin};
use crate::messaging::{Source, SourceSpec};
use crate::optics::{make_pbs_unit, waveplate_apply, Waveplate};
use crate::oracles::{eprb_oracle, OracleCurve, PairState};

pub(super) fn validate(s: &EprbSetup) -> Result<()> {
    if !(s.t_eprb > 0.0) {
        return Err(config("T_eprb must be positive"));
    }
    if !(s.tag_exponent >= 0.0) {
        return Err(config("time-tag exponent d must be non-negative"));
    }
    if s.windows.is_empty() || s.windows.iter().any(|w| !(*w > 0.0)) {
        return Err(config("coincidence windows must be positive"));
    }
    if s.alpha2.is_empty() {
        return Err(config("station 2 needs at least one setting"));
    }
    Ok(())
}

/// Pairs of messengers travel to two stations. At each station a random
/// setting α is drawn, the EOM (a half-wave plate at α/2) rotates the
/// polarization, a PBS sends the messenger to the +1 (port 0) or −1 (port 1)
/// detector, and the event gets a time tag uniform in
/// `[0, T·|sin 2(ξ − α)|^{2d}]` with ξ the emitted polarization.
pub(super) fn run(
    ctx: &PointContext<'_>,
    s: &EprbSetup,
    carried: Option<DetectorBank>,
    rng: &mut crate::Rng,
) -> Result<(PointOutput, DetectorBank)> {
    let cfg = ctx.cfg;
    let spec = match s.state {
        PairState::Singlet => SourceSpec::OppositeRandomPolarization,
        PairState::Product => SourceSpec::FixedProductPolarization { eta1: s.eta1, eta2: s.eta2 },
    };
    let mut source = Source::new(spec)?;
    let mut pbs = [make_pbs_unit(cfg.gamma)?, make_pbs_unit(cfg.gamma)?];
    let mut det = single_port_detectors(carried, 4, cfg.gamma_hat)?;
    let mut out = PointOutput { counts: vec![0; 4], received: vec![0; 4], ..PointOutput::default() };
    out.records.reserve(2 * cfg.events_per_point as usize);
    for n in 0..cfg.events_per_point {
        let (m1, m2) = pair(source.emit(rng))?;
        out.emitted += 1;
        let settings = [cfg.sweep[rng.random_range(0..cfg.sweep.len())], s.alpha2[rng.random_range(0..s.alpha2.len())]];
        for (station, m) in [m1, m2].into_iter().enumerate() {
            let alpha = settings[station];
            let msg = waveplate_apply(Waveplate::Half, 0.5 * alpha, &m.msg);
            let (port, msg) = pbs[station].process(0, msg, rng)?;
            let scale = pow(fabs(sin(2.0 * (m.polarization - alpha))), 2.0 * s.tag_exponent);
            let tag = rng.random::<f64>() * s.t_eprb * scale;
            let k = 2 * station + port;
            let clicked = detect(&mut det, k, msg, 0.0, tag, &mut out, k, rng)?.click;
            let outcome = match (clicked, port) {
                (false, _) => 0,
                (true, 0) => 1,
                (true, _) => -1,
            };
            out.records.push(EventRecord { event_index: n, station: station as u8, outcome, time_tag: tag, setting: alpha, sweep_value: ctx.sweep_value });
        }
    }
    Ok((out, det))
}

/// Splits a record stream into the station-0 and station-1 streams.
pub fn split_stations(records: &[EventRecord]) -> (Vec<EventRecord>, Vec<EventRecord>) {
    records.iter().partition(|r| r.station == 0)
}

/// Correlations for one coincidence window and setting pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EprbCorrelation {
    pub table: CoincidenceTable,
    /// `(E1, E2, E12, ρ12)`, absent when the table is empty.
    pub values: Option<(f64, f64, f64, f64)>,
}

/// Coincidence tables and correlations for one window.
pub fn eprb_correlations(records: &[EventRecord], window: f64) -> Result<Vec<EprbCorrelation>> {
    let (a, b) = split_stations(records);
    let tables = count_coincidences(&a, &b, window)?;
    Ok(tables
        .into_iter()
        .map(|t| {
            let values = match (single_particle_averages(&t), correlation(&t)) {
                (Ok((e1, e2)), Ok((e12, rho))) => Some((e1, e2, e12, rho)),
                _ => None,
            };
            EprbCorrelation { table: t, values }
        })
        .collect())
}

/// Correlations for every configured window followed by the unbounded window.
pub fn eprb_analysis(s: &EprbSetup, records: &[EventRecord]) -> Result<Vec<(f64, Vec<EprbCorrelation>)>> {
    let mut windows = s.windows.clone();
    windows.push(f64::INFINITY);
    windows.into_iter().map(|w| Ok((w, eprb_correlations(records, w)?))).collect()
}

fn undefined_or(v: Option<f64>) -> Cell {
    v.map_or(Cell::Undefined, Cell::Real)
}

pub(super) fn table(s: &EprbSetup, points: &[PointOutput]) -> Result<Table> {
    let mut t = Table::new(&[
        "window", "alpha1", "alpha2", "pairs", "c_pp", "c_pm", "c_mp", "c_mm", "e1", "e2", "e12", "rho12", "oracle_e12",
    ]);
    for p in points {
        for (w, rows) in eprb_analysis(s, &p.records)? {
            for c in rows {
                let tb = &c.table;
                let o = eprb_oracle(s.state, tb.alpha1, tb.alpha2, s.eta1, s.eta2);
                t.push(vec![
                    Cell::Real(w),
                    Cell::Real(tb.alpha1),
                    Cell::Real(tb.alpha2),
                    super::int(tb.pairs),
                    super::int(tb.pp()),
                    super::int(tb.pm()),
                    super::int(tb.mp()),
                    super::int(tb.mm()),
                    undefined_or(c.values.map(|v| v.0)),
                    undefined_or(c.values.map(|v| v.1)),
                    undefined_or(c.values.map(|v| v.2)),
                    undefined_or(c.values.map(|v| v.3)),
                    Cell::Real(o.e12),
                ]);
            }
        }
    }
    Ok(t)
}

pub(super) fn oracle(cfg: &ExperimentConfig, s: &EprbSetup) -> OracleCurve {
    let alpha2 = s.alpha2[0];
    let mut ch: [Vec<f64>; 4] = Default::default();
    for &a1 in &cfg.sweep {
        let o = eprb_oracle(s.state, a1, alpha2, s.eta1, s.eta2);
        ch[0].push(o.e1);
        ch[1].push(o.e2);
        ch[2].push(o.e12);
        ch[3].push(o.rho12);
    }
    let [e1, e2, e12, rho] = ch;
    super::curve("eprb", "alpha1", cfg.sweep.clone(), vec![("e1", e1), ("e2", e2), ("e12", e12), ("rho12", rho)])
}
