//! Offline statistics on detection records: coincidence counting, averages
//! and correlations, visibility, curve fitting and oracle comparison.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{domain, Result};
use crate::experiments::EventRecord;
use crate::math::{cos, fabs, sqrt};
use crate::oracles::two_beam_oracle;

/// Coincidence counts for one pair of settings. `counts[i][j]` counts events
/// with outcome `+1` (`i = 0`) or `−1` (`i = 1`) at station 1 and likewise
/// `j` at station 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceTable {
    pub alpha1: f64,
    pub alpha2: f64,
    pub window: f64,
    pub counts: [[u64; 2]; 2],
    /// Number of record pairs with these settings, coincident or not.
    pub pairs: u64,
}

impl CoincidenceTable {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn pp(&self) -> u64 {
        self.counts[0][0]
    }

    pub fn pm(&self) -> u64 {
        self.counts[0][1]
    }

    pub fn mp(&self) -> u64 {
        self.counts[1][0]
    }

    pub fn mm(&self) -> u64 {
        self.counts[1][1]
    }
}

/// Row/column of an outcome; `None` for 0 (no detection).
fn outcome_index(x: i8) -> Result<Option<usize>> {
    match x {
        1 => Ok(Some(0)),
        -1 => Ok(Some(1)),
        0 => Ok(None),
        other => Err(domain(alloc::format!("outcome must be +1, -1 or 0, got {other}"))),
    }
}

/// Whether two time tags fall inside window `w`: `Θ(w − |t₁ − t₂|)`.
#[inline]
pub fn within_window(t1: f64, t2: f64, w: f64) -> bool {
    w - fabs(t1 - t2) >= 0.0
}

/// Pairs record `n` of station 1 with record `n` of station 2 and tallies
/// coincidences per setting pair, sorted by `(alpha1, alpha2)`. Records with
/// outcome 0 (no detection) never form a coincidence.
///
/// `window` must be positive; `f64::INFINITY` counts every pair.
pub fn count_coincidences(records1: &[EventRecord], records2: &[EventRecord], window: f64) -> Result<Vec<CoincidenceTable>> {
    if records1.len() != records2.len() {
        return Err(domain(alloc::format!(
            "record streams differ in length: {} vs {}",
            records1.len(),
            records2.len()
        )));
    }
    if !(window > 0.0) {
        return Err(domain("coincidence window must be positive"));
    }
    let mut tables: Vec<CoincidenceTable> = Vec::new();
    for (a, b) in records1.iter().zip(records2) {
        let i = outcome_index(a.outcome)?;
        let j = outcome_index(b.outcome)?;
        let pos = match tables.iter().position(|t| t.alpha1 == a.setting && t.alpha2 == b.setting) {
            Some(p) => p,
            None => {
                tables.push(CoincidenceTable {
                    alpha1: a.setting,
                    alpha2: b.setting,
                    window,
                    counts: [[0; 2]; 2],
                    pairs: 0,
                });
                tables.len() - 1
            }
        };
        let t = &mut tables[pos];
        t.pairs += 1;
        if let (Some(i), Some(j)) = (i, j) {
            if within_window(a.time_tag, b.time_tag, window) {
                t.counts[i][j] += 1;
            }
        }
    }
    tables.sort_by(|p, q| p.alpha1.total_cmp(&q.alpha1).then(p.alpha2.total_cmp(&q.alpha2)));
    Ok(tables)
}

fn nonempty(table: &CoincidenceTable) -> Result<f64> {
    let n = table.total();
    if n == 0 {
        Err(domain("coincidence table is empty"))
    } else {
        Ok(n as f64)
    }
}

/// `(E1, E2)`: single-particle averages over coincident events.
pub fn single_particle_averages(table: &CoincidenceTable) -> Result<(f64, f64)> {
    let n = nonempty(table)?;
    let c = |i: usize, j: usize| table.counts[i][j] as f64;
    let e1 = (c(0, 0) + c(0, 1) - c(1, 0) - c(1, 1)) / n;
    let e2 = (c(0, 0) + c(1, 0) - c(0, 1) - c(1, 1)) / n;
    Ok((e1, e2))
}

/// `(E12, ρ12)` with `ρ12 = E12 − E1·E2`.
pub fn correlation(table: &CoincidenceTable) -> Result<(f64, f64)> {
    let n = nonempty(table)?;
    let (e1, e2) = single_particle_averages(table)?;
    let e12 = ((table.pp() + table.mm()) as f64 - (table.pm() + table.mp()) as f64) / n;
    Ok((e12, e12 - e1 * e2))
}

/// `(max − min)/(max + min)` of a non-negative curve.
pub fn visibility(curve: &[f64]) -> Result<f64> {
    if curve.is_empty() {
        return Err(domain("visibility of an empty curve"));
    }
    let max = curve.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = curve.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max + min > 0.0) {
        return Err(domain("visibility needs a curve with positive sum of extremes"));
    }
    Ok((max - min) / (max + min))
}

/// Least-squares fit of `a(1 + b cos 2πx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineFit {
    pub a: f64,
    pub b: f64,
    pub rms: f64,
}

impl CosineFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.a * (1.0 + self.b * cos(TAU * x))
    }
}

/// Fits `a(1 + b cos 2πx)` by linear least squares on the basis `{1, cos 2πx}`.
pub fn fit_cosine(xs: &[f64], ys: &[f64]) -> Result<CosineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(domain("fit needs at least two (x, y) points of equal count"));
    }
    let n = xs.len() as f64;
    let (mut sc, mut scc, mut sy, mut scy) = (0.0, 0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let c = cos(TAU * x);
        sc += c;
        scc += c * c;
        sy += y;
        scy += c * y;
    }
    let det = n * scc - sc * sc;
    if fabs(det) < 1e-12 * n * n.max(scc) {
        return Err(domain("cosine basis is degenerate on these sample points"));
    }
    let c0 = (scc * sy - sc * scy) / det;
    let c1 = (n * scy - sc * sy) / det;
    if c0 == 0.0 {
        return Err(domain("fitted offset is zero; modulation depth undefined"));
    }
    let fit = CosineFit { a: c0, b: c1 / c0, rms: 0.0 };
    let resid: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - fit.eval(*x)).collect();
    Ok(CosineFit { rms: rms(&resid), ..fit })
}

/// Least-squares scale `A` of the model `y ≈ A·g(x)`.
pub fn fit_scale(xs: &[f64], ys: &[f64], g: impl Fn(f64) -> f64) -> Result<f64> {
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(domain("fit needs matching, non-empty samples"));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let gx = g(*x);
        num += gx * y;
        den += gx * gx;
    }
    if den == 0.0 {
        return Err(domain("model vanishes on all sample points"));
    }
    Ok(num / den)
}

/// Root mean square of a slice.
pub fn rms(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    sqrt(v.iter().map(|a| a * a).sum::<f64>() / v.len() as f64)
}

/// Deviation summary between a simulated and a predicted curve.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub max_abs_dev: f64,
    pub rms: f64,
    /// Binomial z-score per point.
    pub z_scores: Vec<f64>,
}

/// Compares simulated frequencies with predicted probabilities; `events[i]` is
/// the number of trials behind `sim[i]`.
///
/// The binomial variance is floored at `1/N` so that points predicted to be
/// exactly 0 or 1 still get a finite score.
pub fn compare_to_oracle(sim: &[f64], oracle: &[f64], events: &[u64]) -> Result<Comparison> {
    if sim.len() != oracle.len() || sim.len() != events.len() {
        return Err(domain("curves and event counts must have equal length"));
    }
    let dev: Vec<f64> = sim.iter().zip(oracle).map(|(s, o)| s - o).collect();
    let max_abs_dev = dev.iter().fold(0.0f64, |m, d| m.max(fabs(*d)));
    let mut z_scores = Vec::with_capacity(dev.len());
    for ((d, p), n) in dev.iter().zip(oracle).zip(events) {
        if *n == 0 {
            return Err(domain("comparison point with zero events"));
        }
        let n = *n as f64;
        let var = (p * (1.0 - p)).max(1.0 / n) / n;
        z_scores.push(d / sqrt(var));
    }
    Ok(Comparison { max_abs_dev, rms: rms(&dev), z_scores })
}

/// Least-squares fit of `A·sinc²(a sinθ)·cos²(πd sinθ)` over the source
/// separation `d`, returning `(d, A)`.
///
/// Scans `[d_min, d_max]` on a fine grid and refines by golden-section search
/// around the best grid point.
pub fn fit_slit_separation(thetas: &[f64], counts: &[f64], a: f64, d_min: f64, d_max: f64) -> Result<(f64, f64)> {
    if thetas.len() != counts.len() || thetas.len() < 3 {
        return Err(domain("fringe fit needs at least three matching samples"));
    }
    if !(d_min > 0.0 && d_max > d_min) {
        return Err(domain("fringe fit needs 0 < d_min < d_max"));
    }
    let sse = |d: f64| -> (f64, f64) {
        let scale = fit_scale(thetas, counts, |t| two_beam_oracle(t, a, d)).unwrap_or(0.0);
        let s = thetas
            .iter()
            .zip(counts)
            .map(|(t, c)| {
                let r = c - scale * two_beam_oracle(*t, a, d);
                r * r
            })
            .sum();
        (s, scale)
    };
    let steps = 2000;
    let h = (d_max - d_min) / steps as f64;
    let mut best = (f64::INFINITY, d_min);
    for k in 0..=steps {
        let d = d_min + h * k as f64;
        let (s, _) = sse(d);
        if s < best.0 {
            best = (s, d);
        }
    }
    let (mut lo, mut hi) = ((best.1 - h).max(d_min), (best.1 + h).min(d_max));
    let g = 0.5 * (sqrt(5.0) - 1.0);
    for _ in 0..100 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if sse(m1).0 < sse(m2).0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let d = 0.5 * (lo + hi);
    Ok((d, sse(d).1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(c: [[u64; 2]; 2]) -> CoincidenceTable {
        CoincidenceTable { alpha1: 0.0, alpha2: 0.0, window: 1.0, counts: c, pairs: 0 }
    }

    #[test]
    fn averages_and_correlation() {
        assert_eq!(single_particle_averages(&table([[5, 5], [5, 5]])).unwrap(), (0.0, 0.0));
        assert_eq!(single_particle_averages(&table([[7, 0], [0, 0]])).unwrap(), (1.0, 1.0));
        assert_eq!(correlation(&table([[0, 4], [6, 0]])).unwrap().0, -1.0);
        assert_eq!(correlation(&table([[3, 3], [3, 3]])).unwrap(), (0.0, 0.0));
        assert!(correlation(&table([[0, 0], [0, 0]])).is_err());
    }

    #[test]
    fn visibility_examples() {
        assert_eq!(visibility(&[2.0, 2.0, 2.0]).unwrap(), 0.0);
        assert_eq!(visibility(&[0.0, 1.0, 3.0]).unwrap(), 1.0);
        let curve: Vec<f64> = (0..101).map(|i| 1.0 + 0.5 * cos(TAU * i as f64 / 100.0)).collect();
        assert!((visibility(&curve).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cosine_fit_recovers_model() {
        let xs: Vec<f64> = (0..21).map(|i| i as f64 / 20.0 * 1.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 12.5 * (1.0 + 0.37 * cos(TAU * x))).collect();
        let f = fit_cosine(&xs, &ys).unwrap();
        assert!((f.a - 12.5).abs() < 1e-9 && (f.b - 0.37).abs() < 1e-9 && f.rms < 1e-9);
    }

    #[test]
    fn window_rejects_nonpositive() {
        assert!(count_coincidences(&[], &[], 0.0).is_err());
        assert!(count_coincidences(&[], &[], -1.0).is_err());
        assert!(count_coincidences(&[], &[], f64::INFINITY).unwrap().is_empty());
    }

    #[test]
    fn comparison_offsets() {
        let c = compare_to_oracle(&[0.3, 0.4], &[0.3, 0.4], &[100, 100]).unwrap();
        assert_eq!(c.max_abs_dev, 0.0);
        assert!(c.z_scores.iter().all(|z| *z == 0.0));
        let c = compare_to_oracle(&[0.35, 0.45], &[0.3, 0.4], &[100, 100]).unwrap();
        assert!((c.max_abs_dev - 0.05).abs() < 1e-12);
    }
}
