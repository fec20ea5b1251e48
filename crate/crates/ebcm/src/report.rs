//! Analysis tables: fits and simulation-versus-oracle metrics per run.

use ebcm_core::analysis::{compare_to_oracle, fit_cosine, fit_scale, fit_slit_separation, rms, visibility};
use ebcm_core::experiments::{Cell, ExperimentConfig, PointOutput, Setup, Table};

/// `group, metric, value` rows summarizing a finished run.
pub fn analysis_table(cfg: &ExperimentConfig, points: &[PointOutput], summary: &Table) -> ebcm_core::Result<Table> {
    let mut t = Table::new(&["group", "metric", "value"]);
    let mut put = |group: &str, metric: &str, value: f64| {
        t.push(vec![Cell::Text(group.to_string()), Cell::Text(metric.to_string()), Cell::Real(value)]);
    };
    let col = |name: &str| summary.column(name).unwrap_or_default();
    match &cfg.setup {
        Setup::Indivisibility(_) => {
            let p = &points[0];
            let clicks = (p.counts[0] + p.counts[1]) as f64;
            put("all", "emitted", p.emitted as f64);
            put("all", "coincidences", p.coincidences as f64);
            put("all", "clicks_per_emission", clicks / p.emitted as f64);
            put("all", "d0_fraction", p.counts[0] as f64 / clicks);
        }
        Setup::Interface(_) | Setup::Plate(_) => {
            compare_groups(&mut put, &col("xi"), &col("reflectivity"), &col("oracle"), &detected(points));
        }
        Setup::Tunneling(_) => {
            compare_groups(&mut put, &col("xi"), &col("transmissivity"), &col("oracle"), &detected(points));
            put("all", "coincidences", points.iter().map(|p| p.coincidences).sum::<u64>() as f64);
        }
        Setup::Mzi(_) => {
            let xi = col("xi");
            compare_groups(&mut put, &xi, &col("d0_fraction"), &col("oracle_d0"), &detected(points));
            let sweep = col("f_delta_t");
            let frac = col("d0_fraction");
            for (label, rows) in groups(&xi) {
                if let Ok(fit) = fit_cosine(&pick(&sweep, &rows), &pick(&frac, &rows)) {
                    put(&label, "fit_a", fit.a);
                    put(&label, "fit_b", fit.b);
                }
            }
        }
        Setup::Wheeler(_) => {
            let sweep = col("f_delta_t");
            let r0 = col("d0_fraction_r0");
            let r1 = col("d0_fraction_r1");
            let n0: Vec<u64> = points.iter().map(|p| p.counts[0] + p.counts[1]).collect();
            let n1: Vec<u64> = points.iter().map(|p| p.counts[2] + p.counts[3]).collect();
            if let Ok(fit) = fit_cosine(&sweep, &r0) {
                put("r0", "fit_a", fit.a);
                put("r0", "cosine_amplitude", fit.a * fit.b);
            }
            if let Ok(c) = compare_to_oracle(&r0, &col("oracle_r0"), &n0) {
                put("r0", "max_abs_dev", c.max_abs_dev);
                put("r0", "rms", c.rms);
            }
            if let Ok(c) = compare_to_oracle(&r1, &col("oracle_r1"), &n1) {
                put("r1", "max_abs_dev", c.max_abs_dev);
                put("r1", "rms", c.rms);
            }
        }
        Setup::Eraser(_) => {
            let n: Vec<u64> = points.iter().map(|p| p.counts[0] + p.counts[1]).collect();
            if let Ok(c) = compare_to_oracle(&col("d0_fraction"), &col("oracle_d0_fraction"), &n) {
                put("all", "max_abs_dev", c.max_abs_dev);
                put("all", "rms", c.rms);
            }
        }
        Setup::TwoBeam(s) => {
            let p = &points[0];
            let clicks: u64 = p.counts.iter().sum();
            put("all", "clicks_per_emission", clicks as f64 / p.emitted as f64);
            let (d_fit, scale) = fit_slit_separation(&col("theta"), &col("clicks"), s.a, 0.5 * s.d, 2.0 * s.d)?;
            put("all", "fitted_separation", d_fit);
            put("all", "fitted_scale", scale);
            // Fringe period in sin θ is 1/d (units of c/f).
            put("all", "fringe_period_predicted", 1.0 / s.d);
            put("all", "fringe_period_fitted", 1.0 / d_fit);
        }
        Setup::Eprb(_) => {
            let window = col("window");
            let e12 = col("e12");
            let oracle = col("oracle_e12");
            let rho = col("rho12");
            for (label, rows) in groups(&window) {
                let (mut sim, mut ora, mut r) = (Vec::new(), Vec::new(), Vec::new());
                for &i in &rows {
                    if e12[i].is_finite() {
                        sim.push(e12[i]);
                        ora.push(oracle[i]);
                        r.push(rho[i]);
                    }
                }
                if sim.is_empty() {
                    continue;
                }
                let idx: Vec<f64> = (0..ora.len()).map(|i| i as f64).collect();
                if let Ok(amp) = fit_scale(&idx, &sim, |x| ora[x as usize]) {
                    put(&label, "fitted_amplitude", amp);
                }
                let dev: Vec<f64> = sim.iter().zip(&ora).map(|(s, o)| s - o).collect();
                put(&label, "max_abs_dev", dev.iter().fold(0.0f64, |m, d| m.max(d.abs())));
                put(&label, "rms", rms(&dev));
                put(&label, "max_abs_rho12", r.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            }
        }
        Setup::Hbt(_) => {
            let fdt = col("f_delta_t");
            let singles = col("d0");
            let coinc = col("coincidences");
            if let Ok(fit) = fit_cosine(&fdt, &singles) {
                put("singles", "fit_a", fit.a);
                put("singles", "fit_b", fit.b);
            }
            if let Ok(fit) = fit_cosine(&fdt, &coinc) {
                put("coincidences", "fit_a", fit.a);
                put("coincidences", "fit_b", fit.b);
            }
            if let Ok(v) = visibility(&coinc) {
                put("coincidences", "visibility", v);
            }
        }
    }
    Ok(t)
}

fn detected(points: &[PointOutput]) -> Vec<u64> {
    points.iter().map(|p| p.counts[0] + p.counts[1]).collect()
}

/// Row indices grouped by the value in `key`, in first-seen order.
fn groups(key: &[f64]) -> Vec<(String, Vec<usize>)> {
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, k) in key.iter().enumerate() {
        match out.iter_mut().find(|(v, _)| v.to_bits() == k.to_bits()) {
            Some((_, rows)) => rows.push(i),
            None => out.push((*k, vec![i])),
        }
    }
    out.into_iter().map(|(k, rows)| (group_label(k), rows)).collect()
}

fn group_label(v: f64) -> String {
    crate::output::format_real(v)
}

fn pick(v: &[f64], rows: &[usize]) -> Vec<f64> {
    rows.iter().map(|&i| v[i]).collect()
}

fn compare_groups(put: &mut impl FnMut(&str, &str, f64), key: &[f64], sim: &[f64], oracle: &[f64], events: &[u64]) {
    for (label, rows) in groups(key) {
        let ev: Vec<u64> = rows.iter().map(|&i| events[i].max(1)).collect();
        if let Ok(c) = compare_to_oracle(&pick(sim, &rows), &pick(oracle, &rows), &ev) {
            put(&label, "max_abs_dev", c.max_abs_dev);
            put(&label, "rms", c.rms);
            put(&label, "max_abs_z", c.z_scores.iter().fold(0.0f64, |m, z| m.max(z.abs())));
        }
    }
}
