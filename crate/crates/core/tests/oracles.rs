use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};

use ebcm_core::optics::Polarization;
use ebcm_core::oracles::{
    eraser_oracle, eraser_oracle_corrected, fresnel_oracle, fresnel_oracle_polarized, ftir_oracle, hbt_oracle, mzi_matrix_oracle,
    mzi_oracle, plate_oracle, two_beam_oracle, wheeler_oracle,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

type Jones = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mul(a: &Jones, v: [Complex64; 2]) -> [Complex64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

fn half_wave(theta: f64) -> Jones {
    let (co, si) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    [[c(0.0, -co), c(0.0, -si)], [c(0.0, -si), c(0.0, co)]]
}

fn quarter_wave(theta: f64) -> Jones {
    let (co, si) = ((2.0 * theta).cos(), (2.0 * theta).sin());
    let h = 0.5f64.sqrt();
    [[c(h, -h * co), c(0.0, -h * si)], [c(0.0, -h * si), c(h, h * co)]]
}

/// Polarization vectors `[port][S, P]` after a 50-50 beam splitter.
fn beam_split(input: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let h = 0.5f64.sqrt();
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for pol in 0..2 {
        out[0][pol] = h * input[0][pol] + c(0.0, h) * input[1][pol];
        out[1][pol] = c(0.0, h) * input[0][pol] + h * input[1][pol];
    }
    out
}

#[test]
fn matrix_and_closed_form_mzi_agree_at_random_phases() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let (p0, p1) = (rng.random::<f64>() * 20.0 - 10.0, rng.random::<f64>() * 20.0 - 10.0);
        let a = mzi_oracle(p0, p1);
        let b = mzi_matrix_oracle(p0, p1);
        assert!((a.0 - b.0).abs() <= 1e-12 && (a.1 - b.1).abs() <= 1e-12);
        assert!((b.0 + b.1 - 1.0).abs() <= 1e-12);
    }
    assert!(mzi_matrix_oracle(0.4, 0.4).0.abs() < 1e-15);
}

proptest! {
    #[test]
    fn bare_film_equals_single_interface(theta in 0.0f64..1.5, n1 in 1.0f64..2.0, n2 in 1.0f64..4.0, n3 in 1.0f64..3.0, s: bool) {
        prop_assume!(n1 * theta.sin() < n2 && n1 * theta.sin() < n3);
        let pol = if s { Polarization::S } else { Polarization::P };
        let film = plate_oracle(theta, n1, n2, n3, 0.0, pol).unwrap();
        let bare = fresnel_oracle(theta, n1, n3, pol).unwrap();
        prop_assert!((film - bare).abs() <= 1e-12);
    }

    #[test]
    fn film_is_periodic_in_optical_thickness(ot in 0.0f64..2.0, s: bool) {
        let pol = if s { Polarization::S } else { Polarization::P };
        let a = plate_oracle(0.0, 1.0, 3.0, 1.5, ot / 3.0, pol).unwrap();
        let b = plate_oracle(0.0, 1.0, 3.0, 1.5, (ot + 0.5) / 3.0, pol).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn probabilities_in_unit_interval(theta in 0.0f64..1.5, xi in 0.0f64..PI, fdt in 0.0f64..1.0) {
        let r = fresnel_oracle_polarized(theta, 1.0, 1.52, xi).unwrap();
        prop_assert!((0.0..=1.0).contains(&r));
        let (w0, w1) = wheeler_oracle(FRAC_PI_8, xi, fdt);
        prop_assert!((0.0..=1.0).contains(&w0) && (w0 + w1 - 1.0).abs() < 1e-12);
        let (i0, i1) = eraser_oracle_corrected(xi, theta, 0.3, fdt);
        prop_assert!(i0 >= -1e-12 && i1 >= -1e-12 && i0 + i1 <= 1.0 + 1e-12);
    }
}

#[test]
fn quarter_wave_film_reflectance() {
    // ((n1·n3 − n2²)/(n1·n3 + n2²))² for (1, 3, 1.5) is (7.5/10.5)² = 25/49.
    let frozen = 25.0 / 49.0;
    for pol in [Polarization::S, Polarization::P] {
        let r = plate_oracle(0.0, 1.0, 3.0, 1.5, 1.0 / 12.0, pol).unwrap();
        assert!((r - frozen).abs() < 1e-12);
        assert!((r - 0.5102).abs() < 1e-4);
    }
}

#[test]
fn two_beam_first_fringe_zero() {
    let d: f64 = 5.0;
    let theta = (1.0 / (2.0 * d)).asin();
    assert!(two_beam_oracle(theta, 1.0, d) < 1e-20);
    assert!((two_beam_oracle(0.0, 1.0, d) - 1.0).abs() < 1e-15);
    assert_eq!(two_beam_oracle(0.3, 1.0, d), two_beam_oracle(-0.3, 1.0, d));
}

#[test]
fn ftir_log_slope_matches_decay_constant() {
    let (n, theta) = (1.52, FRAC_PI_4);
    let kappa = TAU * ((n * theta.sin()).powi(2) - 1.0).sqrt();
    for pol in [Polarization::S, Polarization::P] {
        let slope = (ftir_oracle(5.0, n, theta, pol).unwrap().ln() - ftir_oracle(3.0, n, theta, pol).unwrap().ln()) / 2.0;
        assert!((slope + 2.0 * kappa).abs() <= 0.01 * 2.0 * kappa, "{slope} vs {}", -2.0 * kappa);
        assert!((ftir_oracle(0.0, n, theta, pol).unwrap() - 1.0).abs() < 1e-12);
        assert!(ftir_oracle(40.0, n, theta, pol).unwrap() < 1e-30);
    }
}

#[test]
fn ftir_transmittance_decreases_with_gap() {
    for pol in [Polarization::S, Polarization::P] {
        let mut last = f64::INFINITY;
        for k in 0..=50 {
            let t = ftir_oracle(k as f64 * 0.1, 1.52, FRAC_PI_4, pol).unwrap();
            assert!(t < last);
            last = t;
        }
    }
}

/// Detector intensities of the delayed-choice network: PBS split, arms with
/// phases, PBS join, HWP at `theta_eom`, analyzing PBS.
fn wheeler_jones(theta_eom: f64, xi: f64, fdt: f64) -> f64 {
    let (s, p) = (c(xi.cos(), 0.0), c(xi.sin(), 0.0));
    // S passes the splitter straight, P is swapped into the other arm with a factor i.
    let arm0_s = s * Complex64::cis(TAU * fdt);
    let arm1_p = c(0.0, 1.0) * p;
    // At the joining PBS both arrive in output 0; P picks up a second factor i.
    let joined = [arm0_s, c(0.0, 1.0) * arm1_p];
    let after = mul(&half_wave(theta_eom), joined);
    after[0].norm_sqr()
}

#[test]
fn wheeler_formula_matches_jones_product() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
    for _ in 0..500 {
        let (t, xi, fdt) = (rng.random::<f64>() * PI, rng.random::<f64>() * PI, rng.random::<f64>());
        assert!((wheeler_oracle(t, xi, fdt).0 - wheeler_jones(t, xi, fdt)).abs() < 1e-12);
    }
    // No EOM rotation: no dependence on the delay.
    for fdt in [0.0, 0.25, 0.5] {
        assert!((wheeler_oracle(0.0, FRAC_PI_4, fdt).0 - 0.5).abs() < 1e-12);
    }
}

/// `(I0, I1)` of the eraser network for an S-polarized photon into BS1 port 0.
fn eraser_jones(t0: f64, t1: f64, t2: f64, fdt: f64) -> (f64, f64) {
    let zero = c(0.0, 0.0);
    let arms = beam_split([[c(1.0, 0.0), zero], [zero, zero]]);
    let arm0 = mul(&half_wave(t0), arms[0]);
    let phase = Complex64::cis(TAU * fdt);
    let arm0 = [arm0[0] * phase, arm0[1] * phase];
    let out = beam_split([arm0, arms[1]])[1];
    let out = mul(&half_wave(t1), mul(&quarter_wave(t2), out));
    // The analyzer sends P to D0 and S to D1.
    (out[1].norm_sqr(), out[0].norm_sqr())
}

#[test]
fn corrected_eraser_formula_matches_jones_product() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
    for _ in 0..500 {
        let t: [f64; 3] = [rng.random::<f64>() * PI, rng.random::<f64>() * PI, rng.random::<f64>() * PI];
        let fdt = rng.random::<f64>();
        let (j0, j1) = eraser_jones(t[0], t[1], t[2], fdt);
        let (c0, c1) = eraser_oracle_corrected(t[0], t[1], t[2], fdt);
        assert!((c0 - j0).abs() < 1e-12, "I0 {c0} vs {j0}");
        assert!((c1 - j1).abs() < 1e-12, "I1 {c1} vs {j1}");
        // The printed I1 differs by exactly (cos4θ2 − cos4θ1)/16.
        let (p0, p1) = eraser_oracle(t[0], t[1], t[2], fdt);
        assert_eq!(p0, c0);
        let residual = ((4.0 * t[2]).cos() - (4.0 * t[1]).cos()) / 16.0;
        assert!((p1 - c1 - residual).abs() < 1e-12);
    }
}

#[test]
fn eraser_without_hwp1_has_no_fringes() {
    // HWP0 at 45° marks the arms P and S; with HWP1 and the QWP at zero the
    // marking survives to the analyzer.
    let fractions: Vec<f64> = (0..=20)
        .map(|k| {
            let (i0, i1) = eraser_oracle_corrected(FRAC_PI_4, 0.0, 0.0, k as f64 / 20.0);
            i0 / (i0 + i1)
        })
        .collect();
    let max = fractions.iter().cloned().fold(f64::MIN, f64::max);
    let min = fractions.iter().cloned().fold(f64::MAX, f64::min);
    assert!((max - min) / (max + min) <= 0.05);
}

#[test]
fn eraser_figure_values_frozen() {
    // θ0 = π/3, θ1 = π/4, θ2 = π/8 at fΔT = 0, from the Jones product above.
    let (i0, i1) = eraser_jones(PI / 3.0, FRAC_PI_4, FRAC_PI_8, 0.0);
    let (c0, c1) = eraser_oracle_corrected(PI / 3.0, FRAC_PI_4, FRAC_PI_8, 0.0);
    assert!((i0 - c0).abs() < 1e-12 && (i1 - c1).abs() < 1e-12);
    // No oscillating cos term when θ0 = 0.
    let a = eraser_oracle(0.0, 0.0, 0.0, 0.0);
    let b = eraser_oracle(0.0, 0.0, 0.0, 0.5);
    assert!((a.0 - b.0).abs() < 1e-12);
}

#[test]
fn hbt_curve_values() {
    let n = 200_000.0;
    assert!((hbt_oracle(0.0, n).coincidences - 3.0 * n / 16.0).abs() < 1e-9);
    assert!((hbt_oracle(0.5, n).coincidences - n / 16.0).abs() < 1e-9);
    assert!((hbt_oracle(0.1, n).visibility - 0.5).abs() < 1e-15);
    assert_eq!(hbt_oracle(0.3, n).singles, n / 2.0);
}

#[test]
fn brewster_zero_for_p() {
    let tb = 1.52f64.atan();
    assert!(fresnel_oracle(tb, 1.0, 1.52, Polarization::P).unwrap() < 1e-24);
    assert!((fresnel_oracle_polarized(tb, 1.0, 1.52, FRAC_PI_2).unwrap()).abs() < 1e-12);
}
