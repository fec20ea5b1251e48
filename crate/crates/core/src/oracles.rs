//! Closed-form wave-theory predictions used as references for the event
//! simulations. Nothing here touches the event machinery.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::math::{asin, cos, sin, sinc, sqrt};
use crate::optics::Polarization;

/// A predicted curve over a sweep, possibly with several channels.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCurve {
    pub label: String,
    pub sweep_name: String,
    pub sweep: Vec<f64>,
    pub channel_names: Vec<String>,
    /// `channels[c][i]` is channel `c` at `sweep[i]`.
    pub channels: Vec<Vec<f64>>,
}

fn refraction_cosine(theta: f64, n1: f64, n2: f64) -> Result<f64> {
    let s = n1 * sin(theta) / n2;
    if s > 1.0 {
        return Err(domain("total internal reflection"));
    }
    Ok(sqrt(1.0 - s * s))
}

/// Plain amplitude reflection coefficient (not energy-normalized).
fn amplitude_r(theta: f64, n1: f64, n2: f64, pol: Polarization) -> Result<f64> {
    let ci = cos(theta);
    let ct = refraction_cosine(theta, n1, n2)?;
    Ok(match pol {
        Polarization::S => (n1 * ci - n2 * ct) / (n1 * ci + n2 * ct),
        Polarization::P => (n2 * ci - n1 * ct) / (n2 * ci + n1 * ct),
    })
}

/// Reflectance of a single interface.
pub fn fresnel_oracle(theta: f64, n1: f64, n2: f64, pol: Polarization) -> Result<f64> {
    let r = amplitude_r(theta, n1, n2, pol)?;
    Ok(r * r)
}

/// Reflectance for a linear polarization at angle `xi` (0 = S, π/2 = P).
pub fn fresnel_oracle_polarized(theta: f64, n1: f64, n2: f64, xi: f64) -> Result<f64> {
    let c = cos(xi);
    let s = sin(xi);
    Ok(c * c * fresnel_oracle(theta, n1, n2, Polarization::S)? + s * s * fresnel_oracle(theta, n1, n2, Polarization::P)?)
}

/// Reflectance of a film of index `n2` and thickness `h` between media `n1`
/// and `n3`.
///
/// Summing the multiply reflected partial waves gives
/// `r = (r₁₂ + r₂₃e^{2iβ}) / (1 + r₁₂r₂₃e^{2iβ})` with phase thickness
/// `β = 2π n₂ h cos θ₂`, where `θ₂` is the refraction angle inside the film.
pub fn plate_oracle(theta: f64, n1: f64, n2: f64, n3: f64, h: f64, pol: Polarization) -> Result<f64> {
    if !(h >= 0.0) {
        return Err(domain("film thickness must be non-negative"));
    }
    let s2 = n1 * sin(theta) / n2;
    if s2 > 1.0 {
        return Err(domain("total internal reflection at the first surface"));
    }
    let theta2 = asin(s2);
    let r12 = amplitude_r(theta, n1, n2, pol)?;
    let r23 = amplitude_r(theta2, n2, n3, pol)?;
    let beta = TAU * n2 * h * cos(theta2);
    let e = Complex64::cis(2.0 * beta);
    let r = (Complex64::new(r12, 0.0) + e * r23) / (Complex64::new(1.0, 0.0) + e * (r12 * r23));
    Ok(r.norm_sqr())
}

/// Far-field two-slit intensity `sinc²(qa sinθ/2)·cos²(qd sinθ/2)` with
/// `q = 2π` in units where lengths are measured in wavelengths.
pub fn two_beam_oracle(theta: f64, a: f64, d: f64) -> f64 {
    let s = sin(theta);
    let env = sinc(a * s);
    let c = cos(PI * d * s);
    env * env * c * c
}

/// Detection probabilities of the Mach-Zehnder interferometer.
pub fn mzi_oracle(phi0: f64, phi1: f64) -> (f64, f64) {
    let h = 0.5 * (phi0 - phi1);
    (sin(h) * sin(h), cos(h) * cos(h))
}

/// Same as [`mzi_oracle`], evaluated as the product of the beam-splitter and
/// phase matrices acting on a photon entering port 0.
pub fn mzi_matrix_oracle(phi0: f64, phi1: f64) -> (f64, f64) {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let i = Complex64::i();
    let a = [[h, h * i], [h * i, h]];
    let b = [Complex64::cis(phi0), Complex64::cis(phi1)];
    let mut p = [0.0; 2];
    for (k, pk) in p.iter_mut().enumerate() {
        let amp: Complex64 = (0..2).map(|j| a[k][j] * b[j] * a[j][0]).sum();
        *pk = amp.norm_sqr();
    }
    (p[0], p[1])
}

/// Wheeler delayed-choice detector intensities for source polarization `xi`,
/// EOM half-wave angle `theta_eom` and phase difference `2π·fdt`.
pub fn wheeler_oracle(theta_eom: f64, xi: f64, fdt: f64) -> (f64, f64) {
    let (c, s) = (cos(2.0 * theta_eom), sin(2.0 * theta_eom));
    let (cx, sx) = (cos(xi), sin(xi));
    let i0 = c * c * cx * cx + s * s * sx * sx - 2.0 * c * s * cx * sx * cos(TAU * fdt);
    (i0, 1.0 - i0)
}

/// Eraser intensities `(I0, I1)` as printed, with `x = 2π·fdt` the phase
/// difference between the two arms.
pub fn eraser_oracle(theta0: f64, theta1: f64, theta2: f64, fdt: f64) -> (f64, f64) {
    eraser_terms(theta0, theta1, theta2, fdt, theta2)
}

/// Eraser intensities with the `I1` term `cos 4θ₂` replaced by `cos 4θ₁`,
/// which is what the optical network actually produces.
pub fn eraser_oracle_corrected(theta0: f64, theta1: f64, theta2: f64, fdt: f64) -> (f64, f64) {
    eraser_terms(theta0, theta1, theta2, fdt, theta1)
}

fn eraser_terms(t0: f64, t1: f64, t2: f64, fdt: f64, i1_angle: f64) -> (f64, f64) {
    let x = TAU * fdt;
    let common = cos(4.0 * (t2 - t1)) + cos(4.0 * (t2 - t1 - t0)) + cos(4.0 * (t1 - t0));
    let cross = 4.0 * cos(x) * sin(2.0 * t2 - 4.0 * t1) * sin(2.0 * t0);
    let bracket = cos(4.0 * t2 - 4.0 * t1 - 2.0 * t0) + cos(4.0 * t1 - 2.0 * t0);
    let i0 = (4.0 - common - cos(4.0 * t1) + cross - 2.0 * sin(x) * (bracket - 2.0 * cos(2.0 * t0))) / 16.0;
    let i1 = (4.0 + common + cos(4.0 * i1_angle) - cross + 2.0 * sin(x) * (bracket + 2.0 * cos(2.0 * t0))) / 16.0;
    (i0, i1)
}

/// Two-photon polarization states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairState {
    Singlet,
    Product,
}

/// Single-particle averages, two-particle expectation and correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlations {
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
    pub rho12: f64,
}

pub fn eprb_oracle(state: PairState, alpha1: f64, alpha2: f64, eta1: f64, eta2: f64) -> Correlations {
    match state {
        PairState::Singlet => {
            let e12 = -cos(2.0 * (alpha1 - alpha2));
            Correlations { e1: 0.0, e2: 0.0, e12, rho12: e12 }
        }
        PairState::Product => {
            let e1 = cos(2.0 * (alpha1 - eta1));
            let e2 = cos(2.0 * (alpha2 - eta2));
            Correlations { e1, e2, e12: e1 * e2, rho12: 0.0 }
        }
    }
}

/// Intensity-interferometry expectations for `n_tot` pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbtPrediction {
    pub singles: f64,
    pub coincidences: f64,
    pub visibility: f64,
}

/// `N/2` singles per detector and `N/8 (1 + ½ cos 2πfΔT)` coincidences.
pub fn hbt_oracle(fdt: f64, n_tot: f64) -> HbtPrediction {
    let max = n_tot / 8.0 * 1.5;
    let min = n_tot / 8.0 * 0.5;
    HbtPrediction {
        singles: n_tot / 2.0,
        coincidences: n_tot / 8.0 * (1.0 + 0.5 * cos(TAU * fdt)),
        visibility: (max - min) / (max + min),
    }
}

/// Transmittance of a vacuum gap of width `w` between two prisms of index `n`
/// at internal angle `theta`, from the characteristic matrix of the gap layer.
///
/// The layer matrix is `[[cos δ, −i sin δ / p], [−i p sin δ, cos δ]]` with
/// `δ = 2π w cos θ_g`. The admittance is `n cos θ` for S and `cos θ / n` for P;
/// in the unit-index gap both reduce to `cos θ_g`. The amplitude transmission
/// between identical media of admittance `p₁` is
/// `2p₁ / ((m₁₁ + m₁₂p₁)p₁ + m₂₁ + m₂₂p₁)`.
pub fn ftir_oracle(w: f64, n: f64, theta: f64, pol: Polarization) -> Result<f64> {
    if !(w >= 0.0) {
        return Err(domain("gap width must be non-negative"));
    }
    let sin_g = n * sin(theta);
    if !(sin_g > 1.0) {
        return Err(domain("internal angle must exceed the critical angle"));
    }
    let cos_g = Complex64::new(0.0, sqrt(sin_g * sin_g - 1.0));
    let cos_1 = Complex64::new(cos(theta), 0.0);
    let nn = Complex64::new(n, 0.0);
    let (p1, pg) = match pol {
        Polarization::S => (nn * cos_1, cos_g),
        Polarization::P => (cos_1 / nn, cos_g),
    };
    let delta = cos_g * (TAU * w);
    let i = Complex64::i();
    let m11 = delta.cos();
    let m12 = -i * delta.sin() / pg;
    let m21 = -i * pg * delta.sin();
    let m22 = delta.cos();
    let t = p1 * 2.0 / ((m11 + m12 * p1) * p1 + (m21 + m22 * p1));
    Ok(t.norm_sqr())
}
