//! Processing units: dielectric interface, beam splitters, wave plates,
//! ideal mirror, lumped tunneling gap and the single-photon detector.
//!
//! Adaptive units keep a two-component frequency vector and one message
//! register per input port. Four-component vectors are laid out as
//! `(Y₀,S, Y₁,S, Y₀,P, Y₁,P)`: component-major, port-minor.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng as _;

use crate::dlm::VectorDlm;
use crate::error::{domain, Result};
use crate::math::{asin, cos, exp, fabs, floor, pow, sin, sqrt, step};
use crate::messaging::Message;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Intensity below which an output row counts as empty.
const EMPTY_ROW: f64 = 1e-15;

/// Polarization channel relative to the plane of incidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    S,
    P,
}

/// Result of applying Snell's law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Refraction {
    Refracted(f64),
    TotalInternalReflection,
}

/// Refraction angle for a ray going from index `n1` into index `n2`.
pub fn snell_refract(theta1: f64, n1: f64, n2: f64) -> Result<Refraction> {
    if !(0.0..PI / 2.0).contains(&theta1) {
        return Err(domain(alloc::format!("incidence angle must lie in [0, π/2), got {theta1}")));
    }
    if !(n1 > 0.0) || !(n2 > 0.0) {
        return Err(domain("refractive indices must be positive"));
    }
    let s = n1 * sin(theta1) / n2;
    if s > 1.0 {
        Ok(Refraction::TotalInternalReflection)
    } else {
        Ok(Refraction::Refracted(asin(s)))
    }
}

/// Energy-current amplitudes of a lossless interface; `r² + t² = 1` per channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelCoefficients {
    pub r_s: f64,
    pub t_s: f64,
    pub r_p: f64,
    pub t_p: f64,
}

impl FresnelCoefficients {
    pub fn reflectance(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::S => self.r_s * self.r_s,
            Polarization::P => self.r_p * self.r_p,
        }
    }
}

/// Amplitudes for a wave incident at `theta1` from index `n1` onto index `n2`.
pub fn fresnel_energy_coefficients(theta1: f64, n1: f64, n2: f64) -> Result<FresnelCoefficients> {
    let theta2 = match snell_refract(theta1, n1, n2)? {
        Refraction::Refracted(t) => t,
        Refraction::TotalInternalReflection => {
            return Err(domain(
                "total internal reflection: model the boundary with the tunneling gap unit",
            ))
        }
    };
    let q1 = cos(theta1);
    let q4 = cos(theta2);
    let root = 2.0 * sqrt(n1 * n2 * q1 * q4);
    let ds = n1 * q1 + n2 * q4;
    let dp = n1 * q4 + n2 * q1;
    Ok(FresnelCoefficients {
        r_s: (n1 * q1 - n2 * q4) / ds,
        t_s: root / ds,
        r_p: (n1 * q4 - n2 * q1) / dp,
        t_p: root / dp,
    })
}

/// Transmittance through a vacuum gap of width `w` between two half-spaces of
/// index `n`, for internal angle `theta` beyond the critical angle.
///
/// Two-interface Airy sum with the imaginary refraction cosine of the
/// evanescent field in the gap.
pub fn gap_transmittance(w: f64, n: f64, theta: f64, pol: Polarization) -> Result<f64> {
    if !(w >= 0.0) {
        return Err(domain("gap width must be non-negative"));
    }
    if !(n > 1.0) || !(0.0..PI / 2.0).contains(&theta) {
        return Err(domain("gap unit needs prism index n > 1 and an angle in [0, π/2)"));
    }
    let kappa_sq = n * n * sin(theta) * sin(theta) - 1.0;
    if !(kappa_sq > 0.0) {
        return Err(domain("gap unit requires an internal angle above the critical angle"));
    }
    let cos_gap = Complex64::new(0.0, sqrt(kappa_sq));
    let c1 = Complex64::new(cos(theta), 0.0);
    let nn = Complex64::new(n, 0.0);
    let r12 = match pol {
        Polarization::S => (nn * c1 - cos_gap) / (nn * c1 + cos_gap),
        Polarization::P => (c1 - nn * cos_gap) / (c1 + nn * cos_gap),
    };
    // Round-trip factor e^{2iβ} with β = 2π w cos θ_gap, real and decaying.
    let round_trip = Complex64::new(exp(-2.0 * TAU * w * sqrt(kappa_sq)), 0.0);
    let r = r12 * (ONE - round_trip) / (ONE - r12 * r12 * round_trip);
    Ok((1.0 - r.norm_sqr()).clamp(0.0, 1.0))
}

/// 4×4 transformation acting on `(Y₀,S, Y₁,S, Y₀,P, Y₁,P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transform(pub [[Complex64; 4]; 4]);

impl Transform {
    /// Block-diagonal transform from per-channel 2×2 port blocks.
    pub fn from_blocks(s: [[Complex64; 2]; 2], p: [[Complex64; 2]; 2]) -> Self {
        let mut m = [[ZERO; 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                m[a][b] = s[a][b];
                m[2 + a][2 + b] = p[a][b];
            }
        }
        Self(m)
    }

    /// Real interface pattern `[[r, t], [t, −r]]` per channel.
    pub fn from_energy_amplitudes(c: &FresnelCoefficients) -> Self {
        let re = |v: f64| Complex64::new(v, 0.0);
        Self::from_blocks(
            [[re(c.r_s), re(c.t_s)], [re(c.t_s), re(-c.r_s)]],
            [[re(c.r_p), re(c.t_p)], [re(c.t_p), re(-c.r_p)]],
        )
    }

    pub fn beam_splitter() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let b = [[h, h * I], [h * I, h]];
        Self::from_blocks(b, b)
    }

    /// Passes S straight through (port k → k), swaps P between ports.
    pub fn polarizing_beam_splitter() -> Self {
        Self::from_blocks([[ONE, ZERO], [ZERO, ONE]], [[ZERO, I], [I, ZERO]])
    }

    pub fn apply(&self, y: &[Complex64; 4]) -> [Complex64; 4] {
        let mut z = [ZERO; 4];
        for (zi, row) in z.iter_mut().zip(&self.0) {
            *zi = row.iter().zip(y).map(|(a, b)| a * b).sum();
        }
        z
    }

    /// Largest entry of `T·T† − 1` in absolute value.
    pub fn unitarity_error(&self) -> f64 {
        let m = &self.0;
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut s = ZERO;
                for k in 0..4 {
                    s += m[i][k] * m[j][k].conj();
                }
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

/// Two-port adaptive unit: input DLM stage, transformation stage, output stage.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceUnit {
    dlm: VectorDlm,
    registers: [Message; 2],
    transform: Transform,
}

impl InterfaceUnit {
    pub fn new(transform: Transform, gamma: f64) -> Result<Self> {
        Ok(Self {
            dlm: VectorDlm::uniform(2, gamma)?,
            registers: [Message::polarized(0.0); 2],
            transform,
        })
    }

    pub fn x(&self) -> &[f64] {
        self.dlm.x()
    }

    pub fn registers(&self) -> &[Message; 2] {
        &self.registers
    }

    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    /// Absorbs one messenger on `port` and emits exactly one, returning its
    /// output port and message.
    pub fn process(&mut self, port: usize, msg: Message, rng: &mut crate::Rng) -> Result<(usize, Message)> {
        if port > 1 {
            return Err(domain(alloc::format!("two-port unit has no input port {port}")));
        }
        self.registers[port] = msg;
        self.dlm.step_one_hot(port)?;
        let x = self.dlm.x();
        let (s0, s1) = (Complex64::new(sqrt(x[0]), 0.0), Complex64::new(sqrt(x[1]), 0.0));
        let [y0, y1] = self.registers;
        let weighted = [s0 * y0.c1, s1 * y1.c1, s0 * y0.c2, s1 * y1.c2];
        let z = self.transform.apply(&weighted);
        let rows = [Message::new(z[0], z[2]), Message::new(z[1], z[3])];
        let intensity = [rows[0].norm_sqr(), rows[1].norm_sqr()];
        let r = rng.random::<f64>();
        if intensity[0] < EMPTY_ROW && intensity[1] < EMPTY_ROW {
            return Ok((0, msg));
        }
        let mut out = usize::from(step(intensity[1] - r));
        // Only reachable through the tie r = 0 with an empty port-1 row.
        if intensity[out] < EMPTY_ROW {
            out = 1 - out;
        }
        let normalized = rows[out].normalized().ok_or_else(|| domain("output message has zero norm"))?;
        Ok((out, normalized))
    }
}

/// Interface between media `n1` (port 0 side) and `n2` (port 1 side) for
/// incidence angle `theta1` on the `n1` side.
pub fn make_interface_unit(theta1: f64, n1: f64, n2: f64, gamma: f64) -> Result<InterfaceUnit> {
    let c = fresnel_energy_coefficients(theta1, n1, n2)?;
    InterfaceUnit::new(Transform::from_energy_amplitudes(&c), gamma)
}

pub fn make_bs_unit(gamma: f64) -> Result<InterfaceUnit> {
    InterfaceUnit::new(Transform::beam_splitter(), gamma)
}

pub fn make_pbs_unit(gamma: f64) -> Result<InterfaceUnit> {
    InterfaceUnit::new(Transform::polarizing_beam_splitter(), gamma)
}

/// Two-prism tunneling system as one lumped unit: output port 0 carries the
/// totally reflected messengers, port 1 the tunneled ones.
pub fn make_gap_unit(w: f64, n: f64, theta: f64, gamma: f64) -> Result<InterfaceUnit> {
    let ts = gap_transmittance(w, n, theta, Polarization::S)?;
    let tp = gap_transmittance(w, n, theta, Polarization::P)?;
    let c = FresnelCoefficients {
        r_s: sqrt(1.0 - ts),
        t_s: sqrt(ts),
        r_p: sqrt(1.0 - tp),
        t_p: sqrt(tp),
    };
    InterfaceUnit::new(Transform::from_energy_amplitudes(&c), gamma)
}

/// Stateless retarders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waveplate {
    Half,
    Quarter,
}

pub fn hwp_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (c, s) = (cos(2.0 * theta), sin(2.0 * theta));
    let m = -I;
    [[m * c, m * s], [m * s, -m * c]]
}

pub fn qwp_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let (c, s) = (cos(2.0 * theta), sin(2.0 * theta));
    let h = FRAC_1_SQRT_2;
    [
        [Complex64::new(h, -h * c), Complex64::new(0.0, -h * s)],
        [Complex64::new(0.0, -h * s), Complex64::new(h, h * c)],
    ]
}

pub fn apply2(m: &[[Complex64; 2]; 2], msg: &Message) -> Message {
    Message::new(m[0][0] * msg.c1 + m[0][1] * msg.c2, m[1][0] * msg.c1 + m[1][1] * msg.c2)
}

/// Wave plate with optic axis at angle `theta` to the laboratory frame.
pub fn waveplate_apply(kind: Waveplate, theta: f64, msg: &Message) -> Message {
    let m = match kind {
        Waveplate::Half => hwp_matrix(theta),
        Waveplate::Quarter => qwp_matrix(theta),
    };
    apply2(&m, msg)
}

/// Ideal mirror with unit surface normal `normal`: specular reflection of the
/// direction and a sign flip of the P component.
pub fn mirror_apply(msg: &Message, direction: [f64; 2], normal: [f64; 2]) -> (Message, [f64; 2]) {
    let dot = direction[0] * normal[0] + direction[1] * normal[1];
    let reflected = [direction[0] - 2.0 * dot * normal[0], direction[1] - 2.0 * dot * normal[1]];
    (Message::new(msg.c1, -msg.c2), reflected)
}

/// Bins arrival directions into detector input ports.
///
/// The acceptance arc is `center ± half_width`; it is split into `ports`
/// equal angular bins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortMapper {
    pub center: f64,
    pub half_width: f64,
    pub ports: usize,
}

impl PortMapper {
    pub fn new(center: f64, half_width: f64, ports: usize) -> Result<Self> {
        if ports == 0 {
            return Err(domain("detector needs at least one input port"));
        }
        if !(half_width > 0.0 && half_width <= PI) {
            return Err(domain("acceptance half-width must lie in (0, π]"));
        }
        Ok(Self { center, half_width, ports })
    }

    /// Accepts every direction with a single port.
    pub fn single() -> Self {
        Self { center: 0.0, half_width: PI, ports: 1 }
    }

    pub fn port(&self, direction: f64) -> Result<usize> {
        let mut offset = (direction - self.center) % TAU;
        if offset > PI {
            offset -= TAU;
        } else if offset <= -PI {
            offset += TAU;
        }
        if fabs(offset) > self.half_width {
            return Err(domain(alloc::format!(
                "arrival direction {direction} outside the acceptance arc {} ± {}",
                self.center,
                self.half_width
            )));
        }
        let f = (offset + self.half_width) / (2.0 * self.half_width);
        let k = floor(f * self.ports as f64) as usize;
        Ok(k.min(self.ports - 1))
    }
}

/// Extra click delay `r′·t_max·(1 − |T|²)^h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayModel {
    pub t_max: f64,
    pub h: f64,
}

/// Outcome of one detector event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub click: bool,
    /// `|T|²` after the update.
    pub intensity: f64,
    /// Arrival time plus delay, present for clicks.
    pub click_time: Option<f64>,
}

/// Single-photon detector with `N_p` input ports.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorUnit {
    dlm: VectorDlm,
    registers: Vec<Message>,
    mapper: PortMapper,
    count: u64,
    received: u64,
    delay: Option<DelayModel>,
}

impl DetectorUnit {
    pub fn new(mapper: PortMapper, gamma_hat: f64, delay: Option<DelayModel>) -> Result<Self> {
        Ok(Self {
            dlm: VectorDlm::uniform(mapper.ports, gamma_hat)?,
            registers: vec![Message::polarized(0.0); mapper.ports],
            mapper,
            count: 0,
            received: 0,
            delay,
        })
    }

    /// One-port detector: clicks on every messenger once its register is filled.
    pub fn single(gamma_hat: f64) -> Result<Self> {
        Self::new(PortMapper::single(), gamma_hat, None)
    }

    pub fn x(&self) -> &[f64] {
        self.dlm.x()
    }

    pub fn registers(&self) -> &[Message] {
        &self.registers
    }

    pub fn mapper(&self) -> &PortMapper {
        &self.mapper
    }

    /// Number of clicks so far.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Number of messengers absorbed so far.
    pub fn received(&self) -> u64 {
        self.received
    }

    pub fn process(&mut self, msg: Message, direction: f64, arrival_tof: f64, rng: &mut crate::Rng) -> Result<Detection> {
        let k = self.mapper.port(direction)?;
        self.dlm.step_one_hot(k)?;
        self.registers[k] = msg;
        let mut t = [ZERO; 2];
        for (xk, y) in self.dlm.x().iter().zip(&self.registers) {
            t[0] += y.c1 * *xk;
            t[1] += y.c2 * *xk;
        }
        let intensity = t[0].norm_sqr() + t[1].norm_sqr();
        let r = rng.random::<f64>();
        let click = step(intensity - r) == 1;
        self.received += 1;
        let click_time = if click {
            self.count += 1;
            Some(match self.delay {
                Some(d) => {
                    let extra = rng.random::<f64>() * d.t_max * pow((1.0 - intensity).max(0.0), d.h);
                    arrival_tof + extra
                }
                None => arrival_tof,
            })
        } else {
            None
        };
        Ok(Detection { click, intensity, click_time })
    }
}
