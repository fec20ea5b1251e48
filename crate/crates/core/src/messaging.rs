//! Messengers, messages, phase propagation and source models.
//!
//! Lengths are in units of c/f and times in units of 1/f, so a time of flight
//! `t` rotates the message phase by `2πt`.

use core::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rand::Rng as _;

use crate::error::{config, domain, Result};
use crate::math::{cos, fabs, sin, sqrt, asin};

/// Two complex oscillator components: index 0 is the S (perpendicular)
/// component, index 1 the P (parallel) component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Message {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl Message {
    pub const fn new(c1: Complex64, c2: Complex64) -> Self {
        Self { c1, c2 }
    }

    /// `(e^{iψ₁} cos ξ, e^{iψ₂} sin ξ)`; `ξ = 0` is pure S.
    pub fn from_angles(psi1: f64, psi2: f64, xi: f64) -> Self {
        Self {
            c1: Complex64::from_polar(cos(xi), psi1),
            c2: Complex64::from_polar(sin(xi), psi2),
        }
    }

    /// Linearly polarized message at angle `xi` with zero phase.
    pub fn polarized(xi: f64) -> Self {
        Self::from_angles(0.0, 0.0, xi)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    /// Multiplies both components by the same complex factor.
    pub fn scale(&self, f: Complex64) -> Self {
        Self { c1: self.c1 * f, c2: self.c2 * f }
    }

    /// Advances the phase of both components by `2π·tof`.
    pub fn advance(&self, tof: f64) -> Self {
        self.scale(Complex64::cis(TAU * tof))
    }

    /// Rescales to unit norm; `None` if the norm vanishes.
    pub fn normalized(&self) -> Option<Self> {
        let n = sqrt(self.norm_sqr());
        if n > 0.0 && n.is_finite() {
            Some(self.scale(Complex64::new(1.0 / n, 0.0)))
        } else {
            None
        }
    }

    pub fn components(&self) -> [Complex64; 2] {
        [self.c1, self.c2]
    }
}

/// The mobile entity of a simulation: a message plus kinematic bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Messenger {
    pub msg: Message,
    pub position: [f64; 2],
    pub direction: [f64; 2],
    pub source_id: u8,
    pub emit_index: u64,
    /// Accumulated time of flight since emission.
    pub tof: f64,
    /// Polarization angle assigned at emission.
    pub polarization: f64,
}

impl Messenger {
    pub fn new(msg: Message, position: [f64; 2], angle: f64, source_id: u8, emit_index: u64, polarization: f64) -> Self {
        Self {
            msg,
            position,
            direction: [cos(angle), sin(angle)],
            source_id,
            emit_index,
            tof: 0.0,
            polarization,
        }
    }

    /// Direction of travel as an angle from the +x axis.
    pub fn angle(&self) -> f64 {
        crate::math::atan2(self.direction[1], self.direction[0])
    }
}

/// Moves a messenger along its direction for time `dt` (speed c = 1) and
/// rotates its message phase accordingly.
pub fn propagate(m: &Messenger, dt: f64) -> Result<Messenger> {
    if !(dt >= 0.0) {
        return Err(domain(alloc::format!("propagation time must be non-negative, got {dt}")));
    }
    let mut out = *m;
    out.msg = m.msg.advance(dt);
    out.position[0] += dt * m.direction[0];
    out.position[1] += dt * m.direction[1];
    out.tof += dt;
    Ok(out)
}

/// Where the source emits from and how it prepares messages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceSpec {
    /// Identical messages along +x from the origin.
    Coherent { xi: f64 },
    /// Two slits of width `a` centered at `y = ±d/2`; emission angle uniform in [−π/2, π/2].
    SlitPair { xi: f64, a: f64, d: f64 },
    /// Two point sources at `y = ±d/2` each emitting one messenger per step,
    /// with independent random phases held for `refresh_period` steps.
    RandomPhasePair { xi: f64, d: f64, refresh_period: u32 },
    /// Pair with polarizations `(ξ, ξ + π/2)`, `ξ` uniform in [0, 2π).
    OppositeRandomPolarization,
    /// Pair with fixed polarizations `(eta1, eta2)`.
    FixedProductPolarization { eta1: f64, eta2: f64 },
}

impl SourceSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SourceSpec::SlitPair { a, d, .. } => {
                if !(a > 0.0) || !(d > 0.0) {
                    return Err(config("slit width a and separation d must be positive"));
                }
                if a > d {
                    return Err(config("slit width a must not exceed the separation d"));
                }
            }
            SourceSpec::RandomPhasePair { d, refresh_period, .. } => {
                if !(d > 0.0) {
                    return Err(config("source separation d must be positive"));
                }
                if refresh_period == 0 {
                    return Err(config("phase refresh period must be at least 1"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// One emission event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Emission {
    Single(Messenger),
    Pair(Messenger, Messenger),
}

/// A source together with the state it carries between emissions.
#[derive(Debug, Clone)]
pub struct Source {
    spec: SourceSpec,
    emitted: u64,
    phases: [f64; 2],
}

impl Source {
    pub fn new(spec: SourceSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec, emitted: 0, phases: [0.0; 2] })
    }

    pub fn spec(&self) -> &SourceSpec {
        &self.spec
    }

    /// Number of emission events so far.
    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Current phases of a random-phase pair source.
    pub fn phases(&self) -> [f64; 2] {
        self.phases
    }

    pub fn emit(&mut self, rng: &mut crate::Rng) -> Emission {
        let index = self.emitted;
        self.emitted += 1;
        match self.spec {
            SourceSpec::Coherent { xi } => {
                Emission::Single(Messenger::new(Message::polarized(xi), [0.0, 0.0], 0.0, 0, index, xi))
            }
            SourceSpec::SlitPair { xi, a, d } => {
                let u = rng.random::<f64>() * 2.0 * a;
                let y = if u < a { -0.5 * d - 0.5 * a + u } else { 0.5 * d - 0.5 * a + (u - a) };
                let beta = (rng.random::<f64>() - 0.5) * PI;
                let id = u8::from(y > 0.0);
                Emission::Single(Messenger::new(Message::polarized(xi), [0.0, y], beta, id, index, xi))
            }
            SourceSpec::RandomPhasePair { xi, d, refresh_period } => {
                if index % u64::from(refresh_period) == 0 {
                    self.phases = [rng.random::<f64>() * TAU, rng.random::<f64>() * TAU];
                }
                let make = |n: u8| {
                    let msg = Message::polarized(xi).scale(Complex64::cis(self.phases[usize::from(n)]));
                    let y = (1.0 - 2.0 * f64::from(n)) * 0.5 * d;
                    Messenger::new(msg, [0.0, y], 0.0, n, index, xi)
                };
                Emission::Pair(make(0), make(1))
            }
            SourceSpec::OppositeRandomPolarization => {
                let xi = rng.random::<f64>() * TAU;
                self.pair(index, xi, xi + FRAC_PI_2)
            }
            SourceSpec::FixedProductPolarization { eta1, eta2 } => self.pair(index, eta1, eta2),
        }
    }

    fn pair(&self, index: u64, xi1: f64, xi2: f64) -> Emission {
        Emission::Pair(
            Messenger::new(Message::polarized(xi1), [0.0, 0.0], PI, 0, index, xi1),
            Messenger::new(Message::polarized(xi2), [0.0, 0.0], 0.0, 1, index, xi2),
        )
    }
}

/// Where a ray leaving `(0, y)` at angle `beta` meets the circle of radius `x_radius`
/// centered at the origin: returns the polar angle θ of the hit point and the
/// time of flight.
pub fn slit_hit_geometry(y: f64, beta: f64, x_radius: f64) -> Result<(f64, f64)> {
    if !(fabs(y) < x_radius) {
        return Err(domain(alloc::format!("source offset |y| = {} must be below the radius {x_radius}", fabs(y))));
    }
    let cb = cos(beta);
    let s = (y * cb * cb + sin(beta) * sqrt(x_radius * x_radius - y * y * cb * cb)) / x_radius;
    let s = s.clamp(-1.0, 1.0);
    let theta = asin(s);
    let tof = sqrt(x_radius * x_radius - 2.0 * y * x_radius * s + y * y);
    Ok((theta, tof))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn propagate_identities() {
        let m = Messenger::new(Message::from_angles(0.3, -1.2, 0.7), [0.0, 0.0], 0.0, 0, 0, 0.7);
        let full = propagate(&m, 1.0).unwrap();
        assert!(close(full.msg.c1, m.msg.c1, 1e-9) && close(full.msg.c2, m.msg.c2, 1e-9));
        let half = propagate(&m, 0.5).unwrap();
        assert!(close(half.msg.c1, -m.msg.c1, 1e-9) && close(half.msg.c2, -m.msg.c2, 1e-9));
        let s = Messenger::new(Message::polarized(0.0), [0.0, 0.0], 0.0, 0, 0, 0.0);
        let q = propagate(&s, 0.25).unwrap();
        assert!(close(q.msg.c1, Complex64::i(), 1e-12) && close(q.msg.c2, Complex64::new(0.0, 0.0), 1e-12));
        assert!((q.position[0] - 0.25).abs() < 1e-15);
        assert!(propagate(&s, -1.0).is_err());
    }

    #[test]
    fn coherent_source_repeats_itself() {
        let mut rng = crate::Rng::seed_from_u64(1);
        let mut src = Source::new(SourceSpec::Coherent { xi: 0.4 }).unwrap();
        let first = match src.emit(&mut rng) {
            Emission::Single(m) => m.msg,
            Emission::Pair(..) => panic!("coherent source emits singles"),
        };
        for _ in 0..99 {
            match src.emit(&mut rng) {
                Emission::Single(m) => assert_eq!(m.msg, first),
                Emission::Pair(..) => panic!("coherent source emits singles"),
            }
        }
    }

    #[test]
    fn opposite_polarizations_differ_by_right_angle() {
        let mut rng = crate::Rng::seed_from_u64(2);
        let mut src = Source::new(SourceSpec::OppositeRandomPolarization).unwrap();
        for _ in 0..100 {
            let Emission::Pair(a, b) = src.emit(&mut rng) else { panic!() };
            assert!((b.polarization - a.polarization - FRAC_PI_2).abs() < 1e-15);
            // Orthogonal messages.
            let overlap = a.msg.c1.conj() * b.msg.c1 + a.msg.c2.conj() * b.msg.c2;
            assert!(overlap.norm() < 1e-12);
        }
    }

    #[test]
    fn slit_positions_lie_inside_slits() {
        let mut rng = crate::Rng::seed_from_u64(3);
        let mut src = Source::new(SourceSpec::SlitPair { xi: 0.0, a: 1.0, d: 5.0 }).unwrap();
        for _ in 0..10_000 {
            let Emission::Single(m) = src.emit(&mut rng) else { panic!() };
            let y = m.position[1];
            assert!((y - 2.5).abs() <= 0.5 || (y + 2.5).abs() <= 0.5, "y = {y}");
            assert!(m.angle().abs() <= FRAC_PI_2);
        }
        assert!(Source::new(SourceSpec::SlitPair { xi: 0.0, a: 0.0, d: 5.0 }).is_err());
    }

    #[test]
    fn phases_held_for_refresh_period() {
        let mut rng = crate::Rng::seed_from_u64(4);
        let mut src = Source::new(SourceSpec::RandomPhasePair { xi: 0.0, d: 10.0, refresh_period: 40 }).unwrap();
        let mut last = [f64::NAN; 2];
        for n in 0..400u64 {
            src.emit(&mut rng);
            let p = src.phases();
            if n % 40 == 0 {
                assert_ne!(p, last);
            } else {
                assert_eq!(p, last);
            }
            last = p;
        }
    }

    #[test]
    fn geometry_simple_rays() {
        let (t, tof) = slit_hit_geometry(0.0, 0.0, 100.0).unwrap();
        assert!(t.abs() < 1e-15 && (tof - 100.0).abs() < 1e-12);
        let (t, tof) = slit_hit_geometry(0.0, PI / 6.0, 100.0).unwrap();
        assert!((t - PI / 6.0).abs() < 1e-12 && (tof - 100.0).abs() < 1e-12);
        assert!(slit_hit_geometry(100.0, 0.0, 100.0).is_err());
    }
}
