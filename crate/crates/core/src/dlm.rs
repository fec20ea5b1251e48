//! Deterministic learning machines: the scalar bit-emitting estimator and the
//! vector moving-average estimator that every adaptive unit is built on.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{domain, Result};
use crate::math::{exp, fabs, sqrt};

/// Learning constant used when a configuration does not override it.
pub const DEFAULT_GAMMA: f64 = 0.99;

fn check_gamma(gamma: f64) -> Result<()> {
    if (0.0..1.0).contains(&gamma) {
        Ok(())
    } else {
        Err(domain(alloc::format!("gamma must lie in [0, 1), got {gamma}")))
    }
}

/// Scalar machine that tracks an input `y ∈ [0,1]` and emits one bit per step.
///
/// Each step picks the bit whose update lands closer to the input; the running
/// mean of the emitted bits approximates `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarDlm {
    x: f64,
    gamma: f64,
    fast_mode: bool,
}

impl ScalarDlm {
    pub fn new(x: f64, gamma: f64, fast_mode: bool) -> Result<Self> {
        check_gamma(gamma)?;
        if !(0.0..=1.0).contains(&x) {
            return Err(domain(alloc::format!("initial state must lie in [0, 1], got {x}")));
        }
        Ok(Self { x, gamma, fast_mode })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn fast_mode(&self) -> bool {
        self.fast_mode
    }

    /// Learning constant actually used for input `y` in the current state.
    pub fn effective_gamma(&self, y: f64) -> f64 {
        if self.fast_mode {
            let g = 1.0 - fabs(self.x - y);
            if g < self.gamma {
                g
            } else {
                self.gamma
            }
        } else {
            self.gamma
        }
    }

    /// Processes one input value and returns the emitted bit.
    pub fn step(&mut self, y: f64) -> Result<u8> {
        if !(0.0..=1.0).contains(&y) {
            return Err(domain(alloc::format!("input must lie in [0, 1], got {y}")));
        }
        let g = self.effective_gamma(y);
        let stay = g * self.x;
        let up = stay + (1.0 - g);
        // Ties go to 0: the bit is 1 only when moving up is strictly closer.
        let delta = u8::from(fabs(up - y) < fabs(stay - y));
        self.x = if delta == 1 { up } else { stay };
        // Rounding in γx + (1 − γ) may overshoot 1 by one ulp.
        self.x = self.x.clamp(0.0, 1.0);
        Ok(delta)
    }
}

/// Vector machine `x ← γx + (1 − γ)v`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorDlm {
    x: Vec<f64>,
    gamma: f64,
}

impl VectorDlm {
    pub fn new(x: Vec<f64>, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        if x.is_empty() {
            return Err(domain("state vector must have at least one component"));
        }
        Ok(Self { x, gamma })
    }

    /// Machine over `d` components starting from the uniform frequency vector.
    pub fn uniform(d: usize, gamma: f64) -> Result<Self> {
        if d == 0 {
            return Err(domain("state vector must have at least one component"));
        }
        Self::new(vec![1.0 / d as f64; d], gamma)
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// Update with a unit input vector.
    pub fn step(&mut self, v: &[f64]) -> Result<()> {
        if v.len() != self.x.len() {
            return Err(domain(alloc::format!(
                "input has {} components, state has {}",
                v.len(),
                self.x.len()
            )));
        }
        let norm = sqrt(v.iter().map(|a| a * a).sum());
        if fabs(norm - 1.0) > 1e-9 {
            return Err(domain(alloc::format!("input must have unit norm, got {norm}")));
        }
        let g = self.gamma;
        for (xi, vi) in self.x.iter_mut().zip(v) {
            *xi = g * *xi + (1.0 - g) * vi;
        }
        Ok(())
    }

    /// Update with the one-hot vector selecting component `k`.
    pub fn step_one_hot(&mut self, k: usize) -> Result<()> {
        if k >= self.x.len() {
            return Err(domain(alloc::format!(
                "component {k} out of range for a {}-component state",
                self.x.len()
            )));
        }
        let g = self.gamma;
        for xi in self.x.iter_mut() {
            *xi *= g;
        }
        self.x[k] += 1.0 - g;
        Ok(())
    }
}

/// Continuous-time limit of the vector machine, evaluated by quadrature:
/// `x(t) = e^{−Γt} x0 + Γ ∫₀ᵗ e^{−Γu} v(t − u) du`.
///
/// The discrete rule with step τ and `γ = 1/(1 + τΓ)` approaches this as τ → 0.
pub fn dlm_ode_oracle(x0: &[f64], v: impl Fn(f64) -> Vec<f64>, big_gamma: f64, t: f64) -> Result<Vec<f64>> {
    if !(big_gamma > 0.0) {
        return Err(domain("Gamma must be positive"));
    }
    if !(t >= 0.0) {
        return Err(domain("t must be non-negative"));
    }
    let decay = exp(-big_gamma * t);
    let mut out: Vec<f64> = x0.iter().map(|a| decay * a).collect();
    if t == 0.0 {
        return Ok(out);
    }
    // Composite Simpson rule on an even number of panels.
    let panels = 2000usize;
    let h = t / panels as f64;
    for i in 0..=panels {
        let u = i as f64 * h;
        let w = if i == 0 || i == panels {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let vu = v(t - u);
        if vu.len() != out.len() {
            return Err(domain("input function dimension differs from x0"));
        }
        let k = big_gamma * exp(-big_gamma * u) * w * h / 3.0;
        for (o, a) in out.iter_mut().zip(&vu) {
            *o += k * a;
        }
    }
    Ok(out)
}
