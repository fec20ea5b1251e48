//! Scalar helpers shared by the units and oracles.

use core::f64::consts::PI;

pub use libm::{acos, asin, atan, atan2, cos, exp, fabs, floor, log, pow, round, sin, sqrt};

/// Unit step with the convention Θ(s) = 1 for s ≥ 0 and 0 otherwise.
#[inline]
pub fn step(s: f64) -> u8 {
    u8::from(s >= 0.0)
}

/// `sin(πx)/(πx)` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if fabs(x) < 1e-12 {
        1.0
    } else {
        sin(PI * x) / (PI * x)
    }
}

/// `n` evenly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> alloc::vec::Vec<f64> {
    match n {
        0 => alloc::vec::Vec::new(),
        1 => alloc::vec![start],
        _ => (0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_is_one_at_zero() {
        assert_eq!(step(0.0), 1);
        assert_eq!(step(-0.0), 1);
        assert_eq!(step(-1e-300), 0);
        assert_eq!(step(2.0), 1);
    }

    #[test]
    fn linspace_endpoints() {
        let v = linspace(0.0, 1.0, 21);
        assert_eq!(v.len(), 21);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[20], 1.0);
        assert!((v[10] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!(sinc(1.0).abs() < 1e-15);
        assert!((sinc(0.5) - 2.0 / PI).abs() < 1e-15);
    }
}
