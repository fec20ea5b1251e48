//! Event-by-event corpuscular simulation of quantum-optics experiments.
//!
//! Messengers carrying a two-component complex message are routed one at a
//! time through adaptive processing units built on deterministic learning
//! machines (DLMs). Detector click statistics accumulated over many events
//! reproduce the intensities predicted by wave theory; the [`oracles`] module
//! provides those predictions in closed form.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod dlm;
mod error;
pub mod experiments;
pub mod math;
pub mod messaging;
pub mod optics;
pub mod oracles;

pub use error::{Error, Result};

/// Pseudo-random generator used by every unit network.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Name of the generator algorithm, recorded in run manifests.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64)";
