//! Cauchy–Fantappiè kernels and integral solution operators for the dbar-equation on
//! C-linearly convex domains in C^n.
//!
//! The crate is organised bottom-up: [`geometry`] (domains and convexity checks), [`forms`]
//! ((0,q)-forms and finite-difference dbar), [`kernels`] (Bochner–Martinelli, Leray and
//! transition kernels), [`quadrature`] (boundary and volume rules), [`operators`] (the
//! solution operators `T_q`, `H_q`, `H_0`), [`analysis`] (Hölder seminorm estimates) and
//! [`cli`] (the experiment driver behind the `dbar` binary).

pub mod analysis;
pub mod cli;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod kernels;
pub mod operators;
pub mod quadrature;

pub use error::{Error, Result};
pub use geometry::{CPoint, Domain, DomainSpec};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The crate-wide deterministic generator.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for work item `index` of a parallel loop; independent of scheduling.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
