use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension {0} is not supported (expected 1..={max})", max = crate::geometry::MAX_DIM)]
    Dimension(usize),

    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("defining functions disagree on the boundary: max |r| = {0:.3e}")]
    ZeroSetMismatch(f64),

    #[error("finite-difference stencil with step {step} leaves the field's domain at {point}")]
    StepTooLarge { step: f64, point: String },

    #[error("kernel denominator {value:.3e} below guard {guard:.3e} ({kernel})")]
    Singular { kernel: &'static str, value: f64, guard: f64 },

    #[error("output degree {q} out of range for {kernel} in dimension {n}")]
    Degree { kernel: &'static str, q: usize, n: usize },

    #[error("point pair within {margin:.3e} of the singular set (required {required:.3e})")]
    Margin { margin: f64, required: f64 },

    #[error("domain is not star-shaped along a test ray: {0}")]
    NonStarShaped(String),

    #[error("empty integration region: {0}")]
    EmptyRegion(String),

    #[error("probe too close to the boundary: distance ratio {0:.3e}")]
    Proximity(f64),

    #[error("strict C-linear convexity of U violated, r_zeta.(zeta - z) vanishes: |pairing| = {value:.3e} at zeta={zeta}, z={z}")]
    ConvexityPrecheck { value: f64, zeta: String, z: String },

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("unsupported Hölder exponent {0} (integer exponents are Zygmund norms)")]
    UnsupportedExponent(f64),

    #[error("no sample pairs available")]
    EmptyPairs,

    #[error("extension mode {0} is not supported for this domain")]
    UnsupportedMode(&'static str),

    #[error("expression error: {0}")]
    Expression(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("rule file {path}: {reason}")]
    RuleFile { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
