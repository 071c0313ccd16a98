//! Domains in C^n, their defining functions, and the convexity conditions.

pub mod conditions;
pub mod defining;
pub mod domain;
pub mod mollify;
pub mod point;
pub mod power;

/// Largest supported complex dimension.
pub const MAX_DIM: usize = 4;

pub use conditions::{
    check_stability, estimate_all, estimate_condition, leray_denominator, ConditionReport, ConditionTag, SamplerConfig,
};
pub use defining::{Affine, DefiningFunction, PowerFunction, Quadric, RadiusFunction, Scaled, Smoothness, StarShapedFunction};
pub use domain::{Domain, DomainSpec};
pub use mollify::mollify;
pub use point::{CMatrix, CPoint};
pub use power::{power_gap, PowerSum};
