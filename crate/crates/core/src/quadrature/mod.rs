//! Quadrature on the boundary and on the volumes `D`, `U` and `U \ D`.

pub mod gauss;
pub mod integrate;
pub mod io;
pub mod pairing;
pub mod rules;
pub mod sphere;

pub use integrate::{
    integrate_boundary_samples, integrate_kernel_boundary, integrate_kernel_volume, integrate_volume_samples, FieldSamples,
    Integral,
};
pub use io::{read_rule, write_boundary_rule, write_volume_rule, RuleFile};
pub use rules::{radial_points, BoundaryNode, BoundaryRule, Exclusion, Region, VolumeNode, VolumeRule};
pub use sphere::SphereRule;
