//! Empirical Hölder seminorms and the gain experiment.

pub mod gain;
pub mod holder;

pub use gain::{gain_report, probe_cloud, rough_family, GainReport};
pub use holder::{
    check_exponent, holder_on_points, holder_seminorm, DomainClosure, HolderEstimate, Interval, PairSampler, SampleSpace,
};
