//! Sup norm of rough data against the C^{1/2} seminorm of T_1 applied to it.

use std::sync::Arc;

use dbar_kernels::analysis::{gain_report, probe_cloud, rough_family, DomainClosure, PairSampler};
use dbar_kernels::forms::FormField;
use dbar_kernels::geometry::CPoint;
use dbar_kernels::operators::{ExtensionMode, Operators, Resolution};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 })?;
    let ops = Operators::new(&dom, Resolution::new(32, 8, 0.1), ExtensionMode::Analytic, 1e-4)?;
    let cloud = probe_cloud(&dom, 24, ops.probe_collar(), 7)?;
    let sampler = PairSampler::new(20_000, 7);
    for s in [0.3, 0.5, 0.7] {
        let phi: Arc<dyn FormField> = Arc::new(rough_family(2, s, 1.0)?);
        let t = ops.t_operator(1, phi.clone())?;
        let u = |z: &CPoint| t(z).map(|i| i.value);
        let g = gain_report(&format!("s = {s}"), phi.as_ref(), &DomainClosure(&dom), &sampler, &u, &cloud, 0.0)?;
        println!("{}: |phi|_0 {:.4}, |u|_1/2 {:.4}, ratio {:.4}", g.label, g.phi_seminorm, g.u_seminorm, g.ratio);
    }
    Ok(())
}
