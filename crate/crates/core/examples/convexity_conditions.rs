//! Sampled C-linear convexity quotients for a ball, a power domain and a limaçon body.

use dbar_kernels::geometry::{estimate_all, SamplerConfig};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let cases = [
        DomainSpec::Ball { radius: 1.0 },
        DomainSpec::PowerDomain { exponents: vec![1.5, 2.0, 1.5, 2.0], level: 1.0 },
        DomainSpec::Limacon { b: 0.9 },
    ];
    let cfg = SamplerConfig { boundary: 200, interior: 200, collar: 200, ..SamplerConfig::default() };
    for spec in cases {
        let dom = Domain::new(2, spec)?;
        println!("{}", dom.spec().name());
        for rep in estimate_all(dom.defining_function().as_ref(), &dom, &cfg)? {
            let verdict = if rep.holds() { "holds" } else { "fails" };
            println!("  {:<10} inf {:>11.4e}  {verdict}  ({} pairs)", rep.tag.name(), rep.infimum, rep.pairs);
        }
    }
    Ok(())
}
