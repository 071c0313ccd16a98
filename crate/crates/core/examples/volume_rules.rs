//! Volume rules on D, U and the shell U \ D, with and without a polar exclusion.

use dbar_kernels::geometry::CPoint;
use dbar_kernels::quadrature::{Region, VolumeRule};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(2, DomainSpec::Ellipsoid { semi_axes: vec![1.0, 1.2, 0.8, 1.0] })?;
    let exact = std::f64::consts::PI.powi(2) / 2.0 * 1.0 * 1.2 * 0.8 * 1.0;
    for n in [8, 16] {
        let d = VolumeRule::build(&dom, Region::D, n, None)?;
        let u = VolumeRule::build(&dom, Region::U, n, None)?;
        let shell = VolumeRule::build(&dom, Region::UMinusD, n, None)?;
        let polar = VolumeRule::build(&dom, Region::D, n, Some((CPoint::from_reals(&[0.3, 0.0, 0.1, -0.2]), 0.1)))?;
        println!(
            "N = {n:>2}: vol D {:.8} (polar {:.8}, exact {exact:.8}), vol U {:.6}, shell {:.6}, {} shell nodes",
            d.volume(),
            polar.volume(),
            u.volume(),
            shell.volume(),
            shell.fine().len()
        );
    }
    Ok(())
}
