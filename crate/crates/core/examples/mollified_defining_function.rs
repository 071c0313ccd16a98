//! Smooth approximants of a C^{1,1} defining function and their convergence.

use dbar_kernels::geometry::{mollify, CPoint};
use dbar_kernels::{Domain, DomainSpec};

fn main() -> dbar_kernels::Result<()> {
    let dom = Domain::new(2, DomainSpec::PowerDomain { exponents: vec![1.5, 1.5, 2.0, 2.0], level: 1.0 })?;
    let r = dom.defining_function();
    let z = CPoint::from_reals(&[0.3, -0.2, 0.1, 0.4]);
    println!("r = {:.8}, |r_z| = {:.8}", r.value(&z), r.grad(&z).norm());
    for k in [10, 40, 160, 640] {
        let rk = mollify(r, k);
        let dv = (rk.value(&z) - r.value(&z)).abs();
        let dg = (rk.grad(&z) - r.grad(&z)).norm();
        println!("k = {k:>4}: |r_k - r| = {dv:.3e}, |grad r_k - grad r| = {dg:.3e}");
    }
    Ok(())
}
