use dbar_kernels::forms::{ExprField, FormField};
use dbar_kernels::kernels::{Guard, Kernel};
use dbar_kernels::quadrature::{integrate_kernel_boundary, integrate_kernel_volume, BoundaryRule, Region, VolumeRule};
use dbar_kernels::{CPoint, Domain, DomainSpec};
use proptest::prelude::*;

fn domains() -> Vec<Domain> {
    vec![
        Domain::new(2, DomainSpec::Ball { radius: 1.0 }).unwrap(),
        Domain::new(2, DomainSpec::Ellipsoid { semi_axes: vec![1.0, 1.2, 0.9, 1.1] }).unwrap(),
        Domain::new(1, DomainSpec::Limacon { b: 0.4 }).unwrap(),
    ]
}

fn interior(dom: &Domain, raw: (f64, f64, f64, f64), frac: f64) -> CPoint {
    let v = CPoint::from_reals(&[raw.0, raw.1, raw.2, raw.3][..2 * dom.n()]);
    let v = if v.norm() < 1e-6 { CPoint::real_axis(dom.n(), 0) } else { v.scale(1.0 / v.norm()) };
    let p = dom.boundary_point(&v).unwrap();
    dom.center() + (p - dom.center()).scale(frac)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundary_nodes_lie_on_the_boundary(which in 0usize..3, half in 4usize..12) {
        let dom = &domains()[which];
        let rule = BoundaryRule::build(dom, 2 * half).unwrap();
        let r = dom.defining_function();
        for b in rule.fine().iter().chain(rule.coarse()) {
            prop_assert!(r.value(&b.zeta).abs() <= 1e-10 * dom.diameter());
            prop_assert!(b.weight() > 0.0);
        }
    }

    #[test]
    fn leray_boundary_self_converges(
        which in 0usize..3,
        raw in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
        frac in 0.0f64..0.3,
    ) {
        let dom = &domains()[which];
        let n = dom.n();
        let z = interior(dom, raw, frac);
        let k = Kernel::omega1(dom.defining_function().clone(), Guard::for_scale(dom.diameter()));
        let phi = ExprField::scalar(n, if n == 1 { "z1^2 - 2*z1" } else { "z1*z2 + z2^2" }).unwrap();
        let base = if n == 1 { 64 } else { 32 };
        let coarse = integrate_kernel_boundary(&BoundaryRule::build(dom, base).unwrap(), &k, &phi, &z, 0).unwrap();
        let fine = integrate_kernel_boundary(&BoundaryRule::build(dom, 2 * base).unwrap(), &k, &phi, &z, 0).unwrap();
        let change = (&fine.value - &coarse.value).max_abs();
        prop_assert!(change <= 3.0 * coarse.error.max(1e-13), "{change} vs {}", coarse.error);
        // holomorphic data are reproduced
        let want = phi.eval(&z);
        prop_assert!((&fine.value - &want).max_abs() <= 3.0 * fine.error.max(1e-12));
    }

    #[test]
    fn exclusion_radius_does_not_change_the_integral(
        raw in (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0),
        frac in 0.0f64..0.7,
        eps in 0.02f64..0.2,
    ) {
        let dom = &domains()[1];
        let z = interior(dom, raw, frac);
        let k = Kernel::omega0(Guard::for_scale(dom.diameter()));
        let phi = ExprField::from_pairs(2, 1, &[("1", "z2 + zb1"), ("2", "1")]).unwrap();
        let a = VolumeRule::build(dom, Region::D, 16, Some((z, eps))).unwrap();
        let b = VolumeRule::build(dom, Region::D, 16, Some((z, eps / 2.0))).unwrap();
        let ia = integrate_kernel_volume(&a, &k, &phi, &z, 0).unwrap();
        let ib = integrate_kernel_volume(&b, &k, &phi, &z, 0).unwrap();
        let diff = (&ia.value - &ib.value).max_abs();
        prop_assert!(diff <= 3.0 * (ia.error + ib.error) + 1e-12, "{diff} vs {} {}", ia.error, ib.error);
        // nodes stay off the singular point
        for rule in [&a, &b] {
            let r = rule.exclusion().unwrap().radius;
            let closest = rule.fine().iter().map(|p| (p.zeta - z).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(closest >= 1e-3 * r);
        }
    }
}

#[test]
fn integrals_are_bit_identical_across_thread_counts() {
    let dom = &domains()[1];
    let z = CPoint::from_reals(&[0.1, -0.2, 0.05, 0.3]);
    let k0 = Kernel::omega0(Guard::for_scale(dom.diameter()));
    let k01 = Kernel::omega01(dom.defining_function().clone(), Guard::for_scale(dom.diameter()));
    let phi = ExprField::from_pairs(2, 1, &[("1", "z2*zb2"), ("2", "exp(z1)")]).unwrap();
    let brule = BoundaryRule::build(dom, 32).unwrap();
    let vrule = VolumeRule::build(dom, Region::D, 16, Some((z, 0.05))).unwrap();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let b = integrate_kernel_boundary(&brule, &k01, &phi, &z, 0).unwrap();
            let v = integrate_kernel_volume(&vrule, &k0, &phi, &z, 0).unwrap();
            (b.value.coeffs().to_vec(), v.value.coeffs().to_vec(), b.error.to_bits(), v.error.to_bits())
        })
    };
    let one = run(1);
    assert_eq!(one, run(1));
    assert_eq!(one, run(3));
}

#[test]
fn volume_rule_self_converges_on_smooth_data() {
    let dom = &domains()[0];
    let z = CPoint::from_reals(&[0.2, 0.1, -0.3, 0.0]);
    let k = Kernel::omega0(Guard::for_scale(dom.diameter()));
    let phi = ExprField::from_pairs(2, 1, &[("1", "1"), ("2", "z1")]).unwrap();
    let i8 = integrate_kernel_volume(&VolumeRule::build(dom, Region::D, 8, Some((z, 0.1))).unwrap(), &k, &phi, &z, 0).unwrap();
    let i16 = integrate_kernel_volume(&VolumeRule::build(dom, Region::D, 16, Some((z, 0.1))).unwrap(), &k, &phi, &z, 0).unwrap();
    let change = (&i16.value - &i8.value).max_abs();
    assert!(change <= 3.0 * i8.error.max(1e-13), "{change} vs {}", i8.error);
}
