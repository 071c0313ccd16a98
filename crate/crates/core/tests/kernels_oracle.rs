mod common;

use std::sync::Arc;

use common::*;
use dbar_kernels::geometry::{CPoint, DefiningFunction, Quadric};
use dbar_kernels::kernels::{omega0_coeffs, omega1_coeffs, Guard};
use dbar_kernels::seeded_rng;

#[test]
fn n2_ball_matches_wedge_oracle() {
    let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ball(CPoint::zeros(2), 1.0));
    let e = check_dimension(2, r, 100, 1);
    assert!(e < 1e-10, "{e}");
}

#[test]
fn n2_ellipsoid_matches_wedge_oracle() {
    let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ellipsoid(CPoint::zeros(2), &[1.0, 1.5, 0.7, 2.0]));
    let e = check_dimension(2, r, 100, 2);
    assert!(e < 1e-10, "{e}");
}

#[test]
fn n3_and_n4_match_wedge_oracle() {
    let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ellipsoid(CPoint::zeros(3), &[1.0, 1.5, 0.7, 2.0, 1.1, 0.9]));
    let e = check_dimension(3, r, 20, 3);
    assert!(e < 1e-10, "{e}");
    let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ball(CPoint::zeros(4), 1.0));
    let e = check_dimension(4, r, 5, 4);
    assert!(e < 1e-10, "{e}");
}

#[test]
fn n1_matches_cauchy_kernel() {
    let r: Arc<dyn DefiningFunction> = Arc::new(Quadric::ball(CPoint::zeros(1), 1.0));
    let mut rng = seeded_rng(5);
    for _ in 0..100 {
        let z = random_point(1, &mut rng, 0.9);
        let zeta = random_point(1, &mut rng, 1.2);
        let want = cauchy(z[0], zeta[0]);
        let k0 = omega0_coeffs(&z, &zeta, 0, &Guard::none()).unwrap();
        let k1 = omega1_coeffs(&r, &z, &zeta, 0, &Guard::none()).unwrap();
        assert!(rel_err(k0.values()[0], want, want.norm()) < 1e-12);
        assert!(rel_err(k1.values()[0], want, want.norm()) < 1e-12);
    }
}

#[test]
fn omega0_homogeneity() {
    // coefficients of degree 1 - 2n under (z, zeta) -> (s z, s zeta)
    let mut rng = seeded_rng(6);
    let z = random_point(2, &mut rng, 0.5);
    let zeta = random_point(2, &mut rng, 1.0);
    let s = 1.7;
    for q in 0..2 {
        let a = omega0_coeffs(&z, &zeta, q, &Guard::none()).unwrap();
        let b = omega0_coeffs(&z.scale(s), &zeta.scale(s), q, &Guard::none()).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x * s.powi(-3) - y).norm() < 1e-12 * x.norm().max(1e-300));
        }
    }
}

#[test]
fn omega0_odd_under_swap() {
    // the coefficients depend on w = zeta - z only and are odd in w
    let mut rng = seeded_rng(8);
    for n in 1..=3 {
        for _ in 0..40 {
            let z = random_point(n, &mut rng, 0.8);
            let zeta = random_point(n, &mut rng, 0.8);
            let oracle = oracle_single(&weight_g0(&zeta, &z), &zeta, &z);
            for q in 0..n {
                let a = omega0_coeffs(&z, &zeta, q, &Guard::none()).unwrap();
                let b = omega0_coeffs(&zeta, &z, q, &Guard::none()).unwrap();
                assert!(compare(&b, &oracle, n) < 1e-10);
                let scale = a.max_abs();
                for (x, y) in a.values().iter().zip(b.values()) {
                    assert!((x + y).norm() <= 1e-12 * scale, "n={n} q={q}");
                }
            }
        }
    }
}

#[test]
fn guard_rejects_near_diagonal() {
    let z = CPoint::zeros(2);
    let zeta = CPoint::from_reals(&[1e-6, 0.0, 0.0, 0.0]);
    assert!(omega0_coeffs(&z, &zeta, 0, &Guard::for_scale(1.0)).is_err());
    assert!(omega0_coeffs(&z, &zeta, 0, &Guard::none()).is_ok());
}
