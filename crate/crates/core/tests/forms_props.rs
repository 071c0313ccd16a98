use std::sync::Arc;

use dbar_kernels::forms::multi_index::{binomial, rank};
use dbar_kernels::forms::{combos, dbar_closed_residual, dbar_fd, Combination, FdDbar, FnField, FormField, FormValue, MultiIndex};
use dbar_kernels::CPoint;
use num_complex::Complex64;
use proptest::prelude::*;

type C = Complex64;

/// Coefficients `phi_J = (sum_k c[J][k] zbar_k) (e_J + sum_m d[J][m] z_m)`, with closed-form
/// derivatives `d phi_J / d zbar_j = c[J][j] (e_J + sum_m d[J][m] z_m)`.
#[derive(Clone, Debug)]
struct Bilinear {
    n: usize,
    q: usize,
    c: Vec<Vec<C>>,
    d: Vec<Vec<C>>,
    e: Vec<C>,
}

impl Bilinear {
    fn from_seed(n: usize, q: usize, raw: &[f64]) -> Self {
        let mut it = raw.iter().cycle();
        let mut next = || C::new(*it.next().unwrap(), *it.next().unwrap());
        let m = combos(n, q).len();
        let c = (0..m).map(|_| (0..n).map(|_| next()).collect()).collect();
        let d = (0..m).map(|_| (0..n).map(|_| next()).collect()).collect();
        let e = (0..m).map(|_| next()).collect();
        Bilinear { n, q, c, d, e }
    }

    fn hol(&self, k: usize, z: &CPoint) -> C {
        self.e[k] + (0..self.n).map(|m| self.d[k][m] * z[m]).sum::<C>()
    }

    fn field(&self) -> Arc<dyn FormField> {
        let s = self.clone();
        Arc::new(FnField::new(self.n, self.q, move |z: &CPoint| {
            let coeffs = (0..s.c.len())
                .map(|k| (0..s.n).map(|j| s.c[k][j] * z[j].conj()).sum::<C>() * s.hol(k, z))
                .collect();
            FormValue::from_coeffs(s.n, s.q, coeffs)
        }))
    }

    /// `(dbar phi)_I = sum_s (-1)^s d phi_{I - i_s} / d zbar_{i_s}`.
    fn dbar_oracle(&self, z: &CPoint) -> Vec<C> {
        combos(self.n, self.q + 1)
            .into_iter()
            .map(|ii| {
                let e = ii.entries();
                e.iter()
                    .enumerate()
                    .map(|(s, &is)| {
                        let rest: Vec<usize> = e.iter().copied().filter(|&x| x != is).collect();
                        let k = rank(self.n, MultiIndex::new(&rest).unwrap());
                        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                        self.c[k][is] * self.hol(k, z) * sign
                    })
                    .sum()
            })
            .collect()
    }
}

fn point(raw: &[f64], n: usize) -> CPoint {
    CPoint::from_reals(&raw[..2 * n])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dbar_matches_antisymmetrised_oracle(
        n in 1usize..=4,
        qseed in 0usize..4,
        raw in prop::collection::vec(-1.0f64..1.0, 24),
        zr in prop::collection::vec(-1.0f64..1.0, 8),
    ) {
        let q = qseed % n;
        let b = Bilinear::from_seed(n, q, &raw);
        let z = point(&zr, n);
        let got = dbar_fd(b.field().as_ref(), &z, 1e-4).unwrap();
        for (g, o) in got.coeffs().iter().zip(b.dbar_oracle(&z)) {
            prop_assert!((g - o).norm() <= 1e-7, "n={n} q={q}: {g} vs {o}");
        }
    }

    #[test]
    fn dbar_dbar_vanishes(
        n in 2usize..=3,
        raw in prop::collection::vec(-1.0f64..1.0, 24),
        zr in prop::collection::vec(-1.0f64..1.0, 6),
    ) {
        let h = 1e-3;
        let b = Bilinear::from_seed(n, 0, &raw);
        // a cubic: phi * zbar_1
        let phi = b.field();
        let cubic: Arc<dyn FormField> = Arc::new(FnField::new(n, 0, move |z: &CPoint| {
            phi.eval(z).scale(z[0].conj())
        }));
        let d: Arc<dyn FormField> = Arc::new(FdDbar::new(cubic, h));
        let res = dbar_closed_residual(d.as_ref(), &[point(&zr, n)], h).unwrap();
        prop_assert!(res <= 10.0 * h, "{res}");
    }

    #[test]
    fn dbar_is_linear(
        raw1 in prop::collection::vec(-1.0f64..1.0, 24),
        raw2 in prop::collection::vec(-1.0f64..1.0, 24),
        a in (-2.0f64..2.0, -2.0f64..2.0),
        zr in prop::collection::vec(-1.0f64..1.0, 6),
    ) {
        let (f, g) = (Bilinear::from_seed(3, 1, &raw1).field(), Bilinear::from_seed(3, 1, &raw2).field());
        let a = C::new(a.0, a.1);
        let comb = Combination::new(vec![(a, f.clone()), (C::new(1.0, 0.0), g.clone())]);
        let z = point(&zr, 3);
        let h = 1e-4;
        let lhs = dbar_fd(&comb, &z, h).unwrap();
        let rhs = &dbar_fd(f.as_ref(), &z, h).unwrap().scale(a) + &dbar_fd(g.as_ref(), &z, h).unwrap();
        prop_assert!((&lhs - &rhs).max_abs() <= 1e-9 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn multi_indices_are_increasing_and_ranked(n in 1usize..=6, bits in 0u32..64) {
        let bits = bits & ((1 << n) - 1);
        let jj = MultiIndex::from_bits(bits);
        let e = jj.entries();
        prop_assert!(e.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(jj.len() <= n);
        let all = combos(n, jj.len());
        prop_assert_eq!(all.len(), binomial(n, jj.len()));
        prop_assert_eq!(all[rank(n, jj)], jj);
        let text: Vec<String> = e.iter().map(|j| (j + 1).to_string()).collect();
        prop_assert_eq!(MultiIndex::parse(&text.join(","), n), Some(jj));
    }
}

#[test]
fn dbar_of_top_degree_is_zero() {
    let b = Bilinear::from_seed(2, 2, &[0.3, -0.2, 0.5, 0.1, 0.7, -0.4]);
    let v = dbar_fd(b.field().as_ref(), &CPoint::zeros(2), 1e-4).unwrap();
    assert_eq!(v.q(), 3);
    assert!(v.coeffs().is_empty() || v.max_abs() == 0.0);
}
