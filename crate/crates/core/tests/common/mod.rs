//! Test-only oracles that share no code with the library's kernel formulas.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use std::sync::Arc;

use dbar_kernels::geometry::{CPoint, DefiningFunction};
use dbar_kernels::kernels::{omega01_coeffs, omega0_coeffs, omega1_coeffs, Guard, KernelCoefficients};
use dbar_kernels::seeded_rng;
use num_complex::Complex64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Exterior algebra over 3n generators: `dzeta_j` (bit j), `dzetabar_j` (bit n + j),
/// `dzbar_j` (bit 2n + j). Monomials are bit masks in ascending generator order.
#[derive(Clone, Debug, Default)]
pub struct Ext(pub BTreeMap<u32, Complex64>);

fn reorder_sign(a: u32, b: u32) -> f64 {
    // sign of (monomial a) ^ (monomial b) relative to the sorted monomial a|b
    let mut inv = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inv += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl Ext {
    pub fn scalar(v: Complex64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(0, v);
        Ext(m)
    }

    pub fn gen(bit: u32, v: Complex64) -> Self {
        let mut m = BTreeMap::new();
        m.insert(1 << bit, v);
        Ext(m)
    }

    pub fn add(&self, o: &Ext) -> Ext {
        let mut m = self.0.clone();
        for (k, v) in &o.0 {
            *m.entry(*k).or_insert(c(0.0, 0.0)) += v;
        }
        Ext(m)
    }

    pub fn scale(&self, s: Complex64) -> Ext {
        Ext(self.0.iter().map(|(k, v)| (*k, v * s)).collect())
    }

    pub fn wedge(&self, o: &Ext) -> Ext {
        let mut m: BTreeMap<u32, Complex64> = BTreeMap::new();
        for (ka, va) in &self.0 {
            for (kb, vb) in &o.0 {
                if ka & kb != 0 {
                    continue;
                }
                *m.entry(ka | kb).or_insert(c(0.0, 0.0)) += va * vb * reorder_sign(*ka, *kb);
            }
        }
        Ext(m)
    }

    pub fn get(&self, mask: u32) -> Complex64 {
        self.0.get(&mask).copied().unwrap_or(c(0.0, 0.0))
    }
}

pub struct Weight {
    pub g: Vec<Complex64>,
    /// `a[j][k]`, `k < n`: d g_j / d zetabar_k; `k >= n`: d g_j / d zbar_{k-n}.
    pub a: Vec<Vec<Complex64>>,
}

pub fn weight_g0(z: &CPoint, zeta: &CPoint) -> Weight {
    let n = z.dim();
    let g = (0..n).map(|j| (zeta[j] - z[j]).conj()).collect();
    let mut a = vec![vec![c(0.0, 0.0); 2 * n]; n];
    for j in 0..n {
        a[j][j] = c(1.0, 0.0);
        a[j][n + j] = c(-1.0, 0.0);
    }
    Weight { g, a }
}

pub fn weight_g1(r: &dyn DefiningFunction, zeta: &CPoint) -> Weight {
    let n = zeta.dim();
    let grad = r.grad(zeta);
    let h = r.mixed_hessian(zeta);
    let g = (0..n).map(|j| grad[j]).collect();
    let mut a = vec![vec![c(0.0, 0.0); 2 * n]; n];
    for j in 0..n {
        for k in 0..n {
            a[j][k] = h.get(j, k);
        }
    }
    Weight { g, a }
}

/// `g . dzeta` and `dbar g .^ dzeta`, expanded term by term.
fn forms_of(n: usize, w: &Weight) -> (Ext, Ext) {
    let mut one = Ext::default();
    for j in 0..n {
        one = one.add(&Ext::gen(j as u32, w.g[j]));
    }
    let mut two = Ext::default();
    for j in 0..n {
        for k in 0..2 * n {
            let bar = Ext::gen((n + k) as u32, w.a[j][k]);
            two = two.add(&bar.wedge(&Ext::gen(j as u32, c(1.0, 0.0))));
        }
    }
    (one, two)
}

fn pow(e: &Ext, k: usize) -> Ext {
    (0..k).fold(Ext::scalar(c(1.0, 0.0)), |acc, _| acc.wedge(e))
}

fn pairing(w: &Weight, z: &CPoint, zeta: &CPoint) -> Complex64 {
    (0..z.dim()).map(|j| w.g[j] * (zeta[j] - z[j])).sum()
}

/// `(2 pi i)^-n (g.dzeta) ^ (dbar g .^ dzeta)^{n-1} / (g.w)^n`.
pub fn oracle_single(w: &Weight, z: &CPoint, zeta: &CPoint) -> Ext {
    let n = z.dim();
    let (one, two) = forms_of(n, w);
    let d = pairing(w, z, zeta);
    let k = c(0.0, 2.0 * PI).powi(-(n as i32)) / d.powi(n as i32);
    one.wedge(&pow(&two, n - 1)).scale(k)
}

/// `(2 pi i)^-n sum_{a+b=n-2} [g0.dzeta ^ B0^a / D0^{a+1}] ^ [g1.dzeta ^ B1^b / D1^{b+1}]`.
pub fn oracle_transition(w0: &Weight, w1: &Weight, z: &CPoint, zeta: &CPoint) -> Ext {
    let n = z.dim();
    let (o0, t0) = forms_of(n, w0);
    let (o1, t1) = forms_of(n, w1);
    let (d0, d1) = (pairing(w0, z, zeta), pairing(w1, z, zeta));
    let mut acc = Ext::default();
    for a in 0..=n - 2 {
        let b = n - 2 - a;
        let left = o0.wedge(&pow(&t0, a)).scale(1.0 / d0.powi(a as i32 + 1));
        let right = o1.wedge(&pow(&t1, b)).scale(1.0 / d1.powi(b as i32 + 1));
        acc = acc.add(&left.wedge(&right));
    }
    acc.scale(c(0.0, 2.0 * PI).powi(-(n as i32)))
}

/// Coefficient of `dzetabar_L ^ dzbar_J ^ dzeta_1 ^ ... ^ dzeta_n` (0-based bit masks).
pub fn oracle_coefficient(e: &Ext, n: usize, l_bits: u32, j_bits: u32) -> Complex64 {
    let all_zeta = (1u32 << n) - 1;
    let mask = all_zeta | (l_bits << n) | (j_bits << (2 * n));
    // sorted order puts the dzeta block first; move it past |L| + |J| one-forms
    let k = (l_bits.count_ones() + j_bits.count_ones()) as usize;
    let sign = if (n * k) % 2 == 0 { 1.0 } else { -1.0 };
    e.get(mask) * sign
}

/// Closed-form Cauchy kernel `(2 pi i)^-1 / (zeta - z)`.
pub fn cauchy(z: Complex64, zeta: Complex64) -> Complex64 {
    1.0 / (c(0.0, 2.0 * PI) * (zeta - z))
}

pub fn rel_err(a: Complex64, b: Complex64, scale: f64) -> f64 {
    (a - b).norm() / scale.max(1e-300)
}

pub fn random_point(n: usize, rng: &mut impl Rng, radius: f64) -> CPoint {
    let xy: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-radius..radius)).collect();
    CPoint::from_reals(&xy)
}

pub fn compare(k: &KernelCoefficients, oracle: &Ext, n: usize) -> f64 {
    let scale = k.max_abs().max(1e-300);
    k.entries()
        .iter()
        .map(|(l, j, v)| rel_err(*v, oracle_coefficient(oracle, n, l.bits(), j.bits()), scale))
        .fold(0.0, f64::max)
}

/// Worst relative error of all three kernels against the wedge oracle at `points` random pairs.
pub fn check_dimension(n: usize, r: Arc<dyn DefiningFunction>, points: usize, seed: u64) -> f64 {
    let mut rng = seeded_rng(seed);
    let g = Guard::none();
    let mut worst = 0.0f64;
    for _ in 0..points {
        let z = random_point(n, &mut rng, 0.5);
        let zeta = random_point(n, &mut rng, 1.0);
        let (w0, w1) = (weight_g0(&z, &zeta), weight_g1(r.as_ref(), &zeta));
        let (o0, o1) = (oracle_single(&w0, &z, &zeta), oracle_single(&w1, &z, &zeta));
        for q in 0..n {
            worst = worst.max(compare(&omega0_coeffs(&z, &zeta, q, &g).unwrap(), &o0, n));
            worst = worst.max(compare(&omega1_coeffs(&r, &z, &zeta, q, &g).unwrap(), &o1, n));
        }
        if n >= 2 {
            let o01 = oracle_transition(&w0, &w1, &z, &zeta);
            for q in 0..=n - 2 {
                worst = worst.max(compare(&omega01_coeffs(&r, &z, &zeta, q, &g).unwrap(), &o01, n));
            }
        }
    }
    worst
}
