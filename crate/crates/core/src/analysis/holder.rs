//! Lower-bound estimates of `|f|_{Lambda^a}` by maximizing difference quotients over sampled
//! pairs.
//!
//! For `0 < a < 1` the quotient is `|f(x) - f(y)| / |x - y|^a`; for `1 < a < 2` it is applied to
//! the central-difference gradient with exponent `a - 1`. Values are vectors (form
//! coefficients); `|.|` is the max norm.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::domain::random_direction;
use crate::geometry::Domain;

type C = Complex64;

/// Where pairs are drawn from.
pub trait SampleSpace: Sync {
    fn dim(&self) -> usize;
    fn diameter(&self) -> f64;
    fn contains(&self, x: &[f64]) -> bool;
    fn sample(&self, rng: &mut dyn rand::RngCore) -> Vec<f64>;
    /// A point on the boundary (pairs anchored there catch boundary singularities).
    fn boundary_sample(&self, rng: &mut dyn rand::RngCore) -> Vec<f64>;
}

/// `[a, b]`.
#[derive(Clone, Copy, Debug)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl SampleSpace for Interval {
    fn dim(&self) -> usize {
        1
    }
    fn diameter(&self) -> f64 {
        self.b - self.a
    }
    fn contains(&self, x: &[f64]) -> bool {
        x[0] >= self.a && x[0] <= self.b
    }
    fn sample(&self, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        vec![rng.random_range(self.a..=self.b)]
    }
    fn boundary_sample(&self, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        vec![if rng.random::<bool>() { self.a } else { self.b }]
    }
}

/// The closure of a domain, in real coordinates.
pub struct DomainClosure<'a>(pub &'a Domain);

impl SampleSpace for DomainClosure<'_> {
    fn dim(&self) -> usize {
        2 * self.0.n()
    }
    fn diameter(&self) -> f64 {
        self.0.diameter()
    }
    fn contains(&self, x: &[f64]) -> bool {
        self.0.in_closure(&crate::CPoint::from_reals(x))
    }
    fn sample(&self, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        let n = self.0.n();
        loop {
            let u: f64 = rng.random();
            let p = self.0.center()
                + random_direction(n, rng).scale(0.5 * self.diameter() * u.powf(1.0 / (2 * n) as f64));
            if self.0.in_closure(&p) {
                return p.to_reals();
            }
        }
    }
    fn boundary_sample(&self, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        let n = self.0.n();
        loop {
            if let Ok(p) = self.0.boundary_point(&random_direction(n, rng)) {
                return p.to_reals();
            }
        }
    }
}

/// Pairs stratified by `|x - y|` in `[2^-k, 2^{1-k}] * diameter`, `k = 1..=finest`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PairSampler {
    pub pairs: usize,
    pub finest: u32,
    /// Fraction of pairs with one point on the boundary.
    pub boundary_fraction: f64,
    pub seed: u64,
}

impl Default for PairSampler {
    fn default() -> Self {
        PairSampler { pairs: 100_000, finest: 14, boundary_fraction: 0.2, seed: 11 }
    }
}

impl PairSampler {
    pub fn new(pairs: usize, seed: u64) -> Self {
        PairSampler { pairs, seed, ..Default::default() }
    }

    /// Deterministic pair list; pair `i` depends only on `(seed, i)`.
    pub fn sample(&self, space: &dyn SampleSpace) -> Vec<(Vec<f64>, Vec<f64>)> {
        let d = space.dim();
        (0..self.pairs)
            .into_par_iter()
            .map(|i| {
                let mut rng = crate::stream_rng(self.seed, i as u64);
                let k = 1 + (i as u32 % self.finest);
                let dist = space.diameter() * 0.5f64.powi(k as i32);
                for attempt in 0..64 {
                    let x = if rng.random::<f64>() < self.boundary_fraction {
                        space.boundary_sample(&mut rng)
                    } else {
                        space.sample(&mut rng)
                    };
                    let dir = random_unit(d, &mut rng);
                    // shrink towards x on later attempts so that a pair is always produced
                    let s = dist * rng.random_range(1.0..2.0) * 0.5f64.powi(attempt / 8);
                    let y: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + s * b).collect();
                    if space.contains(&y) {
                        return (x, y);
                    }
                }
                let x = space.sample(&mut rng);
                let y = space.sample(&mut rng);
                (x, y)
            })
            .collect()
    }
}

fn random_unit(d: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let s = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if s > 1e-3 && s <= 1.0 {
            return v.into_iter().map(|a| a / s).collect();
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderEstimate {
    pub exponent: f64,
    /// Max quotient over the pairs: a lower bound for the seminorm.
    pub seminorm: f64,
    pub pairs: usize,
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

/// Rejects `a <= 0`, integer `a` (Zygmund classes) and `a >= 2`.
pub fn check_exponent(a: f64) -> Result<()> {
    if !(a > 0.0 && a < 2.0) || a == 1.0 {
        return Err(Error::UnsupportedExponent(a));
    }
    Ok(())
}

fn norm_diff(u: &[C], v: &[C]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

fn dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Value (`k = 0`) or flattened central-difference gradient (`k = 1`) of `f` at `x`.
fn jet(f: &(dyn Fn(&[f64]) -> Result<Vec<C>> + Sync), x: &[f64], k: usize, h: f64) -> Result<Vec<C>> {
    if k == 0 {
        return f(x);
    }
    let mut out = Vec::new();
    for m in 0..x.len() {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[m] += h;
        xm[m] -= h;
        let (a, b) = (f(&xp)?, f(&xm)?);
        out.extend(a.iter().zip(&b).map(|(p, q)| (p - q) / (2.0 * h)));
    }
    Ok(out)
}

/// Max quotient with deterministic tie-breaking (first pair in list order wins).
fn best_of(quotients: Vec<(f64, usize)>) -> Option<(f64, usize)> {
    quotients.into_iter().fold(None, |acc, (q, i)| match acc {
        Some((b, j)) if b > q || (b == q && j < i) => Some((b, j)),
        _ if q.is_nan() => acc,
        _ => Some((q, i)),
    })
}

/// `max_pairs |D^k f(x) - D^k f(y)| / |x - y|^{a-k}`, `k = floor(a)`, derivatives by central
/// differences with step `h` (unused for `a < 1`).
pub fn holder_seminorm(
    f: &(dyn Fn(&[f64]) -> Result<Vec<C>> + Sync),
    a: f64,
    pairs: &[(Vec<f64>, Vec<f64>)],
    h: f64,
) -> Result<HolderEstimate> {
    check_exponent(a)?;
    if pairs.is_empty() {
        return Err(Error::EmptyPairs);
    }
    let k = if a > 1.0 { 1 } else { 0 };
    let beta = a - k as f64;
    let qs = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| {
            let d = dist(x, y);
            if d == 0.0 {
                return Ok((0.0, i));
            }
            Ok((norm_diff(&jet(f, x, k, h)?, &jet(f, y, k, h)?) / d.powf(beta), i))
        })
        .collect::<Result<Vec<_>>>()?;
    let best = best_of(qs);
    Ok(HolderEstimate {
        exponent: a,
        seminorm: best.map(|b| b.0).unwrap_or(0.0),
        pairs: pairs.len(),
        witness: best.map(|(_, i)| pairs[i].clone()),
    })
}

/// Quotients over all pairs of a point cloud with precomputed values (or gradients, for
/// `a > 1`, supplied by the caller as `values`).
pub fn holder_on_points(points: &[Vec<f64>], values: &[Vec<C>], a: f64) -> Result<HolderEstimate> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::UnsupportedExponent(a));
    }
    let m = points.len();
    if m < 2 {
        return Err(Error::EmptyPairs);
    }
    let idx: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let qs = idx
        .par_iter()
        .enumerate()
        .map(|(p, &(i, j))| {
            let d = dist(&points[i], &points[j]);
            let q = if d == 0.0 { 0.0 } else { norm_diff(&values[i], &values[j]) / d.powf(a) };
            (q, p)
        })
        .collect();
    let best = best_of(qs);
    Ok(HolderEstimate {
        exponent: a,
        seminorm: best.map(|b| b.0).unwrap_or(0.0),
        pairs: idx.len(),
        witness: best.map(|(_, p)| (points[idx[p].0].clone(), points[idx[p].1].clone())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(g: impl Fn(f64) -> f64 + Sync) -> impl Fn(&[f64]) -> Result<Vec<C>> + Sync {
        move |x: &[f64]| Ok(vec![C::new(g(x[0]), 0.0)])
    }

    #[test]
    fn calibration_functions() {
        let pairs = PairSampler::new(100_000, 1).sample(&Interval { a: 0.0, b: 1.0 });
        let sqrt = holder_seminorm(&scalar(|x| x.max(0.0).sqrt()), 0.5, &pairs, 1e-6).unwrap();
        assert!(sqrt.seminorm >= 0.9 && sqrt.seminorm <= 1.0 + 1e-12, "{}", sqrt.seminorm);
        let lin = holder_seminorm(&scalar(|x| x), 0.5, &pairs, 1e-6).unwrap();
        assert!(lin.seminorm >= 0.9 && lin.seminorm <= 1.0 + 1e-12, "{}", lin.seminorm);
        let c = holder_seminorm(&scalar(|_| 3.0), 0.5, &pairs, 1e-6).unwrap();
        assert_eq!(c.seminorm, 0.0);
    }

    #[test]
    fn gradient_branch() {
        // f = x^{3/2}: f' = 1.5 sqrt(x), |f|_{Lambda^{3/2}} = 1.5
        let pairs = PairSampler::new(20_000, 2).sample(&Interval { a: 0.0, b: 1.0 });
        let e = holder_seminorm(&scalar(|x| x.abs().powf(1.5)), 1.5, &pairs, 1e-7).unwrap();
        assert!(e.seminorm > 1.3 && e.seminorm < 1.5 + 1e-3, "{}", e.seminorm);
    }

    #[test]
    fn rejects_integer_and_empty() {
        let f = scalar(|x| x);
        assert!(matches!(holder_seminorm(&f, 1.0, &[(vec![0.0], vec![1.0])], 1e-6), Err(Error::UnsupportedExponent(_))));
        assert!(matches!(holder_seminorm(&f, 0.5, &[], 1e-6), Err(Error::EmptyPairs)));
    }
}
