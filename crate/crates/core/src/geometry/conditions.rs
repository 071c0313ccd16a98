//! Sampled estimates of the C-linear convexity quotients.
//!
//! Every condition has the form `|r_z.(z - w)| >= c * rhs(z, w)` over some set of pairs; the
//! estimators return the smallest sampled quotient `|r_z.(z - w)| / rhs` with its witness.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::defining::DefiningFunction;
use super::domain::{random_direction, Domain};
use super::point::CPoint;
use crate::error::{Error, Result};
use crate::{seeded_rng, stream_rng};

/// `r_zeta . (zeta - z) = sum_j dr/dzeta_j (zeta_j - z_j)`.
pub fn leray_denominator(r: &dyn DefiningFunction, zeta: &CPoint, z: &CPoint) -> Complex64 {
    r.grad(zeta).pair(&(*zeta - *z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ConditionTag {
    /// `zeta` on the boundary, `z` in the closure; rhs `|zeta - z|^2`.
    #[serde(rename = "c0")]
    C0,
    /// `zeta` in `U \ D`, `z` in the closure; rhs `|zeta - z|^2`.
    #[serde(rename = "Cplus")]
    CPlus,
    /// As `CPlus` with rhs `r(zeta) - r(z) + |zeta - z|^2`.
    #[serde(rename = "b")]
    B,
    /// Both points on the boundary; rhs `|zeta - z|^2`.
    #[serde(rename = "c")]
    C,
    /// As `CPlus` with rhs `d(zeta) + d(z) + |Im r_zeta.(zeta - z)| + |zeta - z|^2`.
    #[serde(rename = "Cplusplus")]
    CPlusPlus,
}

impl ConditionTag {
    /// The four conditions shown to be equivalent for C^{1,1} domains.
    pub const CORE: [ConditionTag; 4] = [ConditionTag::C0, ConditionTag::CPlus, ConditionTag::B, ConditionTag::C];
    pub const ALL: [ConditionTag; 5] =
        [ConditionTag::C0, ConditionTag::CPlus, ConditionTag::B, ConditionTag::C, ConditionTag::CPlusPlus];

    pub fn name(self) -> &'static str {
        match self {
            ConditionTag::C0 => "c0",
            ConditionTag::CPlus => "Cplus",
            ConditionTag::B => "b",
            ConditionTag::C => "c",
            ConditionTag::CPlusPlus => "Cplusplus",
        }
    }

    fn zeta_in_collar(self) -> bool {
        !matches!(self, ConditionTag::C0 | ConditionTag::C)
    }

    fn z_on_boundary(self) -> bool {
        self == ConditionTag::C
    }
}

impl fmt::Display for ConditionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub boundary: usize,
    pub interior: usize,
    pub collar: usize,
    /// Number of geometric scales in `[1e-4, 1e-1] * diameter / 2` for near-diagonal pairs.
    pub diagonal_depth: usize,
    /// Complex-tangent directions probed per `zeta`.
    pub tangent: usize,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { boundary: 400, interior: 400, collar: 400, diagonal_depth: 12, tangent: 4, seed: 7 }
    }
}

impl SamplerConfig {
    /// Scales every sample count by `factor`.
    pub fn scaled(&self, factor: usize) -> Self {
        SamplerConfig {
            boundary: self.boundary * factor,
            interior: self.interior * factor,
            collar: self.collar * factor,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub tag: ConditionTag,
    pub infimum: f64,
    pub witness_zeta: CPoint,
    pub witness_z: CPoint,
    pub pairs: usize,
    pub diagonal_depth: usize,
    /// Quotients at or below this value count as failures.
    pub tolerance: f64,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.infimum > self.tolerance
    }
}

impl Serialize for CPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_reals().serialize(s)
    }
}

struct SampleSets {
    boundary: Vec<CPoint>,
    interior: Vec<CPoint>,
    collar: Vec<CPoint>,
}

fn sample_sets(dom: &Domain, cfg: &SamplerConfig) -> Result<SampleSets> {
    let n = dom.n();
    let mut rng = seeded_rng(cfg.seed);
    let mut boundary = Vec::with_capacity(cfg.boundary);
    for _ in 0..cfg.boundary {
        boundary.push(dom.boundary_point(&random_direction(n, &mut rng))?);
    }
    let mut interior = Vec::with_capacity(cfg.interior);
    for _ in 0..cfg.interior {
        let w = random_direction(n, &mut rng);
        let t = dom.ray_exit(&dom.center(), &w, 0.0)?;
        let u: f64 = rng.random();
        interior.push(dom.center() + w.scale(t * u.powf(0.5 / n as f64)));
    }
    let mut collar = Vec::with_capacity(cfg.collar);
    for _ in 0..cfg.collar {
        let w = random_direction(n, &mut rng);
        let level = dom.delta() * rng.random_range(0.0..0.999);
        let t = dom.ray_exit(&dom.center(), &w, level)?;
        collar.push(dom.center() + w.scale(t));
    }
    Ok(SampleSets { boundary, interior, collar })
}

/// Unit vector in the complex tangent space `{v : r_zeta . v = 0}` built from `u`.
pub fn complex_tangent(grad: &CPoint, u: &CPoint) -> Option<CPoint> {
    let b = grad.conj();
    let bb = b.norm_sqr();
    if bb == 0.0 {
        return None;
    }
    let proj = grad.pair(u) / bb;
    let v = *u - b * proj;
    let s = v.norm();
    (s > 1e-12 * u.norm()).then(|| v.scale(1.0 / s))
}

struct Evaluator<'a> {
    r: &'a dyn DefiningFunction,
    dom: &'a Domain,
    tag: ConditionTag,
}

impl Evaluator<'_> {
    fn distance(&self, p: &CPoint) -> f64 {
        match self.dom.radial_projection(p, 0.0) {
            Ok(b) => self.r.value(p).abs() / self.r.real_gradient(&b).norm(),
            Err(_) => 0.0,
        }
    }

    fn quotient(&self, zeta: &CPoint, grad: &CPoint, z: &CPoint) -> f64 {
        let d = *zeta - *z;
        let d2 = d.norm_sqr();
        if d2 == 0.0 {
            return f64::INFINITY;
        }
        let p = grad.pair(&d);
        let rhs = match self.tag {
            ConditionTag::C0 | ConditionTag::CPlus | ConditionTag::C => d2,
            ConditionTag::B => self.r.value(zeta) - self.r.value(z) + d2,
            ConditionTag::CPlusPlus => self.distance(zeta) + self.distance(z) + p.im.abs() + d2,
        };
        p.norm() / rhs
    }

    /// Maps a candidate into the admissible `z`-set (the closure, or the boundary for `C`).
    fn admissible(&self, z: CPoint) -> Option<CPoint> {
        if self.tag.z_on_boundary() || !self.dom.in_closure(&z) {
            self.dom.radial_projection(&z, 0.0).ok()
        } else {
            Some(z)
        }
    }

    /// Marches along a complex tangent line looking for a point of the closure (or a boundary
    /// crossing for `C`). Such a point has vanishing pairing.
    fn tangent_witness(&self, zeta: &CPoint, v: &CPoint, depth: usize) -> Option<CPoint> {
        let diam = self.dom.diameter();
        let steps = 4 * depth.max(4);
        let mut prev = 0.0;
        for k in 0..steps {
            let t = diam * 1e-4 * (1e4f64).powf(k as f64 / (steps - 1) as f64);
            let z = *zeta + v.scale(t);
            if self.dom.contains(&z) {
                if !self.tag.z_on_boundary() {
                    return Some(z);
                }
                let (mut lo, mut hi) = (prev, t);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if self.dom.contains(&(*zeta + v.scale(mid))) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return Some(*zeta + v.scale(hi));
            }
            prev = t;
        }
        None
    }
}

type Best = (f64, CPoint, CPoint);

fn better(a: Best, b: Best) -> Best {
    let ord = a.0.total_cmp(&b.0).then_with(|| a.1.lex_cmp(&b.1)).then_with(|| a.2.lex_cmp(&b.2));
    if ord == Ordering::Greater {
        b
    } else {
        a
    }
}

/// Sampled infimum of the quotient for `tag`, using the defining function `r` of `dom`.
///
/// Samples come from `dom` (so two defining functions of the same domain see the same pairs):
/// all products of the `zeta`- and `z`-sets, random near-diagonal pairs at geometric scales,
/// near-diagonal pairs along complex tangents, and complex tangent lines marched out to the
/// diameter.
pub fn estimate_condition(
    r: &dyn DefiningFunction,
    dom: &Domain,
    tag: ConditionTag,
    cfg: &SamplerConfig,
) -> Result<ConditionReport> {
    let sets = sample_sets(dom, cfg)?;
    estimate_on(r, dom, tag, cfg, &sets)
}

fn estimate_on(
    r: &dyn DefiningFunction,
    dom: &Domain,
    tag: ConditionTag,
    cfg: &SamplerConfig,
    sets: &SampleSets,
) -> Result<ConditionReport> {
    if sets.boundary.is_empty() {
        return Err(Error::DegenerateSample("no boundary samples".into()));
    }
    if tag.zeta_in_collar() && (sets.collar.is_empty() || dom.delta() <= 0.0) {
        return Err(Error::DegenerateSample("collar U \\ D is empty".into()));
    }
    if !tag.z_on_boundary() && sets.interior.is_empty() {
        return Err(Error::DegenerateSample("no interior samples".into()));
    }
    let mut zetas = sets.boundary.clone();
    if tag.zeta_in_collar() {
        zetas.extend_from_slice(&sets.collar);
    }
    let mut zs = sets.boundary.clone();
    if !tag.z_on_boundary() {
        zs.extend_from_slice(&sets.interior);
    }
    let ev = Evaluator { r, dom, tag };
    let n = dom.n();
    let depth = cfg.diagonal_depth;
    let half_diam = 0.5 * dom.diameter();

    let (best, count) = zetas
        .par_iter()
        .enumerate()
        .map(|(i, zeta)| {
            let grad = r.grad(zeta);
            let mut best: Best = (f64::INFINITY, *zeta, *zeta);
            let mut count = 0usize;
            let consider = |z: &CPoint, best: &mut Best, count: &mut usize| {
                *count += 1;
                let q = ev.quotient(zeta, &grad, z);
                if q < best.0 || (q == best.0 && z.lex_cmp(&best.2) == Ordering::Less) {
                    *best = (q, *zeta, *z);
                }
            };
            for z in &zs {
                consider(z, &mut best, &mut count);
            }
            let mut rng = stream_rng(cfg.seed, i as u64);
            let tangents: Vec<CPoint> = (0..cfg.tangent)
                .filter_map(|_| complex_tangent(&grad, &random_direction(n, &mut rng)))
                .collect();
            for k in 0..depth {
                let frac = if depth > 1 { k as f64 / (depth - 1) as f64 } else { 0.0 };
                let s = half_diam * 1e-4 * 1e3f64.powf(frac);
                let u = random_direction(n, &mut rng);
                for dir in std::iter::once(u).chain(tangents.iter().copied()) {
                    if let Some(z) = ev.admissible(*zeta + dir.scale(s)) {
                        consider(&z, &mut best, &mut count);
                    }
                }
            }
            for v in &tangents {
                if let Some(z) = ev.tangent_witness(zeta, v, depth) {
                    consider(&z, &mut best, &mut count);
                }
            }
            (best, count)
        })
        .reduce(
            || ((f64::INFINITY, CPoint::zeros(n), CPoint::zeros(n)), 0),
            |a, b| (better(a.0, b.0), a.1 + b.1),
        );

    let mean_grad = sets.boundary.iter().map(|p| r.grad(p).norm()).sum::<f64>() / sets.boundary.len() as f64;
    Ok(ConditionReport {
        tag,
        infimum: best.0,
        witness_zeta: best.1,
        witness_z: best.2,
        pairs: count,
        diagonal_depth: depth,
        tolerance: 1e-6 * mean_grad / dom.diameter(),
    })
}

/// Reports for all five conditions (the four primary ones plus `CPlusPlus`).
pub fn estimate_all(r: &dyn DefiningFunction, dom: &Domain, cfg: &SamplerConfig) -> Result<Vec<ConditionReport>> {
    let sets = sample_sets(dom, cfg)?;
    ConditionTag::ALL.iter().map(|&t| estimate_on(r, dom, t, cfg, &sets)).collect()
}

/// True iff `r1` and `r2` (same zero set) pass or fail each primary condition together.
pub fn check_stability(
    r1: &dyn DefiningFunction,
    r2: &dyn DefiningFunction,
    dom: &Domain,
    cfg: &SamplerConfig,
) -> Result<bool> {
    let sets = sample_sets(dom, cfg)?;
    let tol = 1e-8 * dom.diameter();
    let mut worst = 0.0f64;
    for p in &sets.boundary {
        for r in [r1, r2] {
            worst = worst.max(r.value(p).abs() / r.real_gradient(p).norm());
        }
    }
    if worst > tol {
        return Err(Error::ZeroSetMismatch(worst));
    }
    for tag in ConditionTag::CORE {
        let a = estimate_on(r1, dom, tag, cfg, &sets)?;
        let b = estimate_on(r2, dom, tag, cfg, &sets)?;
        if a.holds() != b.holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::DomainSpec;

    #[test]
    fn pairing_examples() {
        let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 }).unwrap();
        let zeta = CPoint::new(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let z = CPoint::new(&[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)]);
        let p = leray_denominator(dom.defining_function().as_ref(), &zeta, &z);
        assert!((p - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(leray_denominator(dom.defining_function().as_ref(), &z, &z), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn tangent_is_orthogonal() {
        let g = CPoint::new(&[Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5)]);
        let u = CPoint::new(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]);
        let v = complex_tangent(&g, &u).unwrap();
        assert!(g.pair(&v).norm() < 1e-14);
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn empty_collar_is_degenerate() {
        let dom = Domain::new(1, DomainSpec::Ball { radius: 1.0 }).unwrap();
        let cfg = SamplerConfig { collar: 0, ..SamplerConfig::default() };
        let err = estimate_condition(dom.defining_function().as_ref(), &dom, ConditionTag::CPlus, &cfg);
        assert!(matches!(err, Err(Error::DegenerateSample(_))));
    }
}
