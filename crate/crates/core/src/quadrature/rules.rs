//! Boundary and volume rules built from [`SphereRule`] and the star-shaped parametrization.
//!
//! Every rule carries a fine node set at resolution `N` and a coarse one at `N / 2`; the
//! difference of the two estimates is the reported error.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gauss::gauss_legendre_on;
use super::sphere::SphereRule;
use crate::error::{Error, Result};
use crate::geometry::domain::ray_exit;
use crate::geometry::{CPoint, DefiningFunction, Domain, MAX_DIM};

/// Integration region relative to `D = {r < 0}` and `U = {r < delta}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    D,
    U,
    #[serde(rename = "UminusD")]
    UMinusD,
}

impl Region {
    pub fn tag(self) -> u32 {
        match self {
            Region::D => 1,
            Region::U => 2,
            Region::UMinusD => 3,
        }
    }

    pub fn from_tag(tag: u32) -> Option<Region> {
        match tag {
            1 => Some(Region::D),
            2 => Some(Region::U),
            3 => Some(Region::UMinusD),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::D => "D",
            Region::U => "U",
            Region::UMinusD => "UminusD",
        }
    }

    /// Level values bounding the radial segments (the first segment starts at the origin).
    fn levels(self, delta: f64) -> Vec<f64> {
        match self {
            Region::D => vec![0.0],
            Region::U | Region::UMinusD => vec![0.0, 0.25 * delta, 0.75 * delta, delta],
        }
    }

    pub fn contains(self, dom: &Domain, z: &CPoint) -> bool {
        let v = dom.defining_function().value(z);
        match self {
            Region::D => v < 0.0,
            Region::U => v < dom.delta(),
            Region::UMinusD => v >= 0.0 && v < dom.delta(),
        }
    }
}

/// Radial Gauss points on the exclusion ball; the nearest node sits at `0.034 eps` from `z`.
pub const INNER_POINTS: usize = 6;

/// Gauss points per radial segment at resolution `N`.
pub fn radial_points(resolution: usize) -> usize {
    (resolution / 4).max(3)
}

/// A boundary node: position and the flux vector `w rho^{2n-1} grad r / (grad r . omega)`,
/// whose length is the surface weight and whose direction is the outward normal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryNode {
    pub zeta: CPoint,
    pub flux: [f64; 2 * MAX_DIM],
}

impl BoundaryNode {
    pub fn weight(&self) -> f64 {
        self.flux.iter().map(|f| f * f).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug)]
pub struct BoundaryRule {
    n: usize,
    resolution: usize,
    fine: Vec<BoundaryNode>,
    coarse: Vec<BoundaryNode>,
    spacing: f64,
}

fn boundary_nodes(dom: &Domain, resolution: usize) -> Result<Vec<BoundaryNode>> {
    let n = dom.n();
    let r = dom.defining_function();
    let c = dom.center();
    SphereRule::new(n, resolution)
        .nodes
        .into_iter()
        .map(|(omega, w)| {
            let rho = dom.ray_exit(&c, &omega, 0.0)?;
            let zeta = c + omega.scale(rho);
            let g = r.real_gradient(&zeta);
            let radial = g.real_dot(&omega);
            if !(radial > 0.0) {
                return Err(Error::NonStarShaped(format!(
                    "grad r . omega = {radial:.3e} at {zeta}; the ray from the center is not transversal"
                )));
            }
            let mut flux = [0.0; 2 * MAX_DIM];
            let s = w * rho.powi(2 * n as i32 - 1) / radial;
            for (m, f) in flux.iter_mut().enumerate().take(2 * n) {
                *f = s * g.real(m);
            }
            Ok(BoundaryNode { zeta, flux })
        })
        .collect()
}

impl BoundaryRule {
    /// Product rule on `S^{2n-1}` pushed to `{r = 0}` by `omega -> center + rho(omega) omega`.
    pub fn build(dom: &Domain, resolution: usize) -> Result<BoundaryRule> {
        if resolution < 4 {
            return Err(Error::Config(format!("boundary resolution {resolution} must be at least 4")));
        }
        let fine = boundary_nodes(dom, resolution)?;
        let coarse = boundary_nodes(dom, resolution / 2)?;
        Ok(BoundaryRule { n: dom.n(), resolution, fine, coarse, spacing: dom.diameter() * PI / resolution as f64 })
    }

    pub(crate) fn from_parts(
        n: usize,
        resolution: usize,
        fine: Vec<BoundaryNode>,
        coarse: Vec<BoundaryNode>,
        spacing: f64,
    ) -> Self {
        BoundaryRule { n, resolution, fine, coarse, spacing }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn fine(&self) -> &[BoundaryNode] {
        &self.fine
    }

    pub fn coarse(&self) -> &[BoundaryNode] {
        &self.coarse
    }

    /// Angular node spacing times the domain radius.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Surface volume estimate of the fine rule.
    pub fn area(&self) -> f64 {
        self.fine.iter().map(BoundaryNode::weight).sum()
    }

    /// Distance from `z` to the nearest fine node.
    pub fn nearest_node_distance(&self, z: &CPoint) -> f64 {
        self.fine.iter().map(|b| (b.zeta - *z).norm()).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeNode {
    pub zeta: CPoint,
    pub weight: f64,
}

/// Ball about `center` integrated by its own polar sub-rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exclusion {
    pub center: CPoint,
    pub radius: f64,
}

#[derive(Clone, Debug)]
pub struct VolumeRule {
    n: usize,
    resolution: usize,
    region: Region,
    exclusion: Option<Exclusion>,
    fine: Vec<VolumeNode>,
    coarse: Vec<VolumeNode>,
    spacing: f64,
}

/// Distances along the ray `origin + s omega` to the successive level sets.
fn level_exits(r: &dyn DefiningFunction, origin: &CPoint, omega: &CPoint, levels: &[f64], scale: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(levels.len());
    let mut s = 0.0;
    for &level in levels {
        s += ray_exit(r, &(*origin + omega.scale(s)), omega, level, scale)?;
        out.push(s);
    }
    Ok(out)
}

fn volume_nodes(dom: &Domain, region: Region, resolution: usize, exclusion: Option<&Exclusion>) -> Result<Vec<VolumeNode>> {
    let n = dom.n();
    let r = dom.defining_function();
    let levels = region.levels(dom.delta());
    let m = radial_points(resolution);
    let origin = exclusion.map(|e| e.center).unwrap_or_else(|| dom.center());
    let mut nodes = Vec::new();
    for (omega, w) in SphereRule::new(n, resolution).nodes {
        let exits = level_exits(r.as_ref(), &origin, &omega, &levels, dom.diameter())?;
        let mut breaks = vec![0.0];
        if let Some(e) = exclusion {
            breaks.push(e.radius.min(0.5 * exits[0]));
        }
        breaks.extend(&exits);
        let first = if region == Region::UMinusD { breaks.len() - levels.len() } else { 0 };
        for (i, seg) in breaks[first..].windows(2).enumerate() {
            let points = if i == 0 && exclusion.is_some() { INNER_POINTS } else { m };
            for (s, ws) in gauss_legendre_on(points, seg[0], seg[1]) {
                nodes.push(VolumeNode { zeta: origin + omega.scale(s), weight: w * ws * s.powi(2 * n as i32 - 1) });
            }
        }
    }
    Ok(nodes)
}

impl VolumeRule {
    /// Radial-shell x sphere rule. With an exclusion `(z, eps)` and `z` in `D`, the rule is
    /// polar about `z`, with a separate radial segment on the `eps`-ball; the `|zeta - z|^{2n-1}`
    /// Jacobian makes the kernel singularity a bounded density. An exclusion is ignored for
    /// `U \ D`, which does not contain `z`.
    pub fn build(dom: &Domain, region: Region, resolution: usize, exclusion: Option<(CPoint, f64)>) -> Result<VolumeRule> {
        if resolution < 4 {
            return Err(Error::Config(format!("volume resolution {resolution} must be at least 4")));
        }
        if dom.delta() <= 0.0 && region == Region::UMinusD {
            return Err(Error::EmptyRegion("U \\ D with delta = 0".into()));
        }
        let exclusion = match (region, exclusion) {
            (Region::UMinusD, _) | (_, None) => None,
            (_, Some((z, eps))) => {
                if !dom.contains(&z) {
                    return Err(Error::OutOfScope(format!("polar rule center {z} must lie in D")));
                }
                if !(eps > 0.0) {
                    return Err(Error::Config(format!("exclusion radius {eps} must be positive")));
                }
                Some(Exclusion { center: z, radius: eps })
            }
        };
        let fine = volume_nodes(dom, region, resolution, exclusion.as_ref())?;
        let coarse = volume_nodes(dom, region, resolution / 2, exclusion.as_ref())?;
        if fine.is_empty() {
            return Err(Error::EmptyRegion(region.name().into()));
        }
        let spacing = dom.diameter() * PI / resolution as f64;
        Ok(VolumeRule { n: dom.n(), resolution, region, exclusion, fine, coarse, spacing })
    }

    pub(crate) fn from_parts(
        n: usize,
        resolution: usize,
        region: Region,
        fine: Vec<VolumeNode>,
        coarse: Vec<VolumeNode>,
        spacing: f64,
    ) -> Self {
        VolumeRule { n, resolution, region, exclusion: None, fine, coarse, spacing }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn exclusion(&self) -> Option<&Exclusion> {
        self.exclusion.as_ref()
    }

    pub fn fine(&self) -> &[VolumeNode] {
        &self.fine
    }

    pub fn coarse(&self) -> &[VolumeNode] {
        &self.coarse
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn volume(&self) -> f64 {
        self.fine.iter().map(|v| v.weight).sum()
    }

    pub fn coarse_volume(&self) -> f64 {
        self.coarse.iter().map(|v| v.weight).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;

    fn ball(n: usize) -> Domain {
        Domain::new(n, DomainSpec::Ball { radius: 1.0 }).unwrap()
    }

    #[test]
    fn boundary_weights() {
        let r1 = BoundaryRule::build(&ball(1), 16).unwrap();
        assert!((r1.area() - 2.0 * PI).abs() < 1e-12);
        let r2 = BoundaryRule::build(&ball(2), 32).unwrap();
        assert!((r2.area() / (2.0 * PI * PI) - 1.0).abs() < 1e-3);
        for b in r2.fine() {
            assert!(ball(2).defining_function().value(&b.zeta).abs() < 1e-12);
        }
    }

    #[test]
    fn ellipsoid_area_self_converges() {
        let dom = Domain::new(2, DomainSpec::Ellipsoid { semi_axes: vec![1.0, 1.0, 1.0, 2.0] }).unwrap();
        let a = BoundaryRule::build(&dom, 24).unwrap().area();
        let b = BoundaryRule::build(&dom, 48).unwrap().area();
        assert!((a / b - 1.0).abs() < 1e-4, "{a} {b}");
    }

    #[test]
    fn ball_volume_plain_and_polar() {
        let dom = ball(2);
        let v = VolumeRule::build(&dom, Region::D, 32, None).unwrap().volume();
        assert!((v / (PI * PI / 2.0) - 1.0).abs() < 1e-3, "{v}");
        let z = CPoint::from_reals(&[0.3, -0.2, 0.1, 0.4]);
        let rule = VolumeRule::build(&dom, Region::D, 32, Some((z, 0.05))).unwrap();
        assert!((rule.volume() / (PI * PI / 2.0) - 1.0).abs() < 1e-3, "{}", rule.volume());
        assert!(rule.fine().iter().all(|p| (p.zeta - z).norm() > 0.0));
    }

    #[test]
    fn shell_volume_self_converges() {
        let dom = ball(2);
        let a = VolumeRule::build(&dom, Region::UMinusD, 16, None).unwrap().volume();
        let b = VolumeRule::build(&dom, Region::UMinusD, 32, None).unwrap().volume();
        // {|z|^2 < 1 + delta} minus the unit ball, delta = 0.2
        let exact = PI * PI / 2.0 * (1.2f64.powi(2) - 1.0);
        assert!((a / b - 1.0).abs() < 1e-4 && (b / exact - 1.0).abs() < 1e-6, "{a} {b} {exact}");
    }

    #[test]
    fn inverse_distance_on_disk() {
        let dom = ball(1);
        let rule = VolumeRule::build(&dom, Region::D, 32, Some((CPoint::zeros(1), 0.1))).unwrap();
        let v: f64 = rule.fine().iter().map(|p| p.weight / p.zeta.norm()).sum();
        assert!((v - 2.0 * PI).abs() < 1e-3 * 2.0 * PI);
    }
}
