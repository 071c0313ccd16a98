use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::defining::{DefiningFunction, PowerFunction, Quadric, RadiusFunction, StarShapedFunction};
use super::point::CPoint;
use super::MAX_DIM;
use crate::error::{Error, Result};

/// Catalog of test domains.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Ball { radius: f64 },
    /// Semi-axes along `x_1, y_1, ..., x_n, y_n`.
    Ellipsoid { semi_axes: Vec<f64> },
    /// `sum_m |x_m|^{p_m} < level`.
    PowerDomain { exponents: Vec<f64>, level: f64 },
    /// Radius `1 + b cos(theta)` in the `z_1` plane; for n > 1 the body of revolution through
    /// the remaining coordinates.
    Limacon { b: f64 },
    StarShaped { radius: RadiusFunction },
}

impl DomainSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DomainSpec::Ball { .. } => "ball",
            DomainSpec::Ellipsoid { .. } => "ellipsoid",
            DomainSpec::PowerDomain { .. } => "power_domain",
            DomainSpec::Limacon { .. } => "limacon",
            DomainSpec::StarShaped { .. } => "star_shaped",
        }
    }
}

/// A bounded domain `D = {r < 0}`, star-shaped about `center`, together with its working
/// neighborhood `U = {r < delta}`.
#[derive(Clone, Debug)]
pub struct Domain {
    spec: DomainSpec,
    center: CPoint,
    r: Arc<dyn DefiningFunction>,
    scale: f64,
    diameter: f64,
    delta: f64,
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

impl Domain {
    pub fn new(n: usize, spec: DomainSpec) -> Result<Domain> {
        if !(1..=MAX_DIM).contains(&n) {
            return Err(Error::Dimension(n));
        }
        let center = CPoint::zeros(n);
        let (r, scale): (Arc<dyn DefiningFunction>, f64) = match &spec {
            DomainSpec::Ball { radius } => {
                check(*radius > 0.0, || format!("ball radius {radius} must be positive"))?;
                (Arc::new(Quadric::ball(center, *radius)), 2.0 * radius)
            }
            DomainSpec::Ellipsoid { semi_axes } => {
                check(semi_axes.len() == 2 * n, || format!("ellipsoid needs {} semi-axes", 2 * n))?;
                check(semi_axes.iter().all(|a| *a > 0.0), || "semi-axes must be positive".into())?;
                let amax = semi_axes.iter().cloned().fold(0.0, f64::max);
                (Arc::new(Quadric::ellipsoid(center, semi_axes)), 2.0 * amax)
            }
            DomainSpec::PowerDomain { exponents, level } => {
                check(exponents.len() == 2 * n, || format!("power domain needs {} exponents", 2 * n))?;
                check(exponents.iter().all(|m| *m > 1.0 && m.is_finite()), || {
                    format!("power-domain exponents must satisfy m > 1, got {exponents:?}")
                })?;
                check(*level > 0.0, || format!("power-domain level {level} must be positive"))?;
                let ext = exponents.iter().map(|p| level.powf(1.0 / p)).fold(0.0, f64::max);
                (Arc::new(PowerFunction::new(exponents.clone(), *level)), 2.0 * ext)
            }
            DomainSpec::Limacon { b } => {
                check(*b > 0.0 && *b < 1.0, || format!("limaçon parameter b={b} must lie in (0,1)"))?;
                let rf = RadiusFunction::limacon(n, *b);
                (Arc::new(StarShapedFunction::new(center, rf)), 2.0 * (1.0 + b))
            }
            DomainSpec::StarShaped { radius } => {
                check(radius.tilt.len() == 2 * n, || format!("radius tilt needs {} entries", 2 * n))?;
                check(radius.base > 0.0, || "radius base must be positive".into())?;
                let tilt: f64 = radius.tilt.iter().map(|a| a * a).sum::<f64>().sqrt();
                let quad: f64 = radius.quad.iter().flatten().map(|a| a.abs()).sum();
                (Arc::new(StarShapedFunction::new(center, radius.clone())), 2.0 * (radius.base + tilt + quad))
            }
        };
        Self::assemble(spec, center, r, scale)
    }

    /// Same geometry as `self`, described by a different defining function (which must have the
    /// same zero set; see [`super::conditions::check_stability`]).
    pub fn with_defining_function(&self, r: Arc<dyn DefiningFunction>) -> Result<Domain> {
        Self::assemble(self.spec.clone(), self.center, r, self.scale)
    }

    fn assemble(spec: DomainSpec, center: CPoint, r: Arc<dyn DefiningFunction>, scale: f64) -> Result<Domain> {
        if r.value(&center) >= 0.0 {
            return Err(Error::Domain("center is not inside the domain".into()));
        }
        if let DomainSpec::StarShaped { radius } = &spec {
            check_radius_positive(center.dim(), radius)?;
        }
        let mut dom = Domain { spec, center, r, scale, diameter: scale, delta: 0.1 * scale };
        dom.diameter = match &dom.spec {
            DomainSpec::Ball { .. } | DomainSpec::Ellipsoid { .. } => scale,
            _ => dom.sampled_diameter()?,
        };
        dom.delta = 0.1 * dom.diameter;
        Ok(dom)
    }

    fn sampled_diameter(&self) -> Result<f64> {
        let mut rng = crate::seeded_rng(0x5eed_d1a);
        let mut best = 0.0f64;
        let axes = (0..2 * self.n()).map(|m| CPoint::real_axis(self.n(), m));
        let random: Vec<CPoint> = (0..512).map(|_| random_direction(self.n(), &mut rng)).collect();
        for w in axes.chain(random) {
            let a = self.ray_exit(&self.center, &w, 0.0)?;
            let b = self.ray_exit(&self.center, &(-w), 0.0)?;
            best = best.max(a + b);
        }
        Ok(best)
    }

    pub fn n(&self) -> usize {
        self.center.dim()
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn center(&self) -> CPoint {
        self.center
    }

    pub fn defining_function(&self) -> &Arc<dyn DefiningFunction> {
        &self.r
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Level `delta` of the neighborhood `U = {r < delta}`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn contains(&self, z: &CPoint) -> bool {
        self.r.value(z) < 0.0
    }

    pub fn in_closure(&self, z: &CPoint) -> bool {
        self.r.value(z) <= 0.0
    }

    pub fn in_neighborhood(&self, z: &CPoint) -> bool {
        self.r.value(z) < self.delta
    }

    /// First `s > 0` with `r(origin + s*dir) = level`.
    pub fn ray_exit(&self, origin: &CPoint, dir: &CPoint, level: f64) -> Result<f64> {
        ray_exit(self.r.as_ref(), origin, dir, level, self.scale)
    }

    pub fn boundary_point(&self, dir: &CPoint) -> Result<CPoint> {
        let t = self.ray_exit(&self.center, dir, 0.0)?;
        Ok(self.center + dir.scale(t))
    }

    /// Radial projection of `z` onto the level set `{r = level}` along the ray from the center.
    pub fn radial_projection(&self, z: &CPoint, level: f64) -> Result<CPoint> {
        let v = *z - self.center;
        let s = v.norm();
        if s == 0.0 {
            return Err(Error::DegenerateSample("cannot project the center".into()));
        }
        let w = v.scale(1.0 / s);
        let t = self.ray_exit(&self.center, &w, level)?;
        Ok(self.center + w.scale(t))
    }

    /// Distance estimate `|r(z)| / |grad r(p)|`, `p` the radial projection of `z` onto the boundary.
    pub fn boundary_distance(&self, z: &CPoint) -> Result<f64> {
        let p = self.radial_projection(z, 0.0)?;
        Ok(self.r.value(z).abs() / self.r.real_gradient(&p).norm())
    }
}

fn check_radius_positive(n: usize, rf: &RadiusFunction) -> Result<()> {
    let mut rng = crate::seeded_rng(0x4ad1);
    let min = (0..1024)
        .map(|_| rf.value(&random_direction(n, &mut rng).to_reals()))
        .fold(f64::INFINITY, f64::min);
    check(min > 0.0, || format!("radius function is not positive (min {min:.3e})"))
}

/// Uniform random direction on the unit sphere of C^n = R^{2n}.
pub fn random_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CPoint {
    loop {
        let xy: Vec<f64> = (0..2 * n).map(|_| rng.sample(StandardNormal)).collect();
        let p = CPoint::from_reals(&xy);
        let s = p.norm();
        if s > 1e-12 {
            return p.scale(1.0 / s);
        }
    }
}

/// First crossing of the level set along a ray: coarse march, then safeguarded Newton.
pub fn ray_exit(r: &dyn DefiningFunction, origin: &CPoint, dir: &CPoint, level: f64, scale: f64) -> Result<f64> {
    let f = |s: f64| r.value(&(*origin + dir.scale(s))) - level;
    let df = |s: f64| 2.0 * r.grad(&(*origin + dir.scale(s))).pair(dir).re;
    if f(0.0) >= 0.0 {
        return Err(Error::EmptyRegion(format!("ray origin {origin} is not inside the level set {level}")));
    }
    let step = scale / 16.0;
    let mut hi = 0.0;
    let mut found = false;
    for k in 1..=4096 {
        hi = k as f64 * step;
        if f(hi) > 0.0 {
            found = true;
            break;
        }
    }
    if !found {
        return Err(Error::NonStarShaped(format!("no exit from level {level} along {dir}")));
    }
    let mut lo = hi - step;
    let mut s = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fs = f(s);
        if fs > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let d = df(s);
        let mut next = if d != 0.0 { s - fs / d } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - s).abs() <= 4.0 * f64::EPSILON * (1.0 + s.abs()) || hi - lo <= 4.0 * f64::EPSILON * (1.0 + hi) {
            return Ok(next);
        }
        s = next;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_validation() {
        assert!(Domain::new(2, DomainSpec::PowerDomain { exponents: vec![1.0, 2.0, 2.0, 2.0], level: 1.0 }).is_err());
        assert!(Domain::new(1, DomainSpec::Limacon { b: 1.2 }).is_err());
        assert!(Domain::new(2, DomainSpec::Ellipsoid { semi_axes: vec![1.0, 1.0] }).is_err());
        assert!(Domain::new(5, DomainSpec::Ball { radius: 1.0 }).is_err());
        assert!(Domain::new(2, DomainSpec::Ball { radius: 1.0 }).is_ok());
    }

    #[test]
    fn ray_exit_on_ball_and_power_domain() {
        let d = Domain::new(2, DomainSpec::Ball { radius: 1.0 }).unwrap();
        let w = CPoint::from_reals(&[0.5, 0.5, 0.5, 0.5]);
        assert!((d.ray_exit(&d.center(), &w, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((d.ray_exit(&d.center(), &w, 0.21).unwrap() - 1.1f64).abs() < 1e-14);
        assert!((d.delta() - 0.2).abs() < 1e-15);

        let p = Domain::new(1, DomainSpec::PowerDomain { exponents: vec![1.5, 1.5], level: 1.0 }).unwrap();
        let e = CPoint::from_reals(&[1.0, 0.0]);
        assert!((p.ray_exit(&p.center(), &e, 0.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((p.diameter() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn limacon_diameter() {
        let d = Domain::new(1, DomainSpec::Limacon { b: 0.5 }).unwrap();
        // rho(0) + rho(pi) = 1.5 + 0.5
        assert!(d.diameter() >= 2.0 - 1e-9);
    }
}
