//! The gain experiment: `|u|_{Lambda^{a+1/2}} / |phi|_{Lambda^a}` for solutions `u` of
//! `dbar u = phi`.

use rayon::prelude::*;
use serde::Serialize;

use super::holder::{holder_on_points, holder_seminorm, PairSampler, SampleSpace};
use crate::error::{Error, Result};
use crate::forms::{ExprField, FormField, FormValue};
use crate::geometry::domain::random_direction;
use crate::geometry::{CPoint, Domain};

#[derive(Clone, Debug, Serialize)]
pub struct GainReport {
    pub label: String,
    /// Data exponent; `0` stands for the sup norm.
    pub a: f64,
    pub phi_seminorm: f64,
    pub u_seminorm: f64,
    /// `u_seminorm / phi_seminorm`, `0` for vanishing data.
    pub ratio: f64,
    pub pairs: usize,
    pub witness: Option<(Vec<f64>, Vec<f64>)>,
}

/// Points of `D` at distance at least `collar` from the boundary: half spread over the domain,
/// half clustered around them at scales `2^-k * diameter`, `k = 2..=10`.
pub fn probe_cloud(dom: &Domain, count: usize, collar: f64, seed: u64) -> Result<Vec<CPoint>> {
    let base = crate::operators::interior_probes(dom, count.div_ceil(2), collar, seed)?;
    let mut rng = crate::seeded_rng(seed ^ 0x9e37);
    let mut out = base.clone();
    let mut k = 0;
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > 100 * count {
            return Err(Error::EmptyRegion("probe cloud".into()));
        }
        let b = base[out.len() % base.len()];
        let d = dom.diameter() * 0.5f64.powi(2 + (k % 9));
        let z = b + random_direction(dom.n(), &mut rng).scale(d);
        if dom.contains(&z) && dom.boundary_distance(&z).is_ok_and(|x| x >= collar) {
            out.push(z);
            k += 1;
        }
    }
    Ok(out)
}

/// `|z_1 - p|^s dzbar_1` on C^n.
pub fn rough_family(n: usize, s: f64, p: f64) -> Result<ExprField> {
    ExprField::from_pairs(n, 1, &[("1", &format!("abs(z1 - {p})^{s}"))])
}

fn coeffs(v: FormValue) -> Vec<num_complex::Complex64> {
    v.coeffs().to_vec()
}

/// Measures `phi` in `Lambda^a` (sup norm when `a = 0`) on pairs from `space`, and `u` in
/// `Lambda^{a+1/2}` over all pairs of `cloud`. Only `a + 1/2 < 1` is supported for `u`.
pub fn gain_report(
    label: &str,
    phi: &dyn FormField,
    space: &dyn SampleSpace,
    sampler: &PairSampler,
    u: &(dyn Fn(&CPoint) -> Result<FormValue> + Sync),
    cloud: &[CPoint],
    a: f64,
) -> Result<GainReport> {
    let b = a + 0.5;
    if !(0.0..0.5).contains(&a) {
        return Err(Error::UnsupportedExponent(b));
    }
    let pairs = sampler.sample(space);
    if pairs.is_empty() {
        return Err(Error::EmptyPairs);
    }
    let f = |x: &[f64]| Ok(coeffs(phi.eval(&CPoint::from_reals(x))));
    let phi_seminorm = if a == 0.0 {
        pairs
            .par_iter()
            .map(|(x, y)| {
                let fx = phi.eval(&CPoint::from_reals(x)).max_abs();
                fx.max(phi.eval(&CPoint::from_reals(y)).max_abs())
            })
            .reduce(|| 0.0, f64::max)
    } else {
        holder_seminorm(&f, a, &pairs, 1e-6 * space.diameter())?.seminorm
    };
    let values = cloud.par_iter().map(|z| u(z).map(coeffs)).collect::<Result<Vec<_>>>()?;
    let points: Vec<Vec<f64>> = cloud.iter().map(|z| z.to_reals()).collect();
    let est = holder_on_points(&points, &values, b)?;
    let ratio = if phi_seminorm == 0.0 { 0.0 } else { est.seminorm / phi_seminorm };
    Ok(GainReport {
        label: label.into(),
        a,
        phi_seminorm,
        u_seminorm: est.seminorm,
        ratio,
        pairs: est.pairs,
        witness: est.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::holder::DomainClosure;
    use crate::forms::ZeroField;
    use crate::geometry::DomainSpec;

    #[test]
    fn zero_data_gives_zero_ratio() {
        let dom = Domain::new(1, DomainSpec::Ball { radius: 1.0 }).unwrap();
        let cloud = probe_cloud(&dom, 8, 0.1, 1).unwrap();
        let phi = ZeroField { n: 1, q: 1 };
        let u = |_: &CPoint| Ok(FormValue::zeros(1, 0));
        let r = gain_report("zero", &phi, &DomainClosure(&dom), &PairSampler::new(100, 1), &u, &cloud, 0.0).unwrap();
        assert_eq!(r.ratio, 0.0);
    }

    #[test]
    fn rough_data_sup_norm() {
        let dom = Domain::new(2, DomainSpec::Ball { radius: 1.0 }).unwrap();
        let phi = rough_family(2, 0.5, 1.0).unwrap();
        let cloud = probe_cloud(&dom, 6, 0.2, 2).unwrap();
        let u = |z: &CPoint| Ok(FormValue::scalar(2, z[0]));
        let r = gain_report("s", &phi, &DomainClosure(&dom), &PairSampler::new(4000, 3), &u, &cloud, 0.0).unwrap();
        // sup |z1 - 1|^{1/2} over the closed ball is sqrt(2)
        assert!(r.phi_seminorm > 1.38 && r.phi_seminorm <= 2f64.sqrt() + 1e-12, "{}", r.phi_seminorm);
        assert!(r.u_seminorm > 0.0);
    }
}
