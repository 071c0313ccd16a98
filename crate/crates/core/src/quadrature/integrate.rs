//! Kernel x form integrals over boundary and volume rules.
//!
//! The integrand is `K(z, zeta) ^ phi(zeta)` with `K` a sum of monomials
//! `c[L, J] dzetabar_L ^ dzbar_J ^ dzeta_1 ^ ... ^ dzeta_n`. Moving `dzbar_J` to the front costs
//! `(-1)^{|J||L|}`, and the remaining zeta-form is paired with the rule through its real
//! expansion ([`PairingTable`]).

use num_complex::Complex64;
use rayon::prelude::*;

use super::pairing::PairingTable;
use super::rules::{BoundaryRule, Region, VolumeRule};
use crate::error::{Error, Result};
use crate::forms::{FormField, FormValue};
use crate::geometry::CPoint;
use crate::kernels::Kernel;

type C = Complex64;

const CHUNK: usize = 512;

/// An integral estimate: the fine value `Q_N`, the coarse value `Q_{N/2}` and
/// `error = max |Q_N - Q_{N/2}|` over coefficients.
#[derive(Clone, Debug)]
pub struct Integral {
    pub value: FormValue,
    pub coarse: FormValue,
    pub error: f64,
}

impl Integral {
    pub fn zero(n: usize, q: usize) -> Self {
        Integral { value: FormValue::zeros(n, q), coarse: FormValue::zeros(n, q), error: 0.0 }
    }

    fn with(value: FormValue, coarse: FormValue) -> Self {
        let error = (&value - &coarse).max_abs();
        Integral { value, coarse, error }
    }

    pub fn add(&self, other: &Integral) -> Integral {
        Integral::with(&self.value + &other.value, &self.coarse + &other.coarse)
    }

    pub fn sub(&self, other: &Integral) -> Integral {
        Integral::with(&self.value - &other.value, &self.coarse - &other.coarse)
    }
}

/// Values of a field at the fine and coarse nodes of a rule; reused across many `z`.
#[derive(Clone, Debug)]
pub struct FieldSamples {
    pub n: usize,
    pub q: usize,
    pub fine: Vec<FormValue>,
    pub coarse: Vec<FormValue>,
}

impl FieldSamples {
    fn take(phi: &dyn FormField, fine: &[CPoint], coarse: &[CPoint]) -> Self {
        let eval = |pts: &[CPoint]| pts.par_iter().map(|p| phi.eval(p)).collect();
        FieldSamples { n: phi.n(), q: phi.q(), fine: eval(fine), coarse: eval(coarse) }
    }

    pub fn on_boundary(rule: &BoundaryRule, phi: &dyn FormField) -> Self {
        let f: Vec<CPoint> = rule.fine().iter().map(|b| b.zeta).collect();
        let c: Vec<CPoint> = rule.coarse().iter().map(|b| b.zeta).collect();
        Self::take(phi, &f, &c)
    }

    pub fn on_volume(rule: &VolumeRule, phi: &dyn FormField) -> Self {
        let f: Vec<CPoint> = rule.fine().iter().map(|b| b.zeta).collect();
        let c: Vec<CPoint> = rule.coarse().iter().map(|b| b.zeta).collect();
        Self::take(phi, &f, &c)
    }

    pub fn is_zero(&self) -> bool {
        self.fine.iter().chain(&self.coarse).all(|v| v.max_abs() == 0.0)
    }
}

/// Fixed-shape pairwise sum, independent of thread scheduling.
fn pairwise_sum(mut parts: Vec<Vec<C>>) -> Vec<C> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().unwrap_or_default()
}

struct Plan {
    q_out: usize,
    sign: f64,
    table: PairingTable,
}

fn plan(kernel: &Kernel, n: usize, phi_q: usize, q_out: usize, boundary: bool) -> Result<Plan> {
    let name = kernel.kind.name();
    let deg = kernel.kind.bar_degree(n).ok_or(Error::Degree { kernel: name, q: q_out, n })?;
    if q_out > deg {
        return Err(Error::Degree { kernel: name, q: q_out, n });
    }
    let l_len = deg - q_out;
    let top = if boundary { n - 1 } else { n };
    if l_len + phi_q != top {
        return Err(Error::Degree { kernel: name, q: q_out, n });
    }
    let sign = if (q_out * l_len) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Plan { q_out, sign, table: PairingTable::new(n, l_len, phi_q) })
}

impl Plan {
    /// Adds `weight * K ^ phi` at one node to `acc` (indexed by output `J`).
    fn accumulate(
        &self,
        kernel: &Kernel,
        z: &CPoint,
        zeta: &CPoint,
        phi: &FormValue,
        pair: impl Fn(&[C]) -> C,
        acc: &mut [C],
    ) -> Result<()> {
        let coeffs = kernel.coeffs(z, zeta, self.q_out)?;
        let values = coeffs.values();
        let (nl, nk) = (self.table.nl(), self.table.nk());
        for (a, out) in acc.iter_mut().enumerate() {
            for b in 0..nl {
                let c = values[a * nl + b];
                if c == C::new(0.0, 0.0) {
                    continue;
                }
                let mut s = C::new(0.0, 0.0);
                for k in 0..nk {
                    let f = phi[k];
                    if f != C::new(0.0, 0.0) {
                        s += f * pair(self.table.get(b, k));
                    }
                }
                *out += c * s * self.sign;
            }
        }
        Ok(())
    }
}

fn run<N: Sync>(
    nodes: &[N],
    samples: &[FormValue],
    dim: usize,
    body: impl Fn(&N, &FormValue, &mut [C]) -> Result<()> + Sync,
) -> Result<Vec<C>> {
    let parts: Vec<Vec<C>> = nodes
        .par_chunks(CHUNK)
        .zip(samples.par_chunks(CHUNK))
        .map(|(ns, vs)| {
            let mut acc = vec![C::new(0.0, 0.0); dim];
            for (node, v) in ns.iter().zip(vs) {
                if v.max_abs() != 0.0 {
                    body(node, v, &mut acc)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = pairwise_sum(parts);
    total.resize(dim, C::new(0.0, 0.0));
    Ok(total)
}

fn finish(n: usize, q: usize, fine: Vec<C>, coarse: Vec<C>) -> Integral {
    Integral::with(FormValue::from_coeffs(n, q, fine), FormValue::from_coeffs(n, q, coarse))
}

/// `int_{bD} K(z, .) ^ phi` from pre-sampled `phi`.
pub fn integrate_boundary_samples(
    rule: &BoundaryRule,
    kernel: &Kernel,
    samples: &FieldSamples,
    z: &CPoint,
    q_out: usize,
) -> Result<Integral> {
    let n = rule.n();
    let p = plan(kernel, n, samples.q, q_out, true)?;
    let dim = FormValue::zeros(n, q_out).coeffs().len();
    if samples.is_zero() {
        return Ok(Integral::zero(n, q_out));
    }
    let required = 2.0 * rule.spacing();
    let dist = rule.nearest_node_distance(z);
    if dist < required {
        return Err(Error::Proximity(dist / required));
    }
    let body = |node: &super::rules::BoundaryNode, v: &FormValue, acc: &mut [C]| {
        let flux = &node.flux[..2 * n];
        p.accumulate(kernel, z, &node.zeta, v, |t: &[C]| t.iter().zip(flux).map(|(c, f)| c * f).sum(), acc)
    };
    let fine = run(rule.fine(), &samples.fine, dim, body)?;
    let coarse = run(rule.coarse(), &samples.coarse, dim, body)?;
    Ok(finish(n, q_out, fine, coarse))
}

/// `int_{bD} K(z, .) ^ phi`, boundary oriented as the boundary of `D`.
pub fn integrate_kernel_boundary(
    rule: &BoundaryRule,
    kernel: &Kernel,
    phi: &dyn FormField,
    z: &CPoint,
    q_out: usize,
) -> Result<Integral> {
    plan(kernel, rule.n(), phi.q(), q_out, true)?;
    integrate_boundary_samples(rule, kernel, &FieldSamples::on_boundary(rule, phi), z, q_out)
}

/// `int_region K(z, .) ^ phi` from pre-sampled `phi`.
pub fn integrate_volume_samples(
    rule: &VolumeRule,
    kernel: &Kernel,
    samples: &FieldSamples,
    z: &CPoint,
    q_out: usize,
) -> Result<Integral> {
    let n = rule.n();
    let p = plan(kernel, n, samples.q, q_out, false)?;
    let dim = FormValue::zeros(n, q_out).coeffs().len();
    if samples.is_zero() {
        return Ok(Integral::zero(n, q_out));
    }
    if rule.region() != Region::UMinusD && rule.exclusion().map(|e| e.center) != Some(*z) {
        return Err(Error::OutOfScope(format!(
            "volume rule over {} has no exclusion at {z}; build it with the evaluation point",
            rule.region().name()
        )));
    }
    let body = |node: &super::rules::VolumeNode, v: &FormValue, acc: &mut [C]| {
        p.accumulate(kernel, z, &node.zeta, v, |t: &[C]| t[0] * node.weight, acc)
    };
    let fine = run(rule.fine(), &samples.fine, dim, body)?;
    let coarse = run(rule.coarse(), &samples.coarse, dim, body)?;
    Ok(finish(n, q_out, fine, coarse))
}

/// `int_region K(z, .) ^ phi`. For `D` and `U` the rule must be polar about `z`.
pub fn integrate_kernel_volume(
    rule: &VolumeRule,
    kernel: &Kernel,
    phi: &dyn FormField,
    z: &CPoint,
    q_out: usize,
) -> Result<Integral> {
    plan(kernel, rule.n(), phi.q(), q_out, false)?;
    integrate_volume_samples(rule, kernel, &FieldSamples::on_volume(rule, phi), z, q_out)
}


#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::forms::{ExprField, ZeroField};
    use crate::geometry::{Domain, DomainSpec};
    use crate::kernels::Guard;

    fn ball(n: usize) -> Domain {
        Domain::new(n, DomainSpec::Ball { radius: 1.0 }).unwrap()
    }

    #[test]
    fn cauchy_integral_of_one() {
        let dom = ball(1);
        let rule = BoundaryRule::build(&dom, 32).unwrap();
        let k = Kernel::omega1(dom.defining_function().clone(), Guard::for_scale(2.0));
        let one = ExprField::scalar(1, "1").unwrap();
        let v = integrate_kernel_boundary(&rule, &k, &one, &CPoint::zeros(1), 0).unwrap();
        assert!((v.value[0] - C::new(1.0, 0.0)).norm() < 1e-6, "{:?}", v.value);
    }

    #[test]
    fn leray_reproduces_holomorphic_n2() {
        let dom = ball(2);
        let rule = BoundaryRule::build(&dom, 32).unwrap();
        let k = Kernel::omega1(dom.defining_function().clone(), Guard::for_scale(2.0));
        let phi = ExprField::scalar(2, "z1*z2").unwrap();
        let z = CPoint::from_reals(&[0.3, 0.0, 0.2, 0.0]);
        let v = integrate_kernel_boundary(&rule, &k, &phi, &z, 0).unwrap();
        assert!((v.value[0] - C::new(0.06, 0.0)).norm() < 1e-8, "{:?} err {}", v.value, v.error);
        let zero = ZeroField { n: 2, q: 0 };
        let v = integrate_kernel_boundary(&rule, &k, &zero, &z, 0).unwrap();
        assert_eq!(v.value.max_abs(), 0.0);
    }

    #[test]
    fn cauchy_pompeiu_of_dzbar() {
        let dom = ball(1);
        let k = Kernel::omega0(Guard::for_scale(2.0));
        let phi = ExprField::from_pairs(1, 1, &[("1", "1")]).unwrap();
        for xy in [[0.0, 0.0], [0.3, -0.4], [-0.7, 0.1]] {
            let z = CPoint::from_reals(&xy);
            let rule = VolumeRule::build(&dom, Region::D, 32, Some((z, 0.05))).unwrap();
            let v = integrate_kernel_volume(&rule, &k, &phi, &z, 0).unwrap();
            assert!((v.value[0] - z[0].conj()).norm() < 1e-3, "{:?} vs {}", v.value, z[0].conj());
        }
    }

    #[test]
    fn deterministic_and_degree_checked() {
        let dom = ball(2);
        let rule = BoundaryRule::build(&dom, 32).unwrap();
        let k = Kernel::omega01(dom.defining_function().clone(), Guard::for_scale(2.0));
        let phi: Arc<dyn FormField> = Arc::new(ExprField::from_pairs(2, 1, &[("1", "z2")]).unwrap());
        let z = CPoint::from_reals(&[0.1, 0.0, 0.0, 0.1]);
        let a = integrate_kernel_boundary(&rule, &k, phi.as_ref(), &z, 0).unwrap();
        let b = integrate_kernel_boundary(&rule, &k, phi.as_ref(), &z, 0).unwrap();
        assert_eq!(a.value.coeffs(), b.value.coeffs());
        assert!(matches!(integrate_kernel_boundary(&rule, &k, phi.as_ref(), &z, 1), Err(Error::Degree { .. })));
        let near = CPoint::from_reals(&[0.9, 0.0, 0.0, 0.0]);
        assert!(matches!(integrate_kernel_boundary(&rule, &k, phi.as_ref(), &near, 0), Err(Error::Proximity(_))));
    }
}
