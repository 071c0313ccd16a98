//! Solutions at probe points, homotopy residuals and their CSV export.

use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::solve::{zero_next, Evaluator, OperatorTag, Operators, Resolution};
use crate::error::{Error, Result};
use crate::forms::dbar::dbar_from_partials;
use crate::forms::{FormField, FormValue};
use crate::geometry::domain::random_direction;
use crate::geometry::{CPoint, Domain};
use crate::quadrature::Integral;

/// `count` points of `D` whose estimated distance to the boundary is at least `collar`.
pub fn interior_probes(dom: &Domain, count: usize, collar: f64, seed: u64) -> Result<Vec<CPoint>> {
    let mut rng = crate::seeded_rng(seed);
    let n = dom.n();
    let radius = 0.5 * dom.diameter();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count.max(1) * 20_000 {
        if out.len() == count {
            break;
        }
        let u: f64 = rng.random();
        let z = dom.center() + random_direction(n, &mut rng).scale(radius * u.powf(1.0 / (2 * n) as f64));
        if dom.contains(&z) && dom.boundary_distance(&z).is_ok_and(|d| d >= collar) {
            out.push(z);
        }
    }
    if out.len() < count {
        return Err(Error::EmptyRegion(format!("no room for {count} probes with collar {collar:.3e}")));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualRow {
    pub z: CPoint,
    /// `max |phi - dbar(op_q phi) - op_{q+1}(dbar phi)|` over coefficients.
    pub residual: f64,
    /// Sum of the four terms below.
    pub estimate: f64,
    /// `dbar` (by the same stencil) of the fine-minus-coarse quadrature difference.
    pub quadrature: f64,
    /// `|D_h - D_{2h}| / 3`.
    pub richardson: f64,
    /// `10 eps max|u| / h`.
    pub rounding: f64,
    /// Quadrature error of `op_{q+1}(dbar phi)`.
    pub next_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub tag: String,
    pub q: usize,
    pub rows: Vec<ResidualRow>,
    pub max_residual: f64,
    pub max_estimate: f64,
}

impl ResidualReport {
    fn new(tag: &str, q: usize, rows: Vec<ResidualRow>) -> Self {
        let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        let max_estimate = rows.iter().map(|r| r.estimate).fold(0.0, f64::max);
        ResidualReport { tag: tag.into(), q, rows, max_residual, max_estimate }
    }

    /// `residual <= factor * estimate` at every probe.
    pub fn within(&self, factor: f64) -> bool {
        self.rows.iter().all(|r| r.residual <= factor * r.estimate)
    }
}

fn residual_at(
    u: &Evaluator,
    next: Option<&Evaluator>,
    phi: &dyn FormField,
    z: &CPoint,
    h: f64,
) -> Result<ResidualRow> {
    let (n, q) = (phi.n(), phi.q());
    let mut fine = Vec::with_capacity(2 * n);
    let mut coarse = Vec::with_capacity(2 * n);
    let mut wide = Vec::with_capacity(2 * n);
    let mut umax = 0.0f64;
    for m in 0..2 * n {
        let e = CPoint::real_axis(n, m).scale(h);
        let vals: Vec<Integral> =
            [*z + e, *z - e, *z + e.scale(2.0), *z - e.scale(2.0)].iter().map(|p| u(p)).collect::<Result<_>>()?;
        umax = vals.iter().map(|v| v.value.max_abs()).fold(umax, f64::max);
        fine.push(&(&vals[0].value - &vals[1].value) * (0.5 / h));
        coarse.push(&(&vals[0].coarse - &vals[1].coarse) * (0.5 / h));
        wide.push(&(&vals[2].value - &vals[3].value) * (0.25 / h));
    }
    let d = dbar_from_partials(n, q - 1, &fine);
    let dc = dbar_from_partials(n, q - 1, &coarse);
    let dw = dbar_from_partials(n, q - 1, &wide);
    let mut res = &phi.eval(z) - &d;
    let mut next_error = 0.0;
    if let Some(next) = next {
        let v = next(z)?;
        res = &res - &v.value;
        next_error = v.error;
    }
    let quadrature = (&d - &dc).max_abs();
    let richardson = (&d - &dw).max_abs() / 3.0;
    let rounding = 10.0 * f64::EPSILON * umax / h;
    Ok(ResidualRow {
        z: *z,
        residual: res.max_abs(),
        estimate: quadrature + richardson + rounding + next_error,
        quadrature,
        richardson,
        rounding,
        next_error,
    })
}

/// `max_probes |phi - dbar(op_q phi) - op_{q+1}(dbar phi)|`, with `dbar` of the solution by
/// central differences (step `ops.fd_step()`).
pub fn homotopy_residual(
    ops: &Operators,
    tag: OperatorTag,
    q: usize,
    phi: Arc<dyn FormField>,
    dbar_phi: Option<Arc<dyn FormField>>,
    probes: &[CPoint],
) -> Result<ResidualReport> {
    let n = ops.domain().n();
    let dphi = ops.dbar_of(&phi, dbar_phi);
    let u = ops.operator(tag, q, phi.clone(), Some(dphi.clone()))?;
    let next = if q < n { Some(ops.operator(tag, q + 1, dphi.clone(), Some(zero_next(phi.as_ref())))?) } else { None };
    if tag == OperatorTag::H {
        ops.convexity_precheck(probes)?;
    }
    let h = ops.fd_step();
    let rows = probes
        .par_iter()
        .map(|z| residual_at(&u, next.as_ref(), phi.as_ref(), z, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualReport::new(tag.name(), q, rows))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeValue {
    pub z: CPoint,
    pub value: FormValue,
    pub error: f64,
}

/// An operator applied to data, evaluated at probes, with its residual report.
#[derive(Clone, Debug, Serialize)]
pub struct HomotopySolution {
    pub tag: OperatorTag,
    pub q: usize,
    pub resolution: Resolution,
    pub values: Vec<ProbeValue>,
    pub residual: ResidualReport,
}

impl HomotopySolution {
    pub fn max_error(&self) -> f64 {
        self.values.iter().map(|v| v.error).fold(0.0, f64::max)
    }
}

fn values_at(u: &Evaluator, probes: &[CPoint]) -> Result<Vec<ProbeValue>> {
    probes
        .par_iter()
        .map(|z| u(z).map(|i| ProbeValue { z: *z, value: i.value, error: i.error }))
        .collect()
}

fn apply(
    ops: &Operators,
    tag: OperatorTag,
    q: usize,
    phi: Arc<dyn FormField>,
    dbar_phi: Option<Arc<dyn FormField>>,
    probes: &[CPoint],
) -> Result<HomotopySolution> {
    let dphi = ops.dbar_of(&phi, dbar_phi);
    if tag == OperatorTag::H {
        ops.convexity_precheck(probes)?;
    }
    let u = ops.operator(tag, q, phi.clone(), Some(dphi.clone()))?;
    let values = values_at(&u, probes)?;
    let residual = homotopy_residual(ops, tag, q, phi, Some(dphi), probes)?;
    Ok(HomotopySolution { tag, q, resolution: ops.resolution(), values, residual })
}

/// `T_q phi` at the probes.
pub fn apply_t(ops: &Operators, q: usize, phi: Arc<dyn FormField>, probes: &[CPoint]) -> Result<HomotopySolution> {
    apply(ops, OperatorTag::T, q, phi, None, probes)
}

/// `H_q phi` at the probes; `dbar_phi` defaults to central differences of `phi`.
pub fn apply_h(
    ops: &Operators,
    q: usize,
    phi: Arc<dyn FormField>,
    dbar_phi: Option<Arc<dyn FormField>>,
    probes: &[CPoint],
) -> Result<HomotopySolution> {
    apply(ops, OperatorTag::H, q, phi, dbar_phi, probes)
}

#[derive(Clone, Debug, Serialize)]
pub struct H0Value {
    pub z: CPoint,
    /// `int_{bD} Omega^1 phi - int_{U \ D} Omega^1 ^ E dbar phi`.
    pub boundary_form: FormValue,
    /// `int_{U \ D} Omega^1 ^ [dbar, E] phi`.
    pub commutator_form: FormValue,
    pub discrepancy: f64,
    pub error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct H0Solution {
    pub resolution: Resolution,
    pub values: Vec<H0Value>,
    pub max_discrepancy: f64,
    pub max_error: f64,
}

/// Both expressions of `H_0 phi` at the probes and their discrepancy.
pub fn apply_h0(
    ops: &Operators,
    phi: Arc<dyn FormField>,
    dbar_phi: Option<Arc<dyn FormField>>,
    probes: &[CPoint],
) -> Result<H0Solution> {
    ops.convexity_precheck(probes)?;
    let h0 = ops.h0_operator(phi, dbar_phi)?;
    let values = probes
        .par_iter()
        .map(|z| {
            let (a, b) = h0(z)?;
            Ok(H0Value {
                z: *z,
                discrepancy: (&a.value - &b.value).max_abs(),
                error: a.error.max(b.error),
                boundary_form: a.value,
                commutator_form: b.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_discrepancy = values.iter().map(|v| v.discrepancy).fold(0.0, f64::max);
    let max_error = values.iter().map(|v| v.error).fold(0.0, f64::max);
    Ok(H0Solution { resolution: ops.resolution(), values, max_discrepancy, max_error })
}

/// `max_probes |phi - H_0 phi - H_1 dbar phi|` for scalar `phi` (both `H_0` expressions are
/// tried; the larger residual is returned) and the summed error estimate.
pub fn h0_identity_residual(
    ops: &Operators,
    phi: Arc<dyn FormField>,
    dbar_phi: Option<Arc<dyn FormField>>,
    probes: &[CPoint],
) -> Result<(f64, f64)> {
    ops.convexity_precheck(probes)?;
    let dphi = ops.dbar_of(&phi, dbar_phi);
    let h0 = ops.h0_operator(phi.clone(), Some(dphi.clone()))?;
    let h1 = ops.h_operator(1, dphi, Some(zero_next(phi.as_ref())))?;
    let rows = probes
        .par_iter()
        .map(|z| {
            let (a, b) = h0(z)?;
            let c = h1(z)?;
            let f = phi.eval(z);
            let ra = (&(&f - &a.value) - &c.value).max_abs();
            let rb = (&(&f - &b.value) - &c.value).max_abs();
            Ok((ra.max(rb), a.error.max(b.error) + c.error))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.iter().fold((0.0, 0.0), |(r, e), (a, b)| (f64::max(r, *a), f64::max(e, *b))))
}

fn coordinate_headers(n: usize) -> Vec<String> {
    (1..=n).flat_map(|j| [format!("x{j}"), format!("y{j}")]).collect()
}

/// CSV with columns `x1, y1, ..., index, re, im, residual`, one row per probe and coefficient.
pub fn write_solution_csv(path: &Path, sol: &HomotopySolution) -> Result<()> {
    let n = sol.values.first().map(|v| v.z.dim()).unwrap_or(1);
    let mut w = csv::Writer::from_path(path)?;
    let mut header = coordinate_headers(n);
    header.extend(["index", "re", "im", "residual"].map(String::from));
    w.write_record(&header)?;
    for (v, r) in sol.values.iter().zip(&sol.residual.rows) {
        for (jj, c) in v.value.indices().into_iter().zip(v.value.coeffs()) {
            let mut rec: Vec<String> = v.z.to_reals().iter().map(|x| format!("{x:.17e}")).collect();
            rec.extend([jj.to_string(), format!("{:.17e}", c.re), format!("{:.17e}", c.im), format!("{:.17e}", r.residual)]);
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// CSV of `H_0` values: `x1, y1, ..., re, im, commutator_re, commutator_im, discrepancy`.
pub fn write_h0_csv(path: &Path, sol: &H0Solution) -> Result<()> {
    let n = sol.values.first().map(|v| v.z.dim()).unwrap_or(1);
    let mut w = csv::Writer::from_path(path)?;
    let mut header = coordinate_headers(n);
    header.extend(["re", "im", "commutator_re", "commutator_im", "discrepancy"].map(String::from));
    w.write_record(&header)?;
    for v in &sol.values {
        let mut rec: Vec<String> = v.z.to_reals().iter().map(|x| format!("{x:.17e}")).collect();
        let (a, b) = (v.boundary_form[0], v.commutator_form[0]);
        rec.extend([a.re, a.im, b.re, b.im, v.discrepancy].map(|x| format!("{x:.17e}")));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
