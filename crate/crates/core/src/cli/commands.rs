//! The four subcommands. Each returns a [`RunReport`] and writes its CSV files to `config.out`.

use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use super::config::{ExperimentConfig, OperatorKind};
use super::report::{RunReport, Status};
use crate::analysis::{
    check_exponent, gain_report, holder_seminorm, probe_cloud, rough_family, DomainClosure, Interval, PairSampler,
};
use crate::error::{Error, Result};
use crate::forms::{FormField, FormValue};
use crate::geometry::domain::random_direction;
use crate::geometry::{
    check_stability, estimate_all, mollify, Affine, CPoint, ConditionTag, DefiningFunction, Domain, DomainSpec,
    PowerSum, Scaled, Smoothness,
};
use crate::kernels::koppelman_residual;
use crate::operators::{
    apply_h, apply_h0, apply_t, homotopy_residual, interior_probes, mollifier_k, write_h0_csv, write_solution_csv,
    OperatorTag, Operators, Resolution,
};

type C = num_complex::Complex64;

fn reals(p: &CPoint) -> String {
    p.to_reals().iter().map(|x| format!("{x:.17e}")).collect::<Vec<_>>().join(" ")
}

fn e(x: f64) -> String {
    format!("{x:.17e}")
}

fn out_dir(cfg: &ExperimentConfig) -> Result<&Path> {
    std::fs::create_dir_all(&cfg.out)?;
    Ok(&cfg.out)
}

/// Positive affine factors `c + l.x` on the working neighborhood, used as rescalings of `r`.
fn rescalings(dom: &Domain) -> Vec<Arc<dyn DefiningFunction>> {
    let n = dom.n();
    let reach = dom.diameter();
    let mut out: Vec<Arc<dyn DefiningFunction>> = vec![Arc::new(Affine::constant(n, 3.0))];
    let mut tilt = vec![0.0; 2 * n];
    tilt[0] = 0.5 / reach;
    out.push(Arc::new(Affine::new(1.0, tilt)));
    let tilt: Vec<f64> = (0..2 * n).map(|m| if m % 2 == 1 { -0.3 / reach } else { 0.2 / reach }).collect();
    out.push(Arc::new(Affine::new(2.0, tilt)));
    out
}

#[derive(Serialize)]
struct ConditionRow {
    tag: String,
    infimum: f64,
    tolerance: f64,
    holds: bool,
    pairs: usize,
    diagonal_depth: usize,
    witness_zeta: Vec<f64>,
    witness_z: Vec<f64>,
}

/// Convexity conditions with witnesses, stability under rescaling of `r`, and for power
/// domains the sampled convexity gap of `sum |x_j|^{m_j}`.
pub fn cmd_check_domain(cfg: &ExperimentConfig) -> Result<RunReport> {
    let dom = cfg.domain()?;
    let out = out_dir(cfg)?;
    let mut report = RunReport::new("check-domain", cfg);
    let r = dom.defining_function().clone();
    let sampler = cfg.sampler();
    let reps = estimate_all(r.as_ref(), &dom, &sampler)?;

    let mut w = csv::Writer::from_path(out.join("conditions.csv"))?;
    w.write_record(["tag", "infimum", "tolerance", "holds", "pairs", "diagonal_depth", "witness_zeta", "witness_z"])?;
    let mut rows = Vec::new();
    for rep in &reps {
        w.write_record([
            rep.tag.name().to_string(),
            e(rep.infimum),
            e(rep.tolerance),
            rep.holds().to_string(),
            rep.pairs.to_string(),
            rep.diagonal_depth.to_string(),
            reals(&rep.witness_zeta),
            reals(&rep.witness_z),
        ])?;
        rows.push(ConditionRow {
            tag: rep.tag.name().into(),
            infimum: rep.infimum,
            tolerance: rep.tolerance,
            holds: rep.holds(),
            pairs: rep.pairs,
            diagonal_depth: rep.diagonal_depth,
            witness_zeta: rep.witness_zeta.to_reals(),
            witness_z: rep.witness_z.to_reals(),
        });
        if ConditionTag::CORE.contains(&rep.tag) {
            report.check(
                &format!("condition_{}", rep.tag.name()),
                Status::from_bool(rep.holds()),
                Some(rep.infimum),
                Some(rep.tolerance),
                format!("inf {:.6e} over {} pairs, witness zeta={} z={}", rep.infimum, rep.pairs, rep.witness_zeta, rep.witness_z),
            );
        }
    }
    w.flush()?;
    report.table("conditions", &rows);

    let mut stable = Vec::new();
    for f in rescalings(&dom) {
        let r2: Arc<dyn DefiningFunction> = Arc::new(Scaled::new(r.clone(), f));
        stable.push(check_stability(r.as_ref(), r2.as_ref(), &dom, &sampler)?);
    }
    let ok = stable.iter().all(|b| *b);
    report.check("stability", Status::from_bool(ok), None, None, format!("rescalings agree: {stable:?}"));
    report.table("stability", &stable);

    if let DomainSpec::PowerDomain { exponents, .. } = &dom.spec() {
        let f = PowerSum::coordinatewise(exponents);
        let (inf, x, y) = f.sampled_infimum(100_000, dom.diameter(), sampler.seed);
        report.check(
            "power_gap",
            Status::from_bool(inf > 0.0),
            Some(inf),
            Some(0.0),
            format!("inf {inf:.6e} at x={x:?} y={y:?}"),
        );
    }
    Ok(report)
}

fn check_exact(report: &mut RunReport, err: f64, tol: f64) {
    report.check("exact_solution", Status::from_bool(err <= tol), Some(err), Some(tol), format!("max error {err:.3e}"));
}

fn max_diff(a: &FormValue, b: &FormValue) -> f64 {
    (a - b).max_abs()
}

/// Applies the configured operator to the data at the probes.
pub fn cmd_solve(cfg: &ExperimentConfig) -> Result<RunReport> {
    let dom = cfg.domain()?;
    let out = out_dir(cfg)?;
    let mut report = RunReport::new("solve", cfg);
    let (n, q) = (cfg.n, cfg.operator_q());
    let phi = cfg.phi()?;
    let dphi = cfg.dbar_phi()?;
    let tag = match cfg.operator.tag {
        OperatorKind::H0 => None,
        OperatorKind::T => Some(OperatorTag::T),
        OperatorKind::H => Some(OperatorTag::H),
    };
    if tag == Some(OperatorTag::H) && q == n {
        return Err(Error::OutOfScope(format!("H_q with q = n = {n} is not implemented")));
    }
    if tag.is_some() && q != cfg.data.q {
        return Err(Error::Config(format!("operator.q = {q} but data has degree {}", cfg.data.q)));
    }
    let res = cfg.resolution.resolution(&dom);
    let ops = Operators::new(&dom, res, cfg.operator.extension, cfg.resolution.h)?;
    let probes = interior_probes(&dom, cfg.probes.count, ops.probe_collar(), cfg.probe_seed())?;
    let tol = cfg.data.tolerance;

    match tag {
        None => {
            let sol = apply_h0(&ops, phi, dphi, &probes)?;
            write_h0_csv(&out.join("h0.csv"), &sol)?;
            report.check(
                "h0_forms_agree",
                Status::from_bool(sol.max_discrepancy <= tol),
                Some(sol.max_discrepancy),
                Some(tol),
                format!("discrepancy {:.3e}, quadrature error {:.3e}", sol.max_discrepancy, sol.max_error),
            );
            if let Some(ex) = cfg.exact(0)? {
                let err = sol
                    .values
                    .iter()
                    .map(|v| {
                        let f = ex.eval(&v.z);
                        max_diff(&v.boundary_form, &f).max(max_diff(&v.commutator_form, &f))
                    })
                    .fold(0.0, f64::max);
                check_exact(&mut report, err, tol);
            }
            report.table("h0", &sol);
        }
        Some(tag) => {
            let sol = match tag {
                OperatorTag::T => apply_t(&ops, q, phi, &probes)?,
                OperatorTag::H => apply_h(&ops, q, phi, dphi, &probes)?,
            };
            write_solution_csv(&out.join("solution.csv"), &sol)?;
            let f = cfg.verify.estimate_factor;
            let r = &sol.residual;
            report.check(
                "residual_within_estimate",
                Status::from_bool(r.within(f)),
                Some(r.max_residual),
                Some(f * r.max_estimate),
                format!("max residual {:.3e}, max estimate {:.3e}", r.max_residual, r.max_estimate),
            );
            if let Some(ex) = cfg.exact(q - 1)? {
                let err = sol.values.iter().map(|v| max_diff(&v.value, &ex.eval(&v.z))).fold(0.0, f64::max);
                check_exact(&mut report, err, tol);
            }
            report.table("solution", &sol);
        }
    }
    Ok(report)
}

#[derive(Serialize)]
struct KoppelmanRow {
    z: Vec<f64>,
    zeta: Vec<f64>,
    residuals: Vec<f64>,
    order: f64,
}

/// Admissible `(z, zeta)`: `z` inside, `zeta` on the boundary, both `|zeta - z|` and
/// `|r_zeta.(zeta - z)| / |r_zeta|` at least `margin`.
fn koppelman_points(
    dom: &Domain,
    r: &Arc<dyn DefiningFunction>,
    count: usize,
    margin: f64,
    seed: u64,
) -> Result<Vec<(CPoint, CPoint)>> {
    let zs = interior_probes(dom, 4 * count, 0.05 * dom.diameter(), seed)?;
    let mut rng = crate::seeded_rng(seed ^ 0x6b6f70);
    let mut out = Vec::with_capacity(count);
    for z in zs.iter().cycle().take(400 * count) {
        if out.len() == count {
            break;
        }
        let zeta = dom.boundary_point(&random_direction(dom.n(), &mut rng))?;
        let g = r.grad(&zeta);
        let w = zeta - *z;
        if w.norm() >= margin && g.pair(&w).norm() / g.norm() >= margin {
            out.push((*z, zeta));
        }
    }
    if out.len() < count {
        return Err(Error::EmptyRegion(format!("only {} admissible Koppelman pairs", out.len())));
    }
    Ok(out)
}

fn order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse / fine).ln() / ratio.ln()
}

#[derive(Serialize)]
struct LadderRow {
    operator: String,
    boundary: usize,
    volume: usize,
    epsilon: f64,
    residual: f64,
    estimate: f64,
    rounding: f64,
    within: bool,
}

fn ladder(cfg: &ExperimentConfig, dom: &Domain) -> Vec<Resolution> {
    let mut res = cfg.resolution.resolution(dom);
    let mut out = vec![res];
    for _ in 1..cfg.resolution.levels.max(1) {
        res = res.refined();
        out.push(res);
    }
    out
}

/// Ladder check: every level within `factor * estimate`, and order at least `min_order` between
/// consecutive levels unless the finer residual is already below its rounding floor.
fn ladder_checks(report: &mut RunReport, name: &str, rows: &[LadderRow], cfg: &ExperimentConfig) {
    let f = cfg.verify.estimate_factor;
    let within = rows.iter().all(|r| r.within);
    let worst = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    report.check(
        &format!("{name}_within_estimate"),
        Status::from_bool(within),
        Some(worst),
        Some(f),
        format!("residuals {:?}", rows.iter().map(|r| format!("{:.2e}", r.residual)).collect::<Vec<_>>()),
    );
    if rows.len() < 2 {
        report.check(&format!("{name}_order"), Status::Skip, None, None, "single resolution level".into());
        return;
    }
    let min = cfg.verify.min_order;
    let mut orders = Vec::new();
    let mut ok = true;
    for p in rows.windows(2) {
        let floor = p[1].rounding;
        let o = if p[1].residual <= floor { f64::INFINITY } else { order(p[0].residual, p[1].residual, 2.0) };
        ok &= o >= min;
        orders.push(o);
    }
    let shown = orders.iter().cloned().fold(f64::INFINITY, f64::min);
    report.check(
        &format!("{name}_order"),
        Status::from_bool(ok),
        shown.is_finite().then_some(shown),
        Some(min),
        format!("orders {orders:?} (inf: finer level at its rounding floor)"),
    );
}

/// Koppelman residual orders and homotopy residuals along a resolution ladder.
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<RunReport> {
    let dom = cfg.domain()?;
    let out = out_dir(cfg)?;
    let mut report = RunReport::new("verify", cfg);

    // Koppelman identities by finite differences.
    let base = dom.defining_function().clone();
    let r = match base.smoothness() {
        Smoothness::Smooth => base,
        Smoothness::C11 => mollify(&base, mollifier_k(&dom)),
    };
    let steps = &cfg.verify.koppelman_steps;
    if steps.len() >= 2 {
        let hmax = steps.iter().cloned().fold(0.0, f64::max);
        let margin = (10.0 * hmax).max(0.05 * dom.diameter());
        let pts = koppelman_points(&dom, &r, cfg.verify.koppelman_points, margin, cfg.seed)?;
        let mut rows = Vec::new();
        for (z, zeta) in &pts {
            let res = steps.iter().map(|&h| koppelman_residual(&r, z, zeta, h).map(|k| k.max())).collect::<Result<Vec<_>>>()?;
            let o = order(res[0], res[res.len() - 1], steps[0] / steps[steps.len() - 1]);
            rows.push(KoppelmanRow { z: z.to_reals(), zeta: zeta.to_reals(), residuals: res, order: o });
        }
        let mut w = csv::Writer::from_path(out.join("koppelman.csv"))?;
        let mut header: Vec<String> = vec!["point".into()];
        header.extend(steps.iter().map(|h| format!("residual_h{h:e}")));
        header.push("order".into());
        w.write_record(&header)?;
        for (i, row) in rows.iter().enumerate() {
            let mut rec = vec![i.to_string()];
            rec.extend(row.residuals.iter().map(|x| e(*x)));
            rec.push(e(row.order));
            w.write_record(&rec)?;
        }
        w.flush()?;
        let [lo, hi] = cfg.verify.order_range;
        let (omin, omax) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.order), b.max(r.order)));
        report.check(
            "koppelman_order",
            Status::from_bool(omin >= lo && omax <= hi),
            Some(omin),
            Some(lo),
            format!("orders in [{omin:.3}, {omax:.3}] over {} points, accepted [{lo}, {hi}]", rows.len()),
        );
        report.table("koppelman", &rows);
    } else {
        report.check("koppelman_order", Status::Skip, None, None, "fewer than two steps".into());
    }

    // Homotopy residuals under joint refinement.
    let phi = cfg.phi()?;
    let dphi = cfg.dbar_phi()?;
    let levels = ladder(cfg, &dom);
    let kinds = cfg.verify_operators();
    let coarse = Operators::new(&dom, levels[0], cfg.operator.extension, cfg.resolution.h)?;
    let probes = interior_probes(&dom, cfg.probes.count, coarse.probe_collar(), cfg.probe_seed())?;
    drop(coarse);
    let mut all_rows = Vec::new();
    for kind in kinds {
        let name = match kind {
            OperatorKind::T => "homotopy_T",
            OperatorKind::H => "homotopy_H",
            OperatorKind::H0 => "reproducing_H0",
        };
        let q = cfg.data.q;
        let admissible = match kind {
            OperatorKind::H0 => q == 0,
            OperatorKind::T => q >= 1,
            OperatorKind::H => q >= 1 && q < cfg.n,
        };
        if !admissible {
            report.check(&format!("{name}_within_estimate"), Status::Skip, None, None, format!("not defined for q = {q}"));
            continue;
        }
        let mut rows = Vec::new();
        for res in &levels {
            let ops = Operators::new(&dom, *res, cfg.operator.extension, cfg.resolution.h)?;
            let row = match kind {
                OperatorKind::H0 => h0_row(cfg, &ops, phi.clone(), dphi.clone(), &probes)?,
                _ => {
                    let tag = if kind == OperatorKind::T { OperatorTag::T } else { OperatorTag::H };
                    let r = homotopy_residual(&ops, tag, q, phi.clone(), dphi.clone(), &probes)?;
                    LadderRow {
                        operator: tag.name().into(),
                        boundary: res.boundary,
                        volume: res.volume,
                        epsilon: res.epsilon,
                        residual: r.max_residual,
                        estimate: r.max_estimate,
                        rounding: r.rows.iter().map(|x| x.rounding).fold(0.0, f64::max),
                        within: r.within(cfg.verify.estimate_factor),
                    }
                }
            };
            rows.push(row);
        }
        ladder_checks(&mut report, name, &rows, cfg);
        all_rows.extend(rows);
    }
    let mut w = csv::Writer::from_path(out.join("ladder.csv"))?;
    for row in &all_rows {
        w.serialize(row)?;
    }
    w.flush()?;
    report.table("ladder", &all_rows);
    Ok(report)
}

/// `H_0` at one level: error against the exact values if given, else the discrepancy of the
/// two expressions.
fn h0_row(
    cfg: &ExperimentConfig,
    ops: &Operators,
    phi: Arc<dyn FormField>,
    dphi: Option<Arc<dyn FormField>>,
    probes: &[CPoint],
) -> Result<LadderRow> {
    let exact = cfg.exact(0)?;
    let sol = apply_h0(ops, phi.clone(), dphi, probes)?;
    let mut residual = 0.0f64;
    let mut umax = 0.0f64;
    for v in &sol.values {
        let f = match &exact {
            Some(ex) => ex.eval(&v.z),
            None => phi.eval(&v.z),
        };
        umax = umax.max(f.max_abs());
        residual = residual.max(max_diff(&v.boundary_form, &f)).max(max_diff(&v.commutator_form, &f));
    }
    let res = ops.resolution();
    Ok(LadderRow {
        operator: "H0".into(),
        boundary: res.boundary,
        volume: res.volume,
        epsilon: res.epsilon,
        residual,
        estimate: sol.max_error,
        rounding: 1e3 * f64::EPSILON * umax.max(1.0),
        within: residual <= cfg.data.tolerance,
    })
}

#[derive(Serialize)]
struct CalibrationRow {
    function: &'static str,
    exact: f64,
    estimate: f64,
    pairs: usize,
}

/// Estimator calibration and the `C^a -> C^{a+1/2}` gain table for `T_1` on the rough family.
pub fn cmd_holder(cfg: &ExperimentConfig) -> Result<RunReport> {
    for &a in &cfg.holder.exponents {
        if a != 0.0 {
            check_exponent(a)?;
        }
        check_exponent(a + 0.5)?;
    }
    let dom = cfg.domain()?;
    let out = out_dir(cfg)?;
    let mut report = RunReport::new("holder", cfg);

    let sampler = PairSampler::new(cfg.holder.pairs, cfg.seed);
    let pairs = sampler.sample(&Interval { a: 0.0, b: 1.0 });
    let h = 1e-6;
    let calib: [(&'static str, f64, fn(f64) -> f64); 3] =
        [("sqrt", 1.0, |x: f64| x.max(0.0).sqrt()), ("linear", 1.0, |x| x), ("constant", 0.0, |_| 1.0)];
    let mut crow = Vec::new();
    for (name, exact, g) in calib {
        let f = move |x: &[f64]| Ok(vec![C::new(g(x[0]), 0.0)]);
        let est = holder_seminorm(&f, 0.5, &pairs, h)?;
        let ok = if exact > 0.0 { est.seminorm >= 0.9 * exact && est.seminorm <= exact * (1.0 + 1e-12) } else { est.seminorm == 0.0 };
        report.check(
            &format!("calibration_{name}"),
            Status::from_bool(ok),
            Some(est.seminorm),
            Some(0.9 * exact),
            format!("estimate {:.6} of {exact} over {} pairs", est.seminorm, est.pairs),
        );
        crow.push(CalibrationRow { function: name, exact, estimate: est.seminorm, pairs: est.pairs });
    }
    report.table("calibration", &crow);

    if cfg.holder.family.is_empty() {
        return Ok(report);
    }
    let res = cfg.resolution.resolution(&dom);
    let ops = Operators::new(&dom, res, cfg.operator.extension, cfg.resolution.h)?;
    let cloud = probe_cloud(&dom, cfg.holder.cloud, ops.probe_collar(), cfg.probe_seed())?;
    let p = dom.boundary_point(&CPoint::real_axis(cfg.n, 0))?.real(0);
    let mut w = csv::Writer::from_path(out.join("gain.csv"))?;
    w.write_record(["label", "a", "phi_seminorm", "u_seminorm", "ratio", "pairs", "witness_x", "witness_y"])?;
    let mut table = Vec::new();
    for &a in &cfg.holder.exponents {
        let mut ratios = Vec::new();
        for &s in &cfg.holder.family {
            let phi: Arc<dyn FormField> = Arc::new(rough_family(cfg.n, s, p)?);
            let t = ops.t_operator(1, phi.clone())?;
            let u = |z: &CPoint| t(z).map(|i| i.value);
            let g = gain_report(&format!("s={s}"), phi.as_ref(), &DomainClosure(&dom), &sampler, &u, &cloud, a)?;
            let (wx, wy) = g.witness.clone().unwrap_or_default();
            let join = |v: &[f64]| v.iter().map(|x| e(*x)).collect::<Vec<_>>().join(" ");
            w.write_record([
                g.label.clone(),
                e(a),
                e(g.phi_seminorm),
                e(g.u_seminorm),
                e(g.ratio),
                g.pairs.to_string(),
                join(&wx),
                join(&wy),
            ])?;
            ratios.push(g.ratio);
            table.push(g);
        }
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(l, h), r| (l.min(*r), h.max(*r)));
        let drift = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        report.check(
            &format!("gain_bounded_a{a}"),
            Status::from_bool(drift <= cfg.holder.max_drift),
            Some(hi),
            Some(cfg.holder.max_drift),
            format!("ratios {ratios:?}, bound {hi:.4}, drift {drift:.3} (empirical evidence only)"),
        );
    }
    w.flush()?;
    report.table("gain", &table);
    Ok(report)
}
