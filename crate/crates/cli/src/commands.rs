//! The subcommands, as functions from a run configuration to a report.

use std::f64::consts::PI;

use alexandrov_core::batch::{parallel_trials, trial_rng};
use alexandrov_core::bcg::{
    g_phi, grad_distance_check, lipschitz_probe, pushforward_isometry_check, vol_phi, EmbeddingConfig, GradCheck,
    MetricChart, RadialStretch,
};
use alexandrov_core::comparison::{
    alexandrov_lemma_check, check_condition_b, check_condition_c, check_point_comparison, comparison_batch,
    equivalence_probe, random_admissible_quad, random_quad_with_defect, AngleMethod, Tolerance, CONDITION_B_TOL,
    CONDITION_C_TOL,
};
use alexandrov_core::cone::{cone_area, cone_witness_triangle, ConeChart, ConeSurfaceSpec};
use alexandrov_core::double::{reflection_inequality, DoublePoint, DoubledSpace, Sheet};
use alexandrov_core::entropy::entropy_estimate;
use alexandrov_core::hyp::{H2Point, H3Point};
use alexandrov_core::oracle::{GeodesicOracle, PointSampler};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Checker, RunConfig, SheetPoint, Space, SpaceSpec};
use crate::error::CliError;
use crate::output::{Report, Table};

/// Default tolerance for the reflection law.
pub const REFLECTION_TOL: f64 = 1e-6;
/// Default relative slack for the embedding bounds.
pub const BCG_RELATIVE: f64 = 1e-3;
/// Default slack on entropy slopes.
pub const ENTROPY_TOL: f64 = 0.05;
/// Directions per path in the reflection inequality.
const DIRECTIONS: usize = 100;
/// Geodesic samples per side when the config has none; odd so that the
/// midpoint is among them.
const SIDE_SAMPLES: usize = 15;

/// Independent seed for the `k`-th sub-run.
fn sub_seed(seed: u64, k: u64) -> u64 {
    seed ^ k.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: Checker,
    pub pass: bool,
    pub summary: Value,
}

struct Checks<'a> {
    cfg: &'a RunConfig,
    trials: usize,
    samples: usize,
    seed: u64,
    tol: Tolerance,
    table: Table,
    outcomes: Vec<CheckOutcome>,
}

impl Checks<'_> {
    fn record(&mut self, check: Checker, pass: bool, summary: Value) {
        self.outcomes.push(CheckOutcome { check, pass, summary });
    }

    fn row(&mut self, check: Checker, trial: usize, value: f64, pass: bool) {
        self.table.push([json!(check), json!(trial), json!(value), json!(pass)]);
    }

    fn cb_tol(&self) -> f64 {
        self.cfg.tolerances.condition_b.unwrap_or(CONDITION_B_TOL)
    }

    /// Checks every space supports.
    fn generic<O: PointSampler>(&mut self, o: &O, check: Checker, model: bool, extra: &[(O::Point, O::Point, O::Point)]) {
        let seed = sub_seed(self.seed, check as u64);
        match check {
            Checker::Comparison => {
                let (summary, reports) = comparison_batch(o, self.trials, self.samples, self.tol, seed);
                let max_abs_slack = reports
                    .iter()
                    .flat_map(|r| r.slacks.iter())
                    .fold(0f64, |m, s| m.max(s.abs()));
                let max_abs_deficit = reports
                    .iter()
                    .filter_map(|r| r.angle_deficits)
                    .flatten()
                    .fold(0f64, |m, d| m.max(d.abs()));
                for (i, r) in reports.iter().enumerate() {
                    self.row(check, i, r.min_slack, r.pass);
                }
                let equality = !model || (max_abs_slack <= self.tol.absolute && max_abs_deficit <= self.tol.absolute);
                self.record(
                    check,
                    summary.failures == 0 && equality,
                    json!({"batch": summary, "max_abs_slack": max_abs_slack, "max_abs_angle_deficit": max_abs_deficit, "model_equality": model}),
                );
            }
            Checker::ConditionB => {
                let tol = self.cb_tol();
                let rows = parallel_trials(self.trials, seed, |_, rng| {
                    let (p, q, r) = (o.sample_point(rng), o.sample_point(rng), o.sample_point(rng));
                    check_condition_b(o, &p, &q, &r, AngleMethod::default()).ok()
                });
                let mut min = f64::INFINITY;
                let mut failures = 0;
                let mut evaluated = 0;
                for (i, b) in rows.iter().enumerate() {
                    let Some(b) = b else { continue };
                    evaluated += 1;
                    let m = b.deficits.iter().cloned().fold(f64::INFINITY, f64::min);
                    let pass = b.degenerate || m >= -tol;
                    if !b.degenerate {
                        min = min.min(m);
                    }
                    failures += !pass as usize;
                    self.row(check, i, m, pass);
                }
                self.record(
                    check,
                    failures == 0,
                    json!({"trials": self.trials, "evaluated": evaluated, "failures": failures, "min_deficit": min, "tolerance": tol}),
                );
            }
            Checker::Equivalence => {
                let mut tris: Vec<_> = parallel_trials(self.trials, seed, |_, rng| {
                    (o.sample_point(rng), o.sample_point(rng), o.sample_point(rng))
                });
                tris.extend_from_slice(extra);
                let rep = equivalence_probe(o, &tris, self.samples, Tolerance::MODEL, AngleMethod::default());
                for e in &rep.entries {
                    self.row(check, e.index, e.min_slack, e.agree);
                }
                let disagreements: Vec<_> = rep.entries.iter().filter(|e| !e.agree).collect();
                self.record(
                    check,
                    rep.all_agree,
                    json!({"triangles": tris.len(), "evaluated": rep.entries.len(), "skipped": rep.skipped.len(), "disagreements": disagreements}),
                );
            }
            _ => unreachable!("space-specific checker"),
        }
    }

    fn lemma(&mut self) {
        let seed = sub_seed(self.seed, Checker::Lemma as u64);
        let checks = parallel_trials(self.trials, seed, |_, rng| {
            let (q, rejected) = random_admissible_quad(rng);
            (alexandrov_lemma_check(&q), rejected)
        });
        let mut min = f64::INFINITY;
        let mut failures = 0;
        let mut rejected = 0;
        for (i, (c, r)) in checks.iter().enumerate() {
            rejected += r;
            match c {
                Ok(c) => {
                    let m = c.slacks.iter().cloned().fold(f64::INFINITY, f64::min);
                    min = min.min(m);
                    let pass = c.holds.iter().all(|h| *h);
                    failures += !pass as usize;
                    self.row(Checker::Lemma, i, m, pass);
                }
                Err(_) => failures += 1,
            }
        }
        let rigid = (self.trials / 10).max(10);
        let defects = [0.0, 1e-12, 1e-11];
        let rigidity = parallel_trials(rigid, sub_seed(seed, 1), |i, rng| {
            let q = random_quad_with_defect(rng, defects[i % defects.len()]);
            alexandrov_lemma_check(&q).ok().and_then(|c| c.rigidity)
        });
        let rigidity_failures = rigidity.iter().filter(|r| **r != Some(true)).count();
        self.record(
            Checker::Lemma,
            failures == 0 && rigidity_failures == 0,
            json!({"quads": self.trials, "rejected_draws": rejected, "failures": failures, "min_slack": min,
                   "rigidity_quads": rigid, "rigidity_failures": rigidity_failures}),
        );
    }

    /// Random pairs on opposite sheets.
    fn cross_pairs(&self, x: &DoubledSpace, seed: u64) -> Vec<(DoublePoint, DoublePoint, DoublePoint)> {
        parallel_trials(self.trials, seed, |_, rng| loop {
            let p = x.sample_point(rng);
            let q = x.sample_point(rng);
            if !p.on_boundary && !q.on_boundary && p.sheet != q.sheet {
                let r = x.sample_point(rng);
                return (p, q, r);
            }
        })
    }

    fn reflection(&mut self, x: &DoubledSpace) {
        let tol = self.cfg.tolerances.reflection.unwrap_or(REFLECTION_TOL);
        let pairs = self.cross_pairs(x, sub_seed(self.seed, Checker::Reflection as u64));
        let mut worst_law = 0f64;
        let mut worst_chain = f64::NEG_INFINITY;
        let mut worst_ends = 0f64;
        let mut failures = 0;
        for (i, (p, q, _)) in pairs.iter().enumerate() {
            let Some(path) = x.reflected_path(p, q) else {
                failures += 1;
                continue;
            };
            let law = (path.incidence - path.reflection).abs();
            let (left, right, ends) = reflection_inequality(x, &path, DIRECTIONS);
            let pass = law < tol && left <= 1e-9 && right <= 1e-9 && ends < tol;
            worst_law = worst_law.max(law);
            worst_chain = worst_chain.max(left).max(right);
            worst_ends = worst_ends.max(ends);
            failures += !pass as usize;
            self.row(Checker::Reflection, i, law, pass);
        }
        self.record(
            Checker::Reflection,
            failures == 0,
            json!({"paths": pairs.len(), "failures": failures, "max_law_defect": worst_law,
                   "max_chain_violation": worst_chain, "max_tangential_defect": worst_ends, "tolerance": tol}),
        );
    }

    fn condition_c(&mut self, x: &DoubledSpace) {
        let tol = self.cfg.tolerances.condition_c.unwrap_or(CONDITION_C_TOL);
        let triples = self.cross_pairs(x, sub_seed(self.seed, Checker::ConditionC as u64));
        let mut worst = 0f64;
        let mut failures = 0;
        let mut skipped = 0;
        for (i, (p, q, r)) in triples.iter().enumerate() {
            let Some(path) = x.reflected_path(p, q) else {
                failures += 1;
                continue;
            };
            let s = x.boundary(path.s);
            if x.distance(&s, r) == 0.0 {
                skipped += 1;
                continue;
            }
            let (defect, pass) = match check_condition_c(x, p, q, &s, r, AngleMethod::default()) {
                Ok(d) => (d, d < tol),
                Err(_) => (f64::NAN, false),
            };
            worst = worst.max(defect);
            failures += !pass as usize;
            self.row(Checker::ConditionC, i, defect, pass);
        }
        self.record(
            Checker::ConditionC,
            failures == 0,
            json!({"crossings": triples.len(), "skipped": skipped, "failures": failures, "max_defect": worst, "tolerance": tol}),
        );
    }

    fn witness(&mut self, chart: &ConeChart, rho: f64) -> Result<(), CliError> {
        let w = cone_witness_triangle(chart.theta(), rho)?;
        let rep = check_point_comparison(chart, &w.p, &w.q, &w.r, self.samples | 1, self.tol)?;
        let mid = chart.geodesic_sample(&w.q, &w.r, 0.5);
        let midpoint_slack = chart.distance(&w.p, &mid) - w.comparison_median;
        self.row(Checker::Witness, 0, rep.min_slack, rep.pass);
        self.record(
            Checker::Witness,
            rep.pass,
            json!({"witness": w, "min_slack": rep.min_slack, "midpoint_slack": midpoint_slack, "threshold": rep.threshold}),
        );
        Ok(())
    }
}

fn applicable(space: &Space) -> Vec<Checker> {
    use Checker::*;
    match space {
        Space::H2(_) => vec![Comparison, ConditionB, Equivalence, Lemma],
        Space::H3(_) => vec![Comparison, ConditionB, Equivalence],
        Space::Double(_) => vec![Comparison, ConditionB, ConditionC, Reflection, Equivalence],
        Space::Cone(c) if c.theta() > 2.0 * PI => vec![Comparison, ConditionB, Equivalence, Witness],
        Space::Cone(_) => vec![Comparison, ConditionB, Equivalence],
    }
}

pub fn cmd_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let seed = cfg.seed()?;
    let space = cfg.space.build()?;
    let allowed = applicable(&space);
    let checks = if cfg.checks.is_empty() { allowed.clone() } else { cfg.checks.clone() };
    if let Some(bad) = checks.iter().find(|c| !allowed.contains(c)) {
        return Err(CliError::Config(format!("checker {bad:?} does not apply to this space")));
    }
    let model = matches!(space, Space::H2(_) | Space::H3(_));
    let default_tol = if model { Tolerance::MODEL } else { Tolerance::BOUNDED_BELOW };
    let tol = Tolerance {
        absolute: cfg.tolerances.comparison_absolute.unwrap_or(default_tol.absolute),
        per_diameter: cfg.tolerances.comparison_per_diameter.unwrap_or(default_tol.per_diameter),
    };
    let rho = cfg.cone.as_ref().map_or(0.5, |c| c.rho);
    let mut run = Checks {
        cfg,
        trials: cfg.trials(1000),
        samples: cfg.samples.unwrap_or(SIDE_SAMPLES),
        seed,
        tol,
        table: Table::new(&["check", "trial", "value", "pass"]),
        outcomes: Vec::new(),
    };
    for &check in &checks {
        match (&space, check) {
            (Space::H2(_), Checker::Lemma) => run.lemma(),
            (Space::Double(x), Checker::Reflection) => run.reflection(x),
            (Space::Double(x), Checker::ConditionC) => run.condition_c(x),
            (Space::Cone(c), Checker::Witness) => run.witness(c, rho)?,
            (Space::H2(o), _) => run.generic(o, check, true, &[]),
            (Space::H3(o), _) => run.generic(o, check, true, &[]),
            (Space::Double(o), _) => run.generic(o, check, false, &[]),
            (Space::Cone(o), _) => {
                let extra: Vec<_> = cone_witness_triangle(o.theta(), rho)
                    .map(|w| vec![(w.p, w.q, w.r)])
                    .unwrap_or_default();
                run.generic(o, check, false, &extra)
            }
        }
    }
    let pass = run.outcomes.iter().all(|o| o.pass);
    let body = json!({
        "space": cfg.space,
        "seed": seed,
        "trials": run.trials,
        "samples": run.samples,
        "tolerance": tol,
        "checks": run.outcomes,
    });
    Ok(Report::new("check", pass, &body, run.table))
}

fn embedding_config(cfg: &RunConfig, c: f64) -> EmbeddingConfig {
    let mut e = EmbeddingConfig::new(c);
    let p = cfg.bcg.as_ref();
    if let Some(r) = p.and_then(|p| p.truncation) {
        e = e.with_truncation(r);
    }
    if let Some(m) = p.and_then(|p| p.angular_nodes) {
        e.angular_nodes = m;
    }
    e
}

fn bcg_generic<O: MetricChart + PointSampler>(
    o: &O,
    cfg: &RunConfig,
    seed: u64,
    table: &mut Table,
) -> Result<(Vec<Value>, bool), CliError> {
    let p = cfg.bcg.as_ref().expect("checked by caller");
    let rel = cfg.tolerances.bcg_relative.unwrap_or(BCG_RELATIVE);
    let h = o.entropy();
    for &c in &p.c {
        if !(c > 0.5 * h) {
            return Err(CliError::BelowThreshold { c, threshold: 0.5 * h });
        }
    }
    let points = parallel_trials(p.points, sub_seed(seed, 1), |_, rng| o.sample_point(rng));
    let pairs = parallel_trials(p.lipschitz_pairs, sub_seed(seed, 2), |_, rng| {
        (o.sample_point(rng), o.sample_point(rng))
    });
    let mut out = Vec::new();
    let mut pass = true;
    for &c in &p.c {
        let e = embedding_config(cfg, c);
        let mut reports = Vec::new();
        let mut excluded = Vec::new();
        let mut failures = 0;
        for (i, x) in points.iter().enumerate() {
            match g_phi(o, &e, x, None) {
                Ok(r) => {
                    let ok = r.within(rel) && r.max_grad_sq <= 1.0 + 4.0 * e.delta;
                    failures += !ok as usize;
                    table.push([json!(c), json!(i), json!(r.trace), json!(r.sqrt_det), json!(r.trace_bound), json!(r.det_bound), json!(ok)]);
                    reports.push(r);
                }
                Err(err) => excluded.push(json!({"index": i, "reason": err.to_string()})),
            }
        }
        let lipschitz = if pairs.is_empty() { None } else { Some(lipschitz_probe(o, &e, &pairs)?) };
        let grads: Vec<GradCheck> = pairs.iter().map(|(x, y)| grad_distance_check(o, &e, x, y)).collect();
        let grad_failures = grads.iter().filter(|g| matches!(g, GradCheck::Checked { pass: false, .. })).count();
        let ok = failures == 0 && grad_failures == 0 && lipschitz.as_ref().is_none_or(|l| l.pass);
        pass &= ok;
        out.push(json!({
            "c": c, "pass": ok, "points": reports, "excluded": excluded, "failures": failures,
            "lipschitz": lipschitz, "gradient_failures": grad_failures, "relative_tolerance": rel,
        }));
    }
    Ok((out, pass))
}

pub fn cmd_bcg(cfg: &RunConfig) -> Result<Report, CliError> {
    let seed = cfg.seed()?;
    let Some(p) = &cfg.bcg else {
        return Err(CliError::Config("bcg section required".into()));
    };
    if p.c.is_empty() {
        return Err(CliError::Config("bcg.c must list at least one value".into()));
    }
    let plane = matches!(cfg.space, SpaceSpec::H2 { .. });
    if (p.vol_phi || !p.pushforward.is_empty()) && !plane {
        return Err(CliError::Config("vol_phi and pushforward need the h2 space".into()));
    }
    let mut table = Table::new(&["c", "point", "trace", "sqrt_det", "trace_bound", "det_bound", "pass"]);
    let (runs, mut pass) = match cfg.space.build()? {
        Space::H2(o) => bcg_generic(&o, cfg, seed, &mut table)?,
        Space::H3(o) => bcg_generic(&o, cfg, seed, &mut table)?,
        Space::Double(o) => bcg_generic(&o, cfg, seed, &mut table)?,
        Space::Cone(o) => bcg_generic(&o, cfg, seed, &mut table)?,
    };
    let mut vols = Vec::new();
    let mut pushes = Vec::new();
    for &c in &p.c {
        let e = embedding_config(cfg, c);
        if p.vol_phi {
            let v = vol_phi(&e, 12, 8)?;
            pass &= v.pass;
            vols.push(v);
        }
        for (j, &k) in p.pushforward.iter().enumerate() {
            let map = RadialStretch { k };
            let mut rng = trial_rng(sub_seed(seed, 3), j);
            let r = pushforward_isometry_check(&map, 2.0, &e, 20, 10, &mut rng)?;
            let ok = if k == 0.0 {
                r.inner_product_defect < 1e-10 && r.jacobian_defect < 1e-10 && r.determinant_defect < 1e-2
            } else {
                r.inner_product_defect < 1e-3 && r.determinant_defect < 1e-2
            };
            pass &= ok;
            pushes.push(json!({"c": c, "pass": ok, "report": r}));
        }
    }
    let body = json!({"space": cfg.space, "seed": seed, "runs": runs, "vol_phi": vols, "pushforward": pushes});
    Ok(Report::new("bcg", pass, &body, table))
}

fn entropy_run<O: GeodesicOracle>(
    o: &O,
    base: &O::Point,
    cfg: &RunConfig,
    exact: Option<f64>,
    bound: f64,
    seed: u64,
) -> Result<Report, CliError> {
    let p = cfg.entropy.as_ref().expect("checked by caller");
    let tol = cfg.tolerances.entropy.unwrap_or(ENTROPY_TOL);
    let e = entropy_estimate(o, base, &p.radii, p.samples, &mut trial_rng(seed, 0))?;
    let pass = e.slope <= bound + tol && exact.is_none_or(|h| (e.slope - h).abs() <= tol);
    let mut table = Table::new(&["radius", "log_measure", "log_stderr", "samples", "hits"]);
    for i in 0..e.radii.len() {
        table.push([json!(e.radii[i]), json!(e.log_measure[i]), json!(e.log_stderr[i]), json!(e.samples[i]), json!(e.hits[i])]);
    }
    let body = json!({"space": cfg.space, "seed": seed, "base": base, "estimate": e, "bound": bound, "expected": exact, "tolerance": tol});
    Ok(Report::new("entropy", pass, &body, table))
}

pub fn cmd_entropy(cfg: &RunConfig) -> Result<Report, CliError> {
    let seed = cfg.seed()?;
    let Some(p) = &cfg.entropy else {
        return Err(CliError::Config("entropy section required".into()));
    };
    match cfg.space.build()? {
        Space::H2(o) => {
            let base = p.base.map_or_else(H2Point::origin, |b| b.point());
            entropy_run(&o, &base, cfg, Some(1.0), 1.0, seed)
        }
        Space::H3(o) => {
            if p.base.is_some() {
                return Err(CliError::Config("h3 entropy runs use the origin as base".into()));
            }
            entropy_run(&o, &H3Point::origin(), cfg, Some(2.0), 2.0, seed)
        }
        Space::Cone(o) => {
            let base = p.base.map_or(alexandrov_core::cone::ConePoint::APEX, |b| o.point(b.r, b.phi));
            entropy_run(&o, &base, cfg, None, 1.0, seed)
        }
        Space::Double(x) => {
            let base = match (p.base, p.boundary_param) {
                (Some(b), None) => x.point(Sheet::One, b.point())?,
                (None, s) => x.boundary(s.unwrap_or(0.0)),
                (Some(_), Some(_)) => return Err(CliError::Config("give base or boundary_param, not both".into())),
            };
            entropy_run(&x, &base, cfg, None, 1.0, seed)
        }
    }
}

#[derive(Serialize)]
struct SurfaceArea {
    genus: u32,
    angles: Vec<f64>,
    area: f64,
    smooth_area: f64,
}

/// Verifies the cone-angle dichotomy: below `2 pi` random triangles pass
/// comparison, above it the witness fails by more than `1e-3`.
pub fn cmd_cone(cfg: &RunConfig) -> Result<Report, CliError> {
    let seed = cfg.seed()?;
    let Space::Cone(chart) = cfg.space.build()? else {
        return Err(CliError::Config("cone command needs a cone space".into()));
    };
    let params = cfg.cone.clone().unwrap_or(crate::config::ConeParams { rho: 0.5, surfaces: Vec::new() });
    let mut surfaces = Vec::new();
    for s in &params.surfaces {
        let spec = ConeSurfaceSpec::from_genus(s.genus, s.angles.clone())?;
        surfaces.push(SurfaceArea {
            genus: s.genus,
            angles: s.angles.clone(),
            area: cone_area(&spec)?,
            smooth_area: spec.smooth_area(),
        });
    }
    let tol = Tolerance {
        absolute: cfg.tolerances.comparison_absolute.unwrap_or(Tolerance::BOUNDED_BELOW.absolute),
        per_diameter: cfg.tolerances.comparison_per_diameter.unwrap_or(Tolerance::BOUNDED_BELOW.per_diameter),
    };
    let samples = cfg.samples.unwrap_or(SIDE_SAMPLES) | 1;
    let mut table = Table::new(&["trial", "min_slack", "pass"]);
    let theta = chart.theta();
    let (pass, detail) = if theta <= 2.0 * PI {
        let (summary, reports) = comparison_batch(&chart, cfg.trials(1000), samples, tol, seed);
        for (i, r) in reports.iter().enumerate() {
            table.push([json!(i), json!(r.min_slack), json!(r.pass)]);
        }
        (summary.failures == 0, json!({"regime": "bounded_below", "batch": summary}))
    } else {
        let w = cone_witness_triangle(theta, params.rho)?;
        let rep = check_point_comparison(&chart, &w.p, &w.q, &w.r, samples, tol)?;
        table.push([json!(0), json!(rep.min_slack), json!(rep.pass)]);
        (rep.min_slack < -1e-3, json!({"regime": "witness", "witness": w, "min_slack": rep.min_slack}))
    };
    let body = json!({"theta": theta, "seed": seed, "result": detail, "surfaces": surfaces});
    Ok(Report::new("cone", pass, &body, table))
}

fn sheet_point(x: &DoubledSpace, p: &SheetPoint) -> Result<DoublePoint, CliError> {
    let sheet = match p.sheet {
        1 => Sheet::One,
        2 => Sheet::Two,
        s => return Err(CliError::Config(format!("sheet must be 1 or 2, got {s}"))),
    };
    Ok(x.point(sheet, H2Point::from_polar(p.r, p.phi))?)
}

pub fn cmd_double_geodesic(cfg: &RunConfig) -> Result<Report, CliError> {
    let seed = cfg.seed()?;
    let Space::Double(x) = cfg.space.build()? else {
        return Err(CliError::Config("double-geodesic needs a doubled body".into()));
    };
    let Some(g) = &cfg.geodesic else {
        return Err(CliError::Config("geodesic section required".into()));
    };
    let a = sheet_point(&x, &g.from)?;
    let b = sheet_point(&x, &g.to)?;
    let path = x.double_geodesic(&a, &b, g.samples);
    let tol = cfg.tolerances.reflection.unwrap_or(REFLECTION_TOL);
    let law = path.reflected.map(|r| (r.incidence - r.reflection).abs());
    let mut table = Table::new(&["index", "sheet", "x", "y", "on_boundary"]);
    for (i, p) in path.points.iter().enumerate() {
        let s = p.pt.spatial();
        table.push([json!(i), json!(p.sheet), json!(s[0]), json!(s[1]), json!(p.on_boundary)]);
    }
    let pass = law.is_none_or(|l| l < tol);
    let body = json!({"space": cfg.space, "seed": seed, "geodesic": path, "law_defect": law, "tolerance": tol});
    Ok(Report::new("double-geodesic", pass, &body, table))
}

/// `Vol / v_n`, and `2 Vol / v_n` for the double. `v_2 = pi`; `v_3` must be
/// supplied.
pub fn cmd_gromov(vol: f64, n: usize, vn: Option<f64>, doubled: bool) -> Result<Report, CliError> {
    if !(vol >= 0.0 && vol.is_finite()) {
        return Err(CliError::Config(format!("volume must be nonnegative, got {vol}")));
    }
    let vn = match (n, vn) {
        (2 | 3, Some(v)) if v > 0.0 && v.is_finite() => v,
        (2 | 3, Some(v)) => return Err(CliError::Config(format!("v_n must be positive, got {v}"))),
        (2, None) => PI,
        (3, None) => return Err(CliError::Config("v_3 required".into())),
        _ => return Err(CliError::Config(format!("dimension must be 2 or 3, got {n}"))),
    };
    let norm = vol / vn;
    let doubled_norm = doubled.then_some(2.0 * norm);
    let mut table = Table::new(&["vol", "n", "v_n", "norm", "doubled_norm"]);
    table.push([json!(vol), json!(n), json!(vn), json!(norm), json!(doubled_norm)]);
    let body = json!({"vol": vol, "n": n, "v_n": vn, "norm": norm, "doubled_norm": doubled_norm});
    Ok(Report::new("gromov", true, &body, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gromov_values() {
        let r = cmd_gromov(4.0 * PI, 2, None, true).unwrap();
        assert!((r.body["norm"].as_f64().unwrap() - 4.0).abs() < 1e-15);
        assert!((r.body["doubled_norm"].as_f64().unwrap() - 8.0).abs() < 1e-15);
        assert_eq!(cmd_gromov(0.0, 2, None, false).unwrap().body["norm"].as_f64(), Some(0.0));
        let e = cmd_gromov(1.0, 3, None, false).unwrap_err();
        assert!(e.to_string().contains("v_3 required"));
        assert!(cmd_gromov(1.0, 3, Some(1.0149416064096536), false).is_ok());
    }
}
