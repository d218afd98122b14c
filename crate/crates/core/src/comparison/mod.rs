//! Triangle comparison checkers for any `GeodesicOracle`.

mod angles;
mod lemma;
mod point;
mod probe;

pub use angles::{
    angle_via_limit, check_condition_b, check_condition_c, AngleMethod, ConditionB, LimitAngle, CONDITION_B_TOL,
    CONDITION_C_TOL, CONVERGENCE_SPREAD, MONOTONE_SLACK, ON_GEODESIC_TOL,
};
pub use lemma::{
    alexandrov_lemma_check, quad_from_angles, random_admissible_quad, random_quad_with_defect, LemmaCheck, QuadConfig,
    QuadMeasures, EQUALITY_TRIGGER, RIGIDITY_TOL,
};
pub use point::{check_point_comparison, ComparisonReport, Tolerance, DEGENERACY};
pub use probe::{equivalence_probe, EquivalenceReport, ProbeEntry};

use serde::Serialize;

use crate::batch::parallel_trials;
use crate::oracle::PointSampler;

/// Aggregate of a random-triangle comparison run.
#[derive(Clone, Debug, Serialize)]
pub struct BatchSummary {
    pub trials: usize,
    pub evaluated: usize,
    pub degenerate: usize,
    pub failures: usize,
    pub min_slack: f64,
    /// Smallest `min_slack + threshold` over the run; negative iff a failure.
    pub min_margin: f64,
    pub min_angle_deficit: Option<f64>,
}

/// Distance comparison on `trials` random triangles drawn from the oracle's
/// test region, in parallel with one RNG stream per trial.
pub fn comparison_batch<O: PointSampler>(
    o: &O,
    trials: usize,
    samples: usize,
    tol: Tolerance,
    seed: u64,
) -> (BatchSummary, Vec<ComparisonReport<O::Point>>) {
    let reports: Vec<Option<ComparisonReport<O::Point>>> = parallel_trials(trials, seed, |_, rng| {
        let p = o.sample_point(rng);
        let q = o.sample_point(rng);
        let r = o.sample_point(rng);
        check_point_comparison(o, &p, &q, &r, samples, tol).ok()
    });
    let reports: Vec<_> = reports.into_iter().flatten().collect();
    (summarize(trials, &reports), reports)
}

pub fn summarize<P>(trials: usize, reports: &[ComparisonReport<P>]) -> BatchSummary {
    let mut s = BatchSummary {
        trials,
        evaluated: reports.len(),
        degenerate: 0,
        failures: 0,
        min_slack: f64::INFINITY,
        min_margin: f64::INFINITY,
        min_angle_deficit: None,
    };
    for r in reports {
        s.degenerate += r.degenerate as usize;
        s.failures += (!r.pass) as usize;
        s.min_slack = s.min_slack.min(r.min_slack);
        s.min_margin = s.min_margin.min(r.min_slack + r.threshold);
        if let Some(d) = r.angle_deficits {
            let m = d.iter().cloned().fold(f64::INFINITY, f64::min);
            s.min_angle_deficit = Some(s.min_angle_deficit.map_or(m, |x: f64| x.min(m)));
        }
    }
    s
}
