use serde::Serialize;

use super::angles::{check_condition_b, AngleMethod};
use super::point::{check_point_comparison, Tolerance};
use crate::oracle::GeodesicOracle;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProbeEntry {
    pub index: usize,
    pub distance_pass: bool,
    pub angle_pass: bool,
    pub min_slack: f64,
    pub min_deficit: f64,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub entries: Vec<ProbeEntry>,
    /// Triangles skipped because a vertex pair coincided.
    pub skipped: Vec<usize>,
    pub all_agree: bool,
}

/// Runs distance comparison and condition (B) on the same triangles and
/// compares verdicts. An angle deficit `d` shows up as a distance slack of
/// order `d^2`, so `tol` should be near `Tolerance::MODEL` for the verdicts to
/// be comparable.
pub fn equivalence_probe<O: GeodesicOracle>(
    o: &O,
    triangles: &[(O::Point, O::Point, O::Point)],
    samples: usize,
    tol: Tolerance,
    method: AngleMethod,
) -> EquivalenceReport {
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for (index, (p, q, r)) in triangles.iter().enumerate() {
        let (Ok(d), Ok(b)) = (
            check_point_comparison(o, p, q, r, samples, tol),
            check_condition_b(o, p, q, r, method),
        ) else {
            skipped.push(index);
            continue;
        };
        entries.push(ProbeEntry {
            index,
            distance_pass: d.pass,
            angle_pass: b.pass,
            min_slack: d.min_slack,
            min_deficit: b.deficits.iter().cloned().fold(f64::INFINITY, f64::min),
            agree: d.pass == b.pass,
        });
    }
    EquivalenceReport {
        all_agree: entries.iter().all(|e| e.agree),
        entries,
        skipped,
    }
}
