use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::hyp::{comparison_angle, comparison_cevian};
use crate::oracle::GeodesicOracle;

/// Acceptance threshold `absolute + per_diameter * diameter`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerance {
    pub absolute: f64,
    pub per_diameter: f64,
}

impl Tolerance {
    /// For the model spaces, where comparison is an equality.
    pub const MODEL: Tolerance = Tolerance {
        absolute: 1e-8,
        per_diameter: 0.0,
    };
    /// For spaces with curvature bounded below.
    pub const BOUNDED_BELOW: Tolerance = Tolerance {
        absolute: 1e-5,
        per_diameter: 1e-5,
    };

    pub fn threshold(&self, diameter: f64) -> f64 {
        self.absolute + self.per_diameter * diameter
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::BOUNDED_BELOW
    }
}

/// Distance comparison along side `qr` of triangle `pqr`.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport<P> {
    pub p: P,
    pub q: P,
    pub r: P,
    /// `|pq|, |pr|, |qr|`.
    pub sides: [f64; 3],
    /// `|ps| - |p~s~|` at the sampled points `s` of `qr`.
    pub slacks: Vec<f64>,
    pub min_slack: f64,
    /// `angle - comparison angle` at `p, q, r`, when the oracle exposes angles.
    pub angle_deficits: Option<[f64; 3]>,
    pub degenerate: bool,
    pub threshold: f64,
    pub pass: bool,
}

/// Relative excess below which a triangle counts as collinear.
pub const DEGENERACY: f64 = 1e-10;

pub(crate) fn is_degenerate(pq: f64, pr: f64, qr: f64) -> bool {
    let diam = pq.max(pr).max(qr);
    let excess = (pq + pr - qr).min(pq + qr - pr).min(pr + qr - pq);
    excess <= DEGENERACY * (1.0 + diam)
}

/// Vertex angles at `p, q, r` of the comparison triangle.
pub(crate) fn comparison_angles(pq: f64, pr: f64, qr: f64) -> Result<[f64; 3]> {
    Ok([
        comparison_angle(qr, pq, pr)?,
        comparison_angle(pr, pq, qr)?,
        comparison_angle(pq, pr, qr)?,
    ])
}

/// Samples `m` equally spaced interior points `s` of the chosen geodesic
/// `qr` and compares `|ps|` with the corresponding distance in the
/// comparison triangle.
pub fn check_point_comparison<O: GeodesicOracle>(
    o: &O,
    p: &O::Point,
    q: &O::Point,
    r: &O::Point,
    m: usize,
    tol: Tolerance,
) -> Result<ComparisonReport<O::Point>> {
    let pq = o.distance(p, q);
    let pr = o.distance(p, r);
    let qr = o.distance(q, r);
    if pq == 0.0 || pr == 0.0 || qr == 0.0 {
        return Err(GeomError::Precondition("triangle vertices must be pairwise distinct".into()));
    }
    let diam = pq.max(pr).max(qr);
    let threshold = tol.threshold(diam);
    let degenerate = is_degenerate(pq, pr, qr);
    let slacks: Vec<f64> = if degenerate {
        vec![0.0; m]
    } else {
        let path = o.geodesic_samples(q, r, m + 2);
        path[1..=m]
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let t = (i + 1) as f64 / (m + 1) as f64;
                o.distance(p, s) - comparison_cevian(pq, pr, qr, t * qr)
            })
            .collect()
    };
    let min_slack = slacks.iter().cloned().fold(f64::INFINITY, f64::min);
    let angle_deficits = if degenerate {
        None
    } else {
        vertex_angles(o, p, q, r).and_then(|a| {
            let c = comparison_angles(pq, pr, qr).ok()?;
            Some([a[0] - c[0], a[1] - c[1], a[2] - c[2]])
        })
    };
    Ok(ComparisonReport {
        p: p.clone(),
        q: q.clone(),
        r: r.clone(),
        sides: [pq, pr, qr],
        min_slack: if m == 0 { 0.0 } else { min_slack },
        pass: m == 0 || min_slack >= -threshold,
        slacks,
        angle_deficits,
        degenerate,
        threshold,
    })
}

fn vertex_angles<O: GeodesicOracle>(o: &O, p: &O::Point, q: &O::Point, r: &O::Point) -> Option<[f64; 3]> {
    let a = o.angle_at(p, q, r)?.ok()?;
    let b = o.angle_at(q, p, r)?.ok()?;
    let c = o.angle_at(r, p, q)?.ok()?;
    Some([a, b, c])
}
