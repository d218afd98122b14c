use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::chart::MetricChart;
use super::quadrature::{EmbeddingConfig, QuadratureSet};
use crate::error::{GeomError, Result};

/// A function known at the nodes of a quadrature set.
#[derive(Clone, Debug)]
pub struct SampledFunction<P> {
    pub quadrature: Arc<QuadratureSet<P>>,
    pub values: Vec<f64>,
}

impl<P> SampledFunction<P> {
    pub fn norm_sq(&self) -> f64 {
        self.quadrature
            .weights
            .iter()
            .zip(&self.values)
            .map(|(w, f)| w * f * f)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Fails unless both functions live on the same quadrature set.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if !Arc::ptr_eq(&self.quadrature, &other.quadrature) {
            return Err(GeomError::Precondition("inner product across quadrature sets".into()));
        }
        Ok(self
            .quadrature
            .weights
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (f, g))| w * f * g)
            .sum())
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        if !Arc::ptr_eq(&self.quadrature, &other.quadrature) {
            return Err(GeomError::Precondition("distance across quadrature sets".into()));
        }
        let d2: f64 = self
            .quadrature
            .weights
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (f, g))| w * (f - g) * (f - g))
            .sum();
        Ok(d2.sqrt())
    }
}

/// `y -> e^{-c d(x, y)}` on a given quadrature set.
pub fn psi_on<O: MetricChart>(o: &O, c: f64, x: &O::Point, q: &Arc<QuadratureSet<O::Point>>) -> SampledFunction<O::Point> {
    let values = q.nodes.par_iter().map(|y| (-c * o.distance(x, y)).exp()).collect();
    SampledFunction {
        quadrature: Arc::clone(q),
        values,
    }
}

/// `Psi_c(x)` on the oracle's quadrature about `x`.
pub fn psi<O: MetricChart>(o: &O, cfg: &EmbeddingConfig, x: &O::Point) -> Result<SampledFunction<O::Point>> {
    cfg.validate(o.entropy())?;
    let q = Arc::new(o.quadrature(x, cfg)?);
    Ok(psi_on(o, cfg.c, x, &q))
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub c: f64,
    pub evaluated: usize,
    pub skipped: usize,
    /// Largest sampled `||Psi_c||`.
    pub b: f64,
    pub bound: f64,
    pub max_ratio: f64,
    pub pass: bool,
}

/// Largest `||Psi_c(x) - Psi_c(y)|| / d(x, y)` over the pairs, against
/// `2bc`. Both functions of a pair use one refined quadrature set about `x`,
/// widened by `d(x, y)` so that it covers the truncated ball about `y` too.
pub fn lipschitz_probe<O: MetricChart>(
    o: &O,
    cfg: &EmbeddingConfig,
    pairs: &[(O::Point, O::Point)],
) -> Result<LipschitzReport> {
    cfg.validate(o.entropy())?;
    let r = cfg.truncation(o.entropy());
    let rows: Vec<Option<(f64, f64, f64)>> = pairs
        .par_iter()
        .map(|(x, y)| -> Result<Option<(f64, f64, f64)>> {
            let d = o.distance(x, y);
            if d == 0.0 {
                return Ok(None);
            }
            let wide = cfg.refined().with_truncation(r + d);
            let q = Arc::new(o.quadrature(x, &wide)?);
            let fx = psi_on(o, cfg.c, x, &q);
            let fy = psi_on(o, cfg.c, y, &q);
            Ok(Some((fx.distance(&fy)? / d, fx.norm(), fy.norm())))
        })
        .collect::<Result<_>>()?;
    let mut b = 0f64;
    let mut max_ratio = 0f64;
    let mut evaluated = 0;
    for (ratio, nx, ny) in rows.iter().flatten() {
        b = b.max(*nx).max(*ny);
        max_ratio = max_ratio.max(*ratio);
        evaluated += 1;
    }
    let bound = 2.0 * b * cfg.c;
    Ok(LipschitzReport {
        c: cfg.c,
        evaluated,
        skipped: pairs.len() - evaluated,
        b,
        bound,
        max_ratio,
        pass: max_ratio <= bound * (1.0 + 1e-3),
    })
}

/// The `2n` points `x +- delta f_i` for the columns `f_i` of `frame`.
pub(crate) fn displaced<O: MetricChart>(o: &O, x: &O::Point, frame: &[Vec<f64>], delta: f64) -> Vec<(O::Point, O::Point)> {
    frame
        .iter()
        .map(|f| {
            let plus: Vec<f64> = f.iter().map(|v| delta * v).collect();
            let minus: Vec<f64> = f.iter().map(|v| -delta * v).collect();
            (o.displace(x, &plus), o.displace(x, &minus))
        })
        .collect()
}

/// Central differences of `d(., y)` along the frame, given `d0 = d(x, y)`
/// and the clearance of `x`. The flag is set when some stencil straddles a
/// kink: a concave second difference beyond `4 delta^2 (1 + 1 / rho)`,
/// `rho = min(d0, clearance)`, which bounds the smooth case.
pub(crate) fn distance_gradient<O: MetricChart>(
    o: &O,
    moved: &[(O::Point, O::Point)],
    y: &O::Point,
    d0: f64,
    clearance: f64,
    delta: f64,
) -> (Vec<f64>, bool) {
    let limit = 4.0 * delta * delta * (1.0 + 1.0 / d0.min(clearance));
    let mut kinked = false;
    let g = moved
        .iter()
        .map(|(p, m)| {
            let (fp, fm) = (o.distance(p, y), o.distance(m, y));
            kinked |= fp - 2.0 * d0 + fm < -limit;
            (fp - fm) / (2.0 * delta)
        })
        .collect();
    (g, kinked)
}

pub(crate) fn coordinate_frame(n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|i| (0..n).map(|k| if i == k { 1.0 } else { 0.0 }).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum GradCheck {
    Checked { squared_norm: f64, bound: f64, pass: bool },
    Skipped { reason: String },
}

/// `|grad_x d(x, y)|^2` by central differences, against `1 + 4 delta`.
/// Skipped where `d(., y)` has a kink inside the stencil.
pub fn grad_distance_check<O: MetricChart>(o: &O, cfg: &EmbeddingConfig, x: &O::Point, y: &O::Point) -> GradCheck {
    let delta = cfg.delta;
    if o.distance(x, y) <= 2.0 * delta {
        return GradCheck::Skipped {
            reason: "x within 2 delta of y".into(),
        };
    }
    let clearance = o.singular_clearance(x);
    if clearance <= 2.0 * delta {
        return GradCheck::Skipped {
            reason: "x within 2 delta of the singular set".into(),
        };
    }
    let moved = displaced(o, x, &coordinate_frame(o.dimension()), delta);
    let (g, kinked) = distance_gradient(o, &moved, y, o.distance(x, y), clearance, delta);
    if kinked {
        return GradCheck::Skipped {
            reason: "d(., y) not differentiable within delta of x".into(),
        };
    }
    let squared_norm: f64 = g.iter().map(|v| v * v).sum();
    let bound = 1.0 + 4.0 * delta;
    GradCheck::Checked {
        squared_norm,
        bound,
        pass: squared_norm <= bound,
    }
}
