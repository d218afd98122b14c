use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::chart::MetricChart;
use super::psi::{coordinate_frame, displaced, distance_gradient, psi_on};
use super::quadrature::{EmbeddingConfig, QuadratureSet};
use crate::error::{GeomError, Result};

/// Relative truncation error of `||Psi_c||^2` above which `g_phi` refuses.
pub const MAX_TAIL: f64 = 1e-3;

/// The pulled-back metric `g_Phi` at one point, in an orthonormal frame.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddedMetricReport<P> {
    pub x: P,
    pub c: f64,
    pub psi_norm: f64,
    pub gram: Vec<Vec<f64>>,
    pub trace: f64,
    pub det: f64,
    pub sqrt_det: f64,
    pub min_eigenvalue: f64,
    /// `sum_i ||dPsi(e_i)||^2 / ||Psi||^2`, which bounds the trace.
    pub psi_trace: f64,
    /// Trace recomputed through `||dPsi||^2/||Psi||^2 - <Psi,dPsi>^2/||Psi||^4`.
    pub identity_trace: f64,
    /// Largest finite-difference `|grad d(., y)|^2` over the nodes where
    /// `d(., y)` is differentiable near `x`.
    pub max_grad_sq: f64,
    /// Nodes whose distance function has a kink within `delta` of `x`.
    pub kinked_nodes: usize,
    /// `c^2`.
    pub trace_bound: f64,
    /// `(c^2 / n)^{n/2}`.
    pub det_bound: f64,
    /// `(trace / n)^{n/2}`.
    pub amgm: f64,
    pub trace_slack: f64,
    pub det_slack: f64,
    pub amgm_slack: f64,
    pub tail: f64,
    pub nodes: usize,
}

impl<P> EmbeddedMetricReport<P> {
    pub fn gram_matrix(&self) -> DMatrix<f64> {
        let n = self.gram.len();
        DMatrix::from_fn(n, n, |i, k| self.gram[i][k])
    }

    /// Trace and determinant bounds with relative slack `rel`.
    pub fn within(&self, rel: f64) -> bool {
        self.trace <= self.trace_bound * (1.0 + rel) && self.sqrt_det <= self.det_bound * (1.0 + rel)
    }
}

fn check_frame(frame: &[Vec<f64>], n: usize) -> Result<()> {
    if frame.len() != n || frame.iter().any(|f| f.len() != n) {
        return Err(GeomError::InvalidParameter(format!("frame must be {n} x {n}")));
    }
    for i in 0..n {
        for k in 0..n {
            let dot: f64 = frame[i].iter().zip(&frame[k]).map(|(a, b)| a * b).sum();
            if (dot - if i == k { 1.0 } else { 0.0 }).abs() > 1e-10 {
                return Err(GeomError::InvalidParameter("frame is not orthonormal".into()));
            }
        }
    }
    Ok(())
}

fn prepare<O: MetricChart>(
    o: &O,
    cfg: &EmbeddingConfig,
    x: &O::Point,
    frame: Option<&[Vec<f64>]>,
) -> Result<(Vec<Vec<f64>>, QuadratureSet<O::Point>)> {
    let n = o.dimension();
    cfg.validate(o.entropy())?;
    let frame = frame.map(|f| f.to_vec()).unwrap_or_else(|| coordinate_frame(n));
    check_frame(&frame, n)?;
    if o.singular_clearance(x) <= 2.0 * cfg.delta {
        return Err(GeomError::Precondition("point within 2 delta of the singular set".into()));
    }
    let q = o.quadrature(x, cfg)?;
    if q.tail > MAX_TAIL {
        return Err(GeomError::TruncationTooSmall(q.tail));
    }
    Ok((frame, q))
}

fn gram_of(vectors: &[Vec<f64>], w: &[f64]) -> DMatrix<f64> {
    let n = vectors.len();
    DMatrix::from_fn(n, n, |i, k| {
        vectors[i]
            .iter()
            .zip(&vectors[k])
            .zip(w)
            .map(|((a, b), w)| w * a * b)
            .sum()
    })
}

/// `g_Phi(e_i, e_k) = <dPhi_c(e_i), dPhi_c(e_k)>` from the analytic
/// derivative `dPsi_c(v)(y) = -c e^{-c d(x,y)} Dd(v)` with `Dd` by central
/// differences, followed by the radial projection differential.
pub fn g_phi<O: MetricChart>(
    o: &O,
    cfg: &EmbeddingConfig,
    x: &O::Point,
    frame: Option<&[Vec<f64>]>,
) -> Result<EmbeddedMetricReport<O::Point>> {
    let n = o.dimension();
    let c = cfg.c;
    let (frame, q) = prepare(o, cfg, x, frame)?;
    let moved = displaced(o, x, &frame, cfg.delta);
    let clearance = o.singular_clearance(x);
    let rows: Vec<(f64, Vec<f64>, bool)> = q
        .nodes
        .par_iter()
        .map(|y| {
            let d0 = o.distance(x, y);
            let (g, kinked) = distance_gradient(o, &moved, y, d0, clearance, cfg.delta);
            (d0, g, kinked)
        })
        .collect();
    let w = &q.weights;
    let psi: Vec<f64> = rows.iter().map(|(d, _, _)| (-c * d).exp()).collect();
    let norm_sq: f64 = w.iter().zip(&psi).map(|(w, f)| w * f * f).sum();
    let norm = norm_sq.sqrt();
    let dpsi: Vec<Vec<f64>> = (0..n)
        .map(|i| rows.iter().zip(&psi).map(|((_, g, _), f)| -c * f * g[i]).collect())
        .collect();
    let proj: Vec<f64> = dpsi
        .iter()
        .map(|v| w.iter().zip(&psi).zip(v).map(|((w, f), t)| w * f * t).sum())
        .collect();
    let dphi: Vec<Vec<f64>> = dpsi
        .iter()
        .zip(&proj)
        .map(|(v, p)| v.iter().zip(&psi).map(|(t, f)| t / norm - f * p / (norm * norm_sq)).collect())
        .collect();
    let g = gram_of(&dphi, w);
    let dpsi_sq: Vec<f64> = dpsi
        .iter()
        .map(|v| w.iter().zip(v).map(|(w, t)| w * t * t).sum())
        .collect();
    let psi_trace = dpsi_sq.iter().sum::<f64>() / norm_sq;
    let identity_trace: f64 = dpsi_sq
        .iter()
        .zip(&proj)
        .map(|(s, p)| s / norm_sq - p * p / (norm_sq * norm_sq))
        .sum();
    let max_grad_sq = rows
        .iter()
        .filter(|r| !r.2)
        .map(|(_, g, _)| g.iter().map(|v| v * v).sum::<f64>())
        .fold(0.0, f64::max);
    let kinked_nodes = rows.iter().filter(|r| r.2).count();
    Ok(report::<O>(x, cfg, &q, g, norm, psi_trace, identity_trace, max_grad_sq, kinked_nodes, n))
}

#[allow(clippy::too_many_arguments)]
fn report<O: MetricChart>(
    x: &O::Point,
    cfg: &EmbeddingConfig,
    q: &QuadratureSet<O::Point>,
    g: DMatrix<f64>,
    psi_norm: f64,
    psi_trace: f64,
    identity_trace: f64,
    max_grad_sq: f64,
    kinked_nodes: usize,
    n: usize,
) -> EmbeddedMetricReport<O::Point> {
    let c2 = cfg.c * cfg.c;
    let trace = g.trace();
    let det = g.determinant();
    let sqrt_det = det.abs().sqrt();
    let min_eigenvalue = g.clone().symmetric_eigenvalues().min();
    let half = n as f64 / 2.0;
    let det_bound = (c2 / n as f64).powf(half);
    let amgm = (trace / n as f64).powf(half);
    EmbeddedMetricReport {
        x: x.clone(),
        c: cfg.c,
        psi_norm,
        gram: (0..n).map(|i| (0..n).map(|k| g[(i, k)]).collect()).collect(),
        trace,
        det,
        sqrt_det,
        min_eigenvalue,
        psi_trace,
        identity_trace,
        max_grad_sq,
        kinked_nodes,
        trace_bound: c2,
        det_bound,
        amgm,
        trace_slack: c2 - trace,
        det_slack: det_bound - sqrt_det,
        amgm_slack: amgm - sqrt_det,
        tail: q.tail,
        nodes: q.len(),
    }
}

/// `g_Phi` from central differences of the normalized sampled functions
/// `Phi_c(x +- delta e_i)`, all on the quadrature set about `x`.
pub fn g_phi_finite_difference<O: MetricChart>(
    o: &O,
    cfg: &EmbeddingConfig,
    x: &O::Point,
    frame: Option<&[Vec<f64>]>,
) -> Result<DMatrix<f64>> {
    let (frame, q) = prepare(o, cfg, x, frame)?;
    let q = Arc::new(q);
    let moved = displaced(o, x, &frame, cfg.delta);
    let phi = |p: &O::Point| {
        let f = psi_on(o, cfg.c, p, &q);
        let n = f.norm();
        f.values.into_iter().map(|v| v / n).collect::<Vec<f64>>()
    };
    let diffs: Vec<Vec<f64>> = moved
        .iter()
        .map(|(p, m)| {
            phi(p)
                .into_iter()
                .zip(phi(m))
                .map(|(a, b)| (a - b) / (2.0 * cfg.delta))
                .collect()
        })
        .collect();
    Ok(gram_of(&diffs, &q.weights))
}
