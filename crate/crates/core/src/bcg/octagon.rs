use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::metric::g_phi;
use super::quadrature::{gauss_legendre, EmbeddingConfig, QuadratureSet};
use crate::error::{GeomError, Result};
use crate::hyp::{angle, H2Point};
use crate::oracle::H2Space;

/// Regular hyperbolic octagon with all angles `pi/4`: a fundamental domain
/// of a genus-2 surface.
#[derive(Clone, Debug, Serialize)]
pub struct Octagon {
    pub circumradius: f64,
    pub inradius: f64,
    pub vertices: Vec<H2Point>,
    /// Measured interior angles.
    pub angles: Vec<f64>,
    /// `6 pi - sum(angles)`.
    pub area: f64,
}

/// Builds the octagon centered at the origin and checks its area by
/// Gauss-Bonnet.
pub fn genus_two_octagon() -> Result<Octagon> {
    let cot = 1.0 / (PI / 8.0).tan();
    let circumradius = (cot * cot).acosh();
    let inradius = (circumradius.tanh() * (PI / 8.0).cos()).atanh();
    let vertices: Vec<H2Point> = (0..8)
        .map(|k| H2Point::from_polar(circumradius, k as f64 * PI / 4.0))
        .collect();
    let angles = (0..8)
        .map(|k| angle(&vertices[k], &vertices[(k + 7) % 8], &vertices[(k + 1) % 8]))
        .collect::<Result<Vec<f64>>>()?;
    let area = 6.0 * PI - angles.iter().sum::<f64>();
    if (area - 4.0 * PI).abs() > 1e-6 {
        return Err(GeomError::InvalidBody(format!("octagon area {area} is not 4 pi")));
    }
    Ok(Octagon {
        circumradius,
        inradius,
        vertices,
        angles,
        area,
    })
}

impl Octagon {
    /// Polar Gauss-Legendre rule on each of the eight sectors. The angle is
    /// parameterized by arclength `t` from the edge midpoint, where
    /// `cosh(rho) = cosh(a) cosh(t)` is smooth up to the vertices.
    pub fn quadrature(&self, along: usize, radial: usize) -> QuadratureSet<H2Point> {
        let a = self.inradius;
        let half = (self.circumradius.cosh() / a.cosh()).acosh();
        let sa = a.sinh();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for k in 0..8 {
            let mid = (k as f64 + 0.5) * PI / 4.0;
            for (t, wt) in gauss_legendre(along, -half, half) {
                let th = t.tanh();
                let phi = mid + (th / sa).atan();
                let dphi = sa * (1.0 - th * th) / (sa * sa + th * th);
                let rho = (a.cosh() * t.cosh()).acosh();
                for (r, wr) in gauss_legendre(radial, 0.0, rho) {
                    nodes.push(H2Point::from_polar(r, phi));
                    weights.push(wt * dphi * wr * r.sinh());
                }
            }
        }
        QuadratureSet { nodes, weights, tail: 0.0 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VolPhiReport {
    pub c: f64,
    pub area: f64,
    pub quadrature_area: f64,
    pub value: f64,
    /// `((n-1)^2 / 4n)^{n/2} area = area / 8`.
    pub lower: f64,
    /// `(c^2 / n)^{n/2} area = c^2 area / 2`.
    pub upper: f64,
    pub points: usize,
    pub min_trace_slack: f64,
    pub pass: bool,
}

/// `int_F sqrt(det g_Phi)` over the genus-2 octagon in `H^2`.
pub fn vol_phi(cfg: &EmbeddingConfig, along: usize, radial: usize) -> Result<VolPhiReport> {
    let oct = genus_two_octagon()?;
    let q = oct.quadrature(along, radial);
    let quadrature_area = q.total_weight();
    if (quadrature_area - oct.area).abs() > 1e-6 {
        return Err(GeomError::InvalidBody(format!("octagon quadrature area {quadrature_area}")));
    }
    let space = H2Space::default();
    let reports = q
        .nodes
        .par_iter()
        .map(|p| g_phi(&space, cfg, p, None))
        .collect::<Result<Vec<_>>>()?;
    let value = reports.iter().zip(&q.weights).map(|(r, w)| w * r.sqrt_det).sum();
    let min_trace_slack = reports.iter().map(|r| r.trace_slack).fold(f64::INFINITY, f64::min);
    let lower = oct.area / 8.0;
    let upper = cfg.c * cfg.c * oct.area / 2.0;
    Ok(VolPhiReport {
        c: cfg.c,
        area: oct.area,
        quadrature_area,
        value,
        lower,
        upper,
        points: q.len(),
        min_trace_slack,
        pass: value >= lower && value <= upper * (1.0 + 1e-3),
    })
}
