use std::f64::consts::PI;

use super::quadrature::{angular_rule, gauss_legendre, hyperbolic_tail, radial_rule, EmbeddingConfig, QuadratureSet};
use crate::cone::{ConeChart, ConePoint};
use crate::double::{DoublePoint, DoubledSpace, Sheet};
use crate::error::{GeomError, Result};
use crate::hyp::{exp_map, H2Point, HIsometry, HPoint, HTangent, MinkowskiVector};
use crate::oracle::{GeodesicOracle, HyperbolicSpace};

/// Local Riemannian structure an oracle needs for the embedding: an
/// orthonormal frame at regular points and quadrature over the space.
pub trait MetricChart: GeodesicOracle {
    /// Volume growth entropy of the space.
    fn entropy(&self) -> f64;

    /// Distance from `x` to the singular set; infinite when there is none.
    fn singular_clearance(&self, x: &Self::Point) -> f64;

    /// Endpoint of the geodesic from `x` with initial velocity `sum v_i e_i`
    /// in the chart's orthonormal frame at `x`.
    fn displace(&self, x: &Self::Point, v: &[f64]) -> Self::Point;

    /// Quadrature covering at least the ball `B(x, truncation)`.
    fn quadrature(&self, x: &Self::Point, cfg: &EmbeddingConfig) -> Result<QuadratureSet<Self::Point>>;
}

/// Unit directions of `S^{n-1}` with weights summing to its area.
fn sphere_rule(n: usize, m: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    match n {
        2 => Ok(angular_rule(m, 2.0 * PI)
            .into_iter()
            .map(|(phi, w)| (vec![phi.cos(), phi.sin()], w))
            .collect()),
        3 => {
            let mut out = Vec::new();
            for (z, wz) in gauss_legendre(m.div_ceil(2), -1.0, 1.0) {
                let s = (1.0 - z * z).sqrt();
                for (phi, wp) in angular_rule(m, 2.0 * PI) {
                    out.push((vec![s * phi.cos(), s * phi.sin(), z], wz * wp));
                }
            }
            Ok(out)
        }
        _ => Err(GeomError::UnsupportedDimension(n)),
    }
}

impl<const D: usize> MetricChart for HyperbolicSpace<D> {
    fn entropy(&self) -> f64 {
        (D - 2) as f64
    }

    fn singular_clearance(&self, _x: &HPoint<D>) -> f64 {
        f64::INFINITY
    }

    /// The frame at `x` is the image of the coordinate frame at the origin
    /// under the translation to `x`.
    fn displace(&self, x: &HPoint<D>, v: &[f64]) -> HPoint<D> {
        let mut u = MinkowskiVector::zeros();
        for (i, vi) in v.iter().enumerate() {
            u.0[i + 1] = *vi;
        }
        let t = HIsometry::translation_to(x);
        exp_map(&t.apply_tangent(&HTangent::new(HPoint::origin(), u)))
    }

    /// Geodesic polar rule centered at `x`.
    fn quadrature(&self, x: &HPoint<D>, cfg: &EmbeddingConfig) -> Result<QuadratureSet<HPoint<D>>> {
        let n = D - 1;
        let r_max = cfg.truncation(self.entropy());
        let t = HIsometry::translation_to(x);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut dirs = (0, Vec::new());
        for (r, wr) in radial_rule(r_max, cfg.panel_width, cfg.radial_order) {
            let m = cfg.angular_count(r);
            if dirs.0 != m {
                dirs = (m, sphere_rule(n, m)?);
            }
            let s = r.sinh();
            let w = wr * s.powi(n as i32 - 1);
            for (dir, wd) in &dirs.1 {
                let spatial: Vec<f64> = dir.iter().map(|d| s * d).collect();
                nodes.push(t.apply(&HPoint::from_spatial(&spatial)));
                weights.push(w * wd);
            }
        }
        Ok(QuadratureSet {
            nodes,
            weights,
            tail: hyperbolic_tail(n, cfg.c, r_max)?,
        })
    }
}

/// Frame at `x` from the translation taking the origin to `x`.
fn plane_displace(x: &H2Point, v: &[f64]) -> H2Point {
    let t = HIsometry::translation_to(x);
    let u = MinkowskiVector::new([0.0, v[0], v[1]]);
    exp_map(&t.apply_tangent(&HTangent::new(H2Point::origin(), u)))
}

impl MetricChart for DoubledSpace {
    /// The double of a compact body is compact.
    fn entropy(&self) -> f64 {
        0.0
    }

    fn singular_clearance(&self, x: &DoublePoint) -> f64 {
        if x.on_boundary {
            0.0
        } else {
            (-self.body().boundary_gap(&x.pt)).max(0.0)
        }
    }

    /// Moves within the sheet of `x`; a step that leaves the body stops at
    /// the nearest boundary point.
    fn displace(&self, x: &DoublePoint, v: &[f64]) -> DoublePoint {
        let y = plane_displace(&x.pt, v);
        self.point(x.sheet, y)
            .unwrap_or_else(|_| self.boundary(self.body().boundary_param(&y)))
    }

    /// Polar rule about the body center on each sheet, covering the whole
    /// space; there is no truncation. Rays are shared by all radii, so only
    /// `angular_nodes` is used.
    fn quadrature(&self, _x: &DoublePoint, cfg: &EmbeddingConfig) -> Result<QuadratureSet<DoublePoint>> {
        let body = self.body();
        let c = body.center();
        let t = HIsometry::translation_to(&c);
        let hi = body.bounding_radius() + 1.0;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (phi, wphi) in angular_rule(cfg.angular_nodes, 2.0 * PI) {
            let ray = |r: f64| t.apply(&H2Point::from_polar(r, phi));
            let (mut lo, mut up) = (0.0, hi);
            for _ in 0..100 {
                let mid = 0.5 * (lo + up);
                if body.boundary_gap(&ray(mid)) <= 0.0 {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            for (r, wr) in radial_rule(lo, cfg.panel_width, cfg.radial_order) {
                let y = ray(r);
                for sheet in [Sheet::One, Sheet::Two] {
                    nodes.push(self.point(sheet, y)?);
                    weights.push(wphi * wr * r.sinh());
                }
            }
        }
        Ok(QuadratureSet { nodes, weights, tail: 0.0 })
    }
}

impl MetricChart for ConeChart {
    fn entropy(&self) -> f64 {
        1.0
    }

    fn singular_clearance(&self, x: &ConePoint) -> f64 {
        x.r
    }

    /// Orthonormal frame `(e_r, e_phi)`; the step is taken in the planar
    /// development around `x`.
    fn displace(&self, x: &ConePoint, v: &[f64]) -> ConePoint {
        let y = plane_displace(&H2Point::from_polar(x.r, 0.0), v);
        self.point(y.radius(), x.phi + y.polar_angle())
    }

    /// Polar rule about the apex out to `r_x + truncation`. The tail estimate
    /// is the plane's, scaled by `max(theta, 2 pi) / min(theta, 2 pi)`.
    fn quadrature(&self, x: &ConePoint, cfg: &EmbeddingConfig) -> Result<QuadratureSet<ConePoint>> {
        let scale = self.theta().max(2.0 * PI) / self.theta().min(2.0 * PI);
        let r_trunc = cfg.scaled_truncation(self.entropy(), scale);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for (r, wr) in radial_rule(x.r + r_trunc, cfg.panel_width, cfg.radial_order) {
            let m = ((cfg.angular_count(r) as f64) * self.theta() / (2.0 * PI)).ceil() as usize;
            for (phi, wphi) in &angular_rule(m.max(3), self.theta()) {
                nodes.push(self.point(r, *phi));
                weights.push(wr * wphi * r.sinh());
            }
        }
        Ok(QuadratureSet {
            nodes,
            weights,
            tail: hyperbolic_tail(2, cfg.c, r_trunc)? * scale,
        })
    }
}
