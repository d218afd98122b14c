use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::chart::MetricChart;
use super::metric::g_phi;
use super::psi::psi_on;
use super::quadrature::{angular_rule, radial_rule, EmbeddingConfig};
use crate::error::{GeomError, Result};
use crate::hyp::{dist, log_map, H2Point, HIsometry};
use crate::oracle::H2Space;

/// `(r, phi) -> (r (1 + k r), phi)` on a disk about the origin of `H^2`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RadialStretch {
    pub k: f64,
}

impl RadialStretch {
    pub const IDENTITY: RadialStretch = RadialStretch { k: 0.0 };

    pub fn radius(&self, r: f64) -> f64 {
        r * (1.0 + self.k * r)
    }

    pub fn radius_derivative(&self, r: f64) -> f64 {
        1.0 + 2.0 * self.k * r
    }

    pub fn apply_polar(&self, r: f64, phi: f64) -> H2Point {
        H2Point::from_polar(self.radius(r), phi)
    }

    pub fn apply(&self, p: &H2Point) -> H2Point {
        self.apply_polar(p.radius(), p.polar_angle())
    }

    /// Area Jacobian `s'(r) sinh(s(r)) / sinh(r)`.
    pub fn jacobian(&self, r: f64) -> f64 {
        let ds = self.radius_derivative(r);
        if r < 1e-8 {
            // sinh(s)/sinh(r) -> s'(0)
            return ds * self.radius_derivative(0.0);
        }
        ds * self.radius(r).sinh() / r.sinh()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PushforwardReport {
    pub map: RadialStretch,
    pub disk_radius: f64,
    pub pairs: usize,
    /// Largest `|<If, Ig>_X - <f, g>_Y| / (||f|| ||g||)`.
    pub inner_product_defect: f64,
    pub min_jacobian: f64,
    pub points: usize,
    /// Largest relative error of the finite-difference `det dF` against the
    /// analytic Jacobian.
    pub jacobian_defect: f64,
    /// Largest relative error of `det g_{Phi o F} = Jac^2 det g_Phi o F`.
    pub determinant_defect: f64,
}

/// Gaussian bump `exp(-d(y, a)^2 / 2 sigma^2)`.
fn bump(a: &H2Point, sigma: f64, y: &H2Point) -> f64 {
    let d = dist(a, y);
    (-d * d / (2.0 * sigma * sigma)).exp()
}

/// Checks that `f -> (f o F) |Jac F|^{1/2}` preserves inner products of
/// random Gaussian bumps, and the determinant identity for `g_{Phi o F}` at
/// random points.
pub fn pushforward_isometry_check<G: Rng + ?Sized>(
    map: &RadialStretch,
    disk_radius: f64,
    cfg: &EmbeddingConfig,
    pairs: usize,
    points: usize,
    rng: &mut G,
) -> Result<PushforwardReport> {
    let grid = 1000;
    let min_jacobian = (0..=grid)
        .map(|i| map.jacobian(disk_radius * i as f64 / grid as f64))
        .fold(f64::INFINITY, f64::min);
    if !(min_jacobian >= 1e-8) {
        return Err(GeomError::DegenerateMap(min_jacobian));
    }
    let image_radius = map.radius(disk_radius);
    let radial_x = radial_rule(disk_radius, 0.25, 16);
    let radial_y = radial_rule(image_radius, 0.25, 16);
    let angles = angular_rule(256, 2.0 * PI);
    // (F(p), w_X Jac(p)) over X, and (y, w_Y) over Y.
    let mut pulled = Vec::new();
    for (r, wr) in &radial_x {
        for (phi, wp) in &angles {
            pulled.push((map.apply_polar(*r, *phi), wr * wp * r.sinh() * map.jacobian(*r)));
        }
    }
    let mut direct = Vec::new();
    for (r, wr) in &radial_y {
        for (phi, wp) in &angles {
            direct.push((H2Point::from_polar(*r, *phi), wr * wp * r.sinh()));
        }
    }
    let bumps: Vec<(H2Point, f64)> = (0..2 * pairs)
        .map(|_| {
            let c = H2Point::from_polar(rng.random_range(0.0..0.8 * image_radius), rng.random_range(0.0..2.0 * PI));
            (c, rng.random_range(0.3..0.8))
        })
        .collect();
    let inner = |nodes: &[(H2Point, f64)], f: &(H2Point, f64), g: &(H2Point, f64)| -> f64 {
        nodes.iter().map(|(y, w)| w * bump(&f.0, f.1, y) * bump(&g.0, g.1, y)).sum()
    };
    let inner_product_defect = (0..pairs)
        .into_par_iter()
        .map(|i| {
            let (f, g) = (&bumps[2 * i], &bumps[2 * i + 1]);
            let lhs = inner(&pulled, f, g);
            let rhs = inner(&direct, f, g);
            let scale = (inner(&direct, f, f) * inner(&direct, g, g)).sqrt();
            (lhs - rhs).abs() / scale
        })
        .reduce(|| 0.0, f64::max);

    let samples: Vec<H2Point> = (0..points)
        .map(|_| H2Point::from_polar(rng.random_range(0.1..0.9) * disk_radius, rng.random_range(0.0..2.0 * PI)))
        .collect();
    let space = H2Space::default();
    let defects = samples
        .par_iter()
        .map(|p| determinant_defects(&space, map, cfg, p))
        .collect::<Result<Vec<_>>>()?;
    let (jacobian_defect, determinant_defect) = defects
        .iter()
        .fold((0f64, 0f64), |(a, b), (j, d)| (a.max(*j), b.max(*d)));
    Ok(PushforwardReport {
        map: *map,
        disk_radius,
        pairs,
        inner_product_defect,
        min_jacobian,
        points,
        jacobian_defect,
        determinant_defect,
    })
}

/// Frame coordinates at `at` of a tangent vector there.
fn frame_coords(at: &H2Point, v: &crate::hyp::HTangent<3>) -> [f64; 2] {
    let back = HIsometry::translation_to(at).inverse().apply_tangent(v);
    [back.u[1], back.u[2]]
}

fn determinant_defects(space: &H2Space, map: &RadialStretch, cfg: &EmbeddingConfig, p: &H2Point) -> Result<(f64, f64)> {
    let delta = cfg.delta;
    let fp = map.apply(p);
    let jac = map.jacobian(p.radius());
    let moved: Vec<(H2Point, H2Point)> = (0..2)
        .map(|i| {
            let mut v = [0.0; 2];
            v[i] = delta;
            let plus = space.displace(p, &v);
            v[i] = -delta;
            (map.apply(&plus), map.apply(&space.displace(p, &v)))
        })
        .collect();
    // det dF in orthonormal frames at p and F(p).
    let cols: Vec<[f64; 2]> = moved
        .iter()
        .map(|(a, b)| {
            let (ua, ub) = (frame_coords(&fp, &log_map(&fp, a)), frame_coords(&fp, &log_map(&fp, b)));
            [(ua[0] - ub[0]) / (2.0 * delta), (ua[1] - ub[1]) / (2.0 * delta)]
        })
        .collect();
    let det_df = cols[0][0] * cols[1][1] - cols[0][1] * cols[1][0];
    // g_{Phi o F} at p from differences of Phi(F(p +- delta e_i)).
    let q = Arc::new(space.quadrature(&fp, cfg)?);
    let phi = |y: &H2Point| {
        let f = psi_on(space, cfg.c, y, &q);
        let n = f.norm();
        f.values.into_iter().map(|v| v / n).collect::<Vec<f64>>()
    };
    let diffs: Vec<Vec<f64>> = moved
        .iter()
        .map(|(a, b)| phi(a).into_iter().zip(phi(b)).map(|(s, t)| (s - t) / (2.0 * delta)).collect())
        .collect();
    let g = |i: usize, k: usize| -> f64 {
        q.weights
            .iter()
            .zip(diffs[i].iter().zip(&diffs[k]))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    };
    let det_x = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    let det_y = g_phi(space, cfg, &fp, None)?.det;
    let expected = jac * jac * det_y;
    Ok(((det_df - jac).abs() / jac, (det_x - expected).abs() / expected))
}
