//! Closed epsilon-neighborhoods of convex cores in the hyperbolic plane.
//!
//! The boundary of the neighborhood of a convex polygon `K` consists of
//! hypercycle arcs at distance `eps` from the edges and circle arcs of radius
//! `eps` about the vertices. It is C^{1,1} but not C^2. Points and segments
//! are handled as degenerate polygons.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::hyp::{angle, dist, geodesic_point, log_map, lorentz_cross, H2Point, HIsometry, MinkowskiVector};

type V3 = MinkowskiVector<3>;

/// The convex set whose neighborhood is taken.
#[derive(Clone, Debug, PartialEq)]
pub enum CoreShape {
    Point(H2Point),
    Segment(H2Point, H2Point),
    /// Vertices in counterclockwise order.
    Polygon(Vec<H2Point>),
}

/// A geodesic segment, parameterized by arclength from `start` but
/// evaluated from its midpoint so that far-out edges keep full precision.
#[derive(Clone, Debug)]
struct Edge {
    start: H2Point,
    end: H2Point,
    mid: V3,
    /// Unit tangent at `mid` pointing to `end`.
    dir: V3,
    /// Unit normal to the left of `dir`, constant along the edge.
    left: V3,
    length: f64,
}

impl Edge {
    fn new(a: &H2Point, b: &H2Point) -> Self {
        let mid = geodesic_point(a, b, 0.5);
        let t = log_map(&mid, b);
        let length = 2.0 * t.norm();
        let dir = t.u * (2.0 / length);
        Self {
            start: *a,
            end: *b,
            mid: *mid.vector(),
            dir,
            left: lorentz_cross(mid.vector(), &dir),
            length,
        }
    }

    fn point(&self, t: f64) -> V3 {
        let s = t - 0.5 * self.length;
        self.mid * s.cosh() + self.dir * s.sinh()
    }

    fn velocity(&self, t: f64) -> V3 {
        let s = t - 0.5 * self.length;
        self.mid * s.sinh() + self.dir * s.cosh()
    }

    /// Foot parameter on the full geodesic and the signed distance to it
    /// (positive on the left).
    fn project(&self, x: &H2Point) -> (f64, f64) {
        let x0 = -x.vector().mip(&self.mid);
        let x1 = x.vector().mip(&self.dir);
        let x2 = x.vector().mip(&self.left);
        (0.5 * self.length + 0.5 * ((x0 + x1) / (x0 - x1)).ln(), x2.asinh())
    }

    fn distance(&self, x: &H2Point) -> f64 {
        let (t, signed) = self.project(x);
        if (0.0..=self.length).contains(&t) {
            signed.abs()
        } else if t < 0.0 {
            dist(x, &self.start)
        } else {
            dist(x, &self.end)
        }
    }
}

#[derive(Clone, Debug)]
enum Piece {
    /// Circle arc about `vertex`, `w(phi) = cos(phi) n0 + sin(phi) t0`.
    Arc { vertex: H2Point, n0: V3, t0: V3, sweep: f64 },
    /// Hypercycle over edge `edge`, on the side of `normal`.
    Hyper { edge: usize, normal: V3 },
}

/// A boundary point with its unit tangent (counterclockwise) and outward
/// unit normal.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryFrame {
    pub s: f64,
    pub point: H2Point,
    pub tangent: V3,
    pub normal: V3,
}

/// Results of the sampled invariant checks.
#[derive(Clone, Debug, Serialize)]
pub struct BodyValidation {
    pub samples: usize,
    /// Smallest `-<b_j, nu_i>` over sampled neighbors `j` of `i`, where
    /// `nu_i` is the outward normal; positive means strict local support.
    pub min_support_margin: f64,
    /// Largest turning between consecutive sample chords.
    pub max_tangent_gap: f64,
    /// Largest turning per unit arclength.
    pub max_turning_rate: f64,
    /// Winding of the sampled curve about an interior point, in turns.
    pub winding: f64,
}

#[derive(Clone, Debug)]
pub struct ConvexBody {
    core: CoreShape,
    vertices: Vec<H2Point>,
    edges: Vec<Edge>,
    eps: f64,
    pieces: Vec<Piece>,
    offsets: Vec<f64>,
    length: f64,
    core_area: f64,
    validation: Option<BodyValidation>,
}

const SUPPORT_NEIGHBORS: usize = 8;
const MAX_TANGENT_GAP: f64 = 0.05;

/// Ball of radius `rho` about `center`.
pub fn make_ball_body(center: H2Point, rho: f64) -> Result<ConvexBody> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("ball radius must be positive, got {rho}")));
    }
    make_neighborhood_body(CoreShape::Point(center), rho)
}

/// Closed `eps`-neighborhood of a point, geodesic segment or convex polygon.
pub fn make_neighborhood_body(core: CoreShape, eps: f64) -> Result<ConvexBody> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("eps must be nonnegative, got {eps}")));
    }
    let vertices = match &core {
        CoreShape::Point(p) => vec![*p],
        CoreShape::Segment(a, b) => {
            if dist(a, b) < 1e-12 {
                return Err(GeomError::InvalidBody("degenerate segment".into()));
            }
            vec![*a, *b]
        }
        CoreShape::Polygon(v) => {
            if v.len() < 3 {
                return Err(GeomError::InvalidBody(format!("polygon needs 3 vertices, got {}", v.len())));
            }
            v.clone()
        }
    };
    if eps == 0.0 {
        return Err(match core {
            CoreShape::Point(_) => GeomError::InvalidParameter("ball radius must be positive".into()),
            _ => GeomError::BoundaryNotC1,
        });
    }
    let mut body = build(core, vertices, eps)?;
    let v = body.validate(body.default_samples());
    if v.min_support_margin <= 0.0 {
        return Err(GeomError::InvalidBody(format!("not strictly convex (margin {:e})", v.min_support_margin)));
    }
    if v.max_tangent_gap >= MAX_TANGENT_GAP {
        return Err(GeomError::BoundaryNotC1);
    }
    if (v.winding - 1.0).abs() > 1e-9 {
        return Err(GeomError::InvalidBody(format!("boundary winds {} times", v.winding)));
    }
    body.validation = Some(v);
    Ok(body)
}

fn build(core: CoreShape, vertices: Vec<H2Point>, eps: f64) -> Result<ConvexBody> {
    let k = vertices.len();
    let (se, ce) = (eps.sinh(), eps.cosh());
    let mut pieces = Vec::new();
    let mut lengths = Vec::new();
    let mut edges = Vec::new();
    let mut core_area = 0.0;

    if k == 1 {
        let frame = HIsometry::translation_to(&vertices[0]);
        let n0 = MinkowskiVector(frame.matrix() * V3::basis(1).0);
        let t0 = MinkowskiVector(frame.matrix() * V3::basis(2).0);
        pieces.push(Piece::Arc { vertex: vertices[0], n0, t0, sweep: 2.0 * PI });
        lengths.push(2.0 * PI * se);
    } else {
        edges = (0..k).map(|i| Edge::new(&vertices[i], &vertices[(i + 1) % k])).collect();
        // Outward normals are on the right of a counterclockwise traversal.
        let normals: Vec<V3> = edges.iter().map(|e| -e.left).collect();
        let mut total_turn = 0.0;
        for i in 0..k {
            let prev = (i + k - 1) % k;
            let n_prev = normals[prev];
            let n_next = normals[i];
            // Arrival direction along the previous edge.
            let away = log_map(&vertices[i], &edges[prev].start).u;
            let t_v = away * (-1.0 / away.spacelike_norm());
            let sweep = if k == 2 {
                PI
            } else {
                n_next.mip(&t_v).atan2(n_next.mip(&n_prev))
            };
            if sweep < -1e-12 {
                return Err(GeomError::InvalidBody(format!(
                    "polygon is not convex and counterclockwise at vertex {i}"
                )));
            }
            let sweep = sweep.max(0.0);
            total_turn += sweep;
            pieces.push(Piece::Arc { vertex: vertices[i], n0: n_prev, t0: t_v, sweep });
            lengths.push(se * sweep);
            pieces.push(Piece::Hyper { edge: i, normal: n_next });
            lengths.push(ce * edges[i].length);
        }
        if k >= 3 {
            core_area = total_turn - 2.0 * PI;
            if core_area <= 0.0 {
                return Err(GeomError::InvalidBody("polygon has nonpositive area".into()));
            }
        }
    }

    let mut offsets = Vec::with_capacity(lengths.len());
    let mut acc = 0.0;
    for l in &lengths {
        offsets.push(acc);
        acc += l;
    }
    Ok(ConvexBody {
        core,
        vertices,
        edges,
        eps,
        pieces,
        offsets,
        length: acc,
        core_area,
        validation: None,
    })
}

impl ConvexBody {
    pub fn core(&self) -> &CoreShape {
        &self.core
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Exact boundary length.
    pub fn boundary_length(&self) -> f64 {
        self.length
    }

    pub fn core_area(&self) -> f64 {
        self.core_area
    }

    pub fn validation(&self) -> Option<&BodyValidation> {
        self.validation.as_ref()
    }

    /// A point of the core, used as a reference center.
    pub fn center(&self) -> H2Point {
        let mut v = V3::zeros();
        for p in &self.vertices {
            v = v + *p.vector();
        }
        let n = v.mip(&v);
        H2Point::project(v * (1.0 / (-n).sqrt()))
    }

    /// Radius of a ball about `center()` containing the body.
    pub fn bounding_radius(&self) -> f64 {
        let c = self.center();
        self.vertices.iter().map(|v| dist(&c, v)).fold(0.0, f64::max) + self.eps
    }

    /// Distance from `x` to the core.
    pub fn core_distance(&self, x: &H2Point) -> f64 {
        match self.vertices.len() {
            1 => dist(x, &self.vertices[0]),
            2 => self.edges[0].distance(x),
            _ => {
                if self.edges.iter().all(|e| x.vector().mip(&e.left) >= 0.0) {
                    0.0
                } else {
                    self.edges.iter().map(|e| e.distance(x)).fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Signed distance to the boundary, negative inside. Exact outside the
    /// core; inside the core it is clamped at `-eps`.
    pub fn boundary_gap(&self, x: &H2Point) -> f64 {
        self.core_distance(x) - self.eps
    }

    pub fn contains(&self, x: &H2Point, tol: f64) -> bool {
        self.boundary_gap(x) <= tol
    }

    /// Frame at boundary parameter `s`, taken modulo 1.
    pub fn boundary_frame(&self, s: f64) -> BoundaryFrame {
        let s = s.rem_euclid(1.0);
        let ell = s * self.length;
        let i = self.offsets.partition_point(|&o| o <= ell).saturating_sub(1);
        let local = ell - self.offsets[i];
        let (se, ce) = (self.eps.sinh(), self.eps.cosh());
        let (point, tangent, normal) = match &self.pieces[i] {
            Piece::Arc { vertex, n0, t0, sweep } => {
                let phi = if se > 0.0 { (local / se).min(*sweep) } else { 0.0 };
                let (sp, cp) = phi.sin_cos();
                let w = *n0 * cp + *t0 * sp;
                let dw = *t0 * cp - *n0 * sp;
                let v = *vertex.vector();
                (v * ce + w * se, dw, v * se + w * ce)
            }
            Piece::Hyper { edge, normal } => {
                let e = &self.edges[*edge];
                let t = (local / ce).min(e.length);
                let g = e.point(t);
                (g * ce + *normal * se, e.velocity(t), g * se + *normal * ce)
            }
        };
        BoundaryFrame {
            s,
            point: H2Point::project(point),
            tangent,
            normal,
        }
    }

    pub fn boundary_point(&self, s: f64) -> H2Point {
        self.boundary_frame(s).point
    }

    /// Parameter of the boundary point nearest to `x`, for `x` outside the
    /// interior of the core.
    pub fn boundary_param(&self, x: &H2Point) -> f64 {
        let se = self.eps.sinh();
        let ce = self.eps.cosh();
        let arc_param = |piece: usize, vertex: &H2Point| -> f64 {
            let Piece::Arc { n0, t0, sweep, .. } = &self.pieces[piece] else {
                unreachable!()
            };
            let w = log_map(vertex, x).u;
            let mut phi = w.mip(t0).atan2(w.mip(n0));
            if *sweep >= 2.0 * PI - 1e-12 {
                phi = phi.rem_euclid(2.0 * PI);
            } else if phi < 0.0 && phi < -0.5 * (2.0 * PI - sweep) {
                phi += 2.0 * PI;
            }
            let phi = phi.clamp(0.0, *sweep);
            (self.offsets[piece] + se * phi) / self.length
        };
        let k = self.vertices.len();
        if k == 1 {
            return arc_param(0, &self.vertices[0]).rem_euclid(1.0);
        }
        let edge_param = |i: usize, t: f64| -> f64 {
            let e = &self.edges[i];
            let s = if t <= 0.0 {
                arc_param(2 * i, &self.vertices[i])
            } else if t >= e.length {
                let j = (i + 1) % k;
                arc_param(2 * j, &self.vertices[j])
            } else {
                (self.offsets[2 * i + 1] + ce * t) / self.length
            };
            s.rem_euclid(1.0)
        };
        if k == 2 {
            // The two edges share a geodesic; pick the one with x on its right.
            let (t, signed) = self.edges[0].project(x);
            if signed <= 0.0 {
                return edge_param(0, t);
            }
            let (t, _) = self.edges[1].project(x);
            return edge_param(1, t);
        }
        let mut best = (f64::INFINITY, 0usize, 0.0f64);
        for (i, e) in self.edges.iter().enumerate() {
            let (t, signed) = e.project(x);
            if signed <= 0.0 {
                let d = e.distance(x);
                if d < best.0 {
                    best = (d, i, t);
                }
            }
        }
        edge_param(best.1, best.2)
    }

    fn default_samples(&self) -> usize {
        // Keep the turning between samples well under the C^1 threshold.
        let max_curv = 1.0 / self.eps.tanh();
        let by_curvature = (self.length * max_curv / 0.01).ceil() as usize;
        by_curvature.clamp(4096, 200_000)
    }

    /// Dense sample of the boundary at `n` equally spaced parameters.
    pub fn sample_boundary(&self, n: usize) -> Vec<BoundaryFrame> {
        (0..n).map(|i| self.boundary_frame(i as f64 / n as f64)).collect()
    }

    /// Length of the closed polyline through `n` equally spaced boundary
    /// samples.
    pub fn polyline_length(&self, n: usize) -> f64 {
        let pts = self.sample_boundary(n);
        (0..n).map(|i| dist(&pts[i].point, &pts[(i + 1) % n].point)).sum()
    }

    /// Checks simplicity, strict local support and C^1 continuity on `n`
    /// samples.
    pub fn validate(&self, n: usize) -> BodyValidation {
        let frames = self.sample_boundary(n);
        let mut margin = f64::INFINITY;
        for (i, f) in frames.iter().enumerate() {
            for off in 1..=SUPPORT_NEIGHBORS {
                for j in [(i + off) % n, (i + n - off) % n] {
                    let m = -frames[j].point.vector().mip(&f.normal);
                    margin = margin.min(m);
                }
            }
        }
        let mut max_gap: f64 = 0.0;
        let mut max_rate: f64 = 0.0;
        for i in 0..n {
            let prev = &frames[(i + n - 1) % n].point;
            let here = &frames[i].point;
            let next = &frames[(i + 1) % n].point;
            let gap = PI - angle(here, prev, next).unwrap_or(0.0);
            max_gap = max_gap.max(gap);
            let h = 0.5 * (dist(prev, here) + dist(here, next));
            if h > 0.0 {
                max_rate = max_rate.max(gap / h);
            }
        }
        let c = self.center();
        let to_center = HIsometry::translation_to(&c).inverse();
        let polar = |p: &H2Point| {
            let q = to_center.apply(p);
            q.coords()[2].atan2(q.coords()[1])
        };
        let mut winding = 0.0;
        for i in 0..n {
            let a = polar(&frames[i].point);
            let b = polar(&frames[(i + 1) % n].point);
            let mut d = b - a;
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            winding += d;
        }
        BodyValidation {
            samples: n,
            min_support_margin: margin,
            max_tangent_gap: max_gap,
            max_turning_rate: max_rate,
            winding: winding / (2.0 * PI),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::{exp_map, tangent_angle, HTangent};

    fn segment(len: f64) -> CoreShape {
        CoreShape::Segment(H2Point::from_polar(0.5 * len, PI), H2Point::from_polar(0.5 * len, 0.0))
    }

    #[test]
    fn ball_circumference() {
        for rho in [0.3, 1.0, 2.0] {
            let b = make_ball_body(H2Point::from_spatial(&[0.2, 0.1]), rho).unwrap();
            assert!((b.boundary_length() - 2.0 * PI * rho.sinh()).abs() < 1e-12);
            let poly = b.polyline_length(50_000);
            assert!((poly - 2.0 * PI * rho.sinh()).abs() < 1e-6, "rho={rho} poly={poly}");
        }
    }

    #[test]
    fn point_neighborhood_is_ball() {
        let c = H2Point::from_spatial(&[0.4, -0.2]);
        let a = make_neighborhood_body(CoreShape::Point(c), 0.7).unwrap();
        for i in 0..50 {
            let p = a.boundary_point(i as f64 / 50.0);
            assert!((dist(&p, &c) - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn segment_neighborhoods_are_convex() {
        for eps in [0.1, 0.5, 1.0] {
            let b = make_neighborhood_body(segment(2.0), eps).unwrap();
            let v = b.validation().unwrap();
            assert!(v.min_support_margin > 0.0);
            assert!(v.max_tangent_gap < MAX_TANGENT_GAP);
            assert!(v.max_turning_rate <= 1.01 / eps.tanh(), "eps={eps} rate={}", v.max_turning_rate);
            let expected = 2.0 * PI * eps.sinh() + 4.0 * eps.cosh();
            assert!((b.boundary_length() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn long_band_is_valid() {
        let half = 10.0;
        let body = make_neighborhood_body(
            CoreShape::Segment(H2Point::from_polar(half, PI), H2Point::from_polar(half, 0.0)),
            0.5,
        )
        .unwrap();
        for i in 0..200 {
            let p = body.boundary_point(i as f64 / 200.0);
            assert!(body.boundary_gap(&p).abs() < 1e-7, "{i}: {}", body.boundary_gap(&p));
        }
        assert!((body.boundary_length() - (4.0 * half * 0.5f64.cosh() + 2.0 * PI * 0.5f64.sinh())).abs() < 1e-9);
    }

    #[test]
    fn boundary_is_at_distance_eps() {
        let b = make_neighborhood_body(segment(2.0), 0.5).unwrap();
        for i in 0..997 {
            let p = b.boundary_point(i as f64 / 997.0);
            assert!(b.boundary_gap(&p).abs() < 1e-12);
        }
    }

    #[test]
    fn frames_are_orthonormal_and_tangent_matches_motion() {
        let b = make_neighborhood_body(segment(2.0), 0.5).unwrap();
        for i in 0..101 {
            let s = i as f64 / 101.0;
            let f = b.boundary_frame(s);
            let p = f.point.vector();
            assert!(f.tangent.mip(p).abs() < 1e-12);
            assert!(f.normal.mip(p).abs() < 1e-12);
            assert!(f.tangent.mip(&f.normal).abs() < 1e-12);
            assert!((f.tangent.mip(&f.tangent) - 1.0).abs() < 1e-12);
            let ahead = b.boundary_point(s + 1e-7);
            let chord = log_map(&f.point, &ahead);
            let a = tangent_angle(&chord, &HTangent::new(f.point, f.tangent)).unwrap();
            assert!(a < 1e-5);
        }
    }

    #[test]
    fn normal_points_outward() {
        let b = make_neighborhood_body(segment(2.0), 0.5).unwrap();
        for i in 0..64 {
            let f = b.boundary_frame(i as f64 / 64.0);
            let out = exp_map(&HTangent::new(f.point, f.normal).scaled(1e-3));
            assert!(b.boundary_gap(&out) > 0.0);
        }
    }

    #[test]
    fn boundary_param_inverts_frame() {
        let bodies = [
            make_ball_body(H2Point::from_spatial(&[0.1, 0.3]), 0.8).unwrap(),
            make_neighborhood_body(segment(2.0), 0.5).unwrap(),
            make_neighborhood_body(
                CoreShape::Polygon(vec![
                    H2Point::from_polar(0.8, 0.0),
                    H2Point::from_polar(0.8, 2.0 * PI / 3.0),
                    H2Point::from_polar(0.8, 4.0 * PI / 3.0),
                ]),
                0.3,
            )
            .unwrap(),
        ];
        for b in &bodies {
            for i in 0..203 {
                let s = (i as f64 + 0.37) / 203.0;
                let p = b.boundary_point(s);
                let back = b.boundary_param(&p);
                let mut d = (back - s).abs();
                d = d.min(1.0 - d);
                assert!(d < 1e-9, "s={s} back={back}");
            }
        }
    }

    #[test]
    fn polygon_gauss_bonnet() {
        let tri = CoreShape::Polygon(vec![
            H2Point::from_polar(0.8, 0.0),
            H2Point::from_polar(0.8, 2.0 * PI / 3.0),
            H2Point::from_polar(0.8, 4.0 * PI / 3.0),
        ]);
        let b = make_neighborhood_body(tri, 0.3).unwrap();
        let side = dist(&H2Point::from_polar(0.8, 0.0), &H2Point::from_polar(0.8, 2.0 * PI / 3.0));
        let inner = crate::hyp::comparison_angle(side, side, side).unwrap();
        assert!((b.core_area() - (PI - 3.0 * inner)).abs() < 1e-12);
        let perim = 3.0 * side;
        let expected = (2.0 * PI + b.core_area()) * 0.3f64.sinh() + perim * 0.3f64.cosh();
        assert!((b.boundary_length() - expected).abs() < 1e-12);
    }

    #[test]
    fn clockwise_polygon_rejected() {
        let tri = CoreShape::Polygon(vec![
            H2Point::from_polar(0.8, 0.0),
            H2Point::from_polar(0.8, 4.0 * PI / 3.0),
            H2Point::from_polar(0.8, 2.0 * PI / 3.0),
        ]);
        assert!(matches!(make_neighborhood_body(tri, 0.3), Err(GeomError::InvalidBody(_))));
    }

    #[test]
    fn zero_eps_polygon_is_not_c1() {
        assert_eq!(make_neighborhood_body(segment(1.0), 0.0).unwrap_err(), GeomError::BoundaryNotC1);
    }

    #[test]
    fn core_distance_inside_polygon_is_zero() {
        let tri = CoreShape::Polygon(vec![
            H2Point::from_polar(0.8, 0.0),
            H2Point::from_polar(0.8, 2.0 * PI / 3.0),
            H2Point::from_polar(0.8, 4.0 * PI / 3.0),
        ]);
        let b = make_neighborhood_body(tri, 0.3).unwrap();
        assert_eq!(b.core_distance(&H2Point::origin()), 0.0);
        assert!(b.contains(&H2Point::origin(), 0.0));
        assert!(!b.contains(&H2Point::from_polar(2.0, 0.3), 0.0));
    }
}
