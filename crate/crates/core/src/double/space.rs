use std::f64::consts::PI;

use rand::Rng;
use serde::{Serialize, Serializer};

use super::body::ConvexBody;
use crate::error::{GeomError, Result};
use crate::hyp::{
    self, dist, exp_map, geodesic_point, log_map, sample_ball, tangent_angle, H2Point, HIsometry, HTangent,
};
use crate::oracle::{GeodesicOracle, MeasureSample, PointSampler};

/// Points within this distance of the boundary are boundary points.
pub const BOUNDARY_TOL: f64 = 1e-9;
const GRID: usize = 256;
const GOLDEN_TOL: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sheet {
    One,
    Two,
}

impl Sheet {
    pub fn other(self) -> Self {
        match self {
            Sheet::One => Sheet::Two,
            Sheet::Two => Sheet::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Sheet::One => 1,
            Sheet::Two => 2,
        }
    }
}

impl Serialize for Sheet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.index())
    }
}

/// A point of the double: a point of the body tagged by sheet. Boundary
/// points always carry `Sheet::One`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DoublePoint {
    pub sheet: Sheet,
    pub pt: H2Point,
    pub on_boundary: bool,
}

/// A shortest path between opposite sheets, through the boundary point `c`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReflectedPath {
    pub p: DoublePoint,
    pub q: DoublePoint,
    pub c: H2Point,
    /// Boundary parameter of `c`.
    pub s: f64,
    /// Angle between the inward normal at `c` and the direction to `p`.
    pub incidence: f64,
    /// Angle between the inward normal at `c` and the direction to `q`.
    pub reflection: f64,
    pub length: f64,
}

/// Path returned by `double_geodesic`.
#[derive(Clone, Debug, Serialize)]
pub struct DoubleGeodesic {
    pub points: Vec<DoublePoint>,
    pub length: f64,
    pub reflected: Option<ReflectedPath>,
}

#[derive(Clone, Copy, Debug)]
struct Contact {
    s: f64,
    c: H2Point,
    length: f64,
}

/// The metric double of a strictly convex body: two copies glued along the
/// boundary.
#[derive(Clone, Debug)]
pub struct DoubledSpace {
    body: ConvexBody,
    grid: Vec<H2Point>,
}

impl DoubledSpace {
    pub fn new(body: ConvexBody) -> Self {
        let grid = (0..GRID).map(|i| body.boundary_point(i as f64 / GRID as f64)).collect();
        Self { body, grid }
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    /// Tags `pt` with `sheet`, canonicalizing boundary points to sheet one.
    pub fn point(&self, sheet: Sheet, pt: H2Point) -> Result<DoublePoint> {
        let gap = self.body.boundary_gap(&pt);
        if gap > BOUNDARY_TOL {
            return Err(GeomError::OutsideBody(gap + self.body.eps()));
        }
        Ok(self.tag(sheet, pt, gap))
    }

    fn tag(&self, sheet: Sheet, pt: H2Point, gap: f64) -> DoublePoint {
        let on_boundary = gap.abs() <= BOUNDARY_TOL;
        DoublePoint {
            sheet: if on_boundary { Sheet::One } else { sheet },
            pt,
            on_boundary,
        }
    }

    fn retag(&self, sheet: Sheet, pt: H2Point) -> DoublePoint {
        let gap = self.body.boundary_gap(&pt);
        self.tag(sheet, pt, gap)
    }

    /// Boundary point at parameter `s`.
    pub fn boundary(&self, s: f64) -> DoublePoint {
        DoublePoint {
            sheet: Sheet::One,
            pt: self.body.boundary_point(s),
            on_boundary: true,
        }
    }

    /// The involution exchanging the sheets.
    pub fn swap(&self, a: &DoublePoint) -> DoublePoint {
        if a.on_boundary {
            *a
        } else {
            DoublePoint { sheet: a.sheet.other(), ..*a }
        }
    }

    fn crosses(a: &DoublePoint, b: &DoublePoint) -> bool {
        a.sheet != b.sheet && !a.on_boundary && !b.on_boundary
    }

    pub fn distance(&self, a: &DoublePoint, b: &DoublePoint) -> f64 {
        if Self::crosses(a, b) {
            self.contact(&a.pt, &b.pt).length
        } else {
            dist(&a.pt, &b.pt)
        }
    }

    fn path_length(&self, a: &H2Point, b: &H2Point, s: f64) -> f64 {
        let c = self.body.boundary_point(s);
        dist(a, &c) + dist(&c, b)
    }

    /// Global minimizer of `s -> d(a, g(s)) + d(g(s), b)`: coarse grid, then
    /// golden-section search in every bracket that can hold the minimum.
    fn contact(&self, a: &H2Point, b: &H2Point) -> Contact {
        let f: Vec<f64> = self.grid.iter().map(|c| dist(a, c) + dist(c, b)).collect();
        let fmin = f.iter().cloned().fold(f64::INFINITY, f64::min);
        // f is 2-Lipschitz in arclength, so a cell can undercut its grid
        // value by at most twice the spacing.
        let reach = 2.0 * self.body.boundary_length() / GRID as f64;
        let h = 1.0 / GRID as f64;
        let mut best = Contact {
            s: 0.0,
            c: self.grid[0],
            length: f64::INFINITY,
        };
        for i in 0..GRID {
            let prev = f[(i + GRID - 1) % GRID];
            let next = f[(i + 1) % GRID];
            if f[i] > prev || f[i] > next || f[i] - reach > fmin {
                continue;
            }
            let center = i as f64 * h;
            let (s, val) = golden(|s| self.path_length(a, b, s), center - h, center + h);
            if val < best.length {
                best = Contact {
                    s: s.rem_euclid(1.0),
                    c: self.body.boundary_point(s),
                    length: val,
                };
            }
        }
        best
    }

    /// Derivative of the path length in boundary arclength:
    /// `-<T, u_a> - <T, u_b>` with `u_*` unit directions from the contact.
    fn contact_slope(&self, a: &H2Point, b: &H2Point, s: f64) -> f64 {
        let f = self.body.boundary_frame(s);
        let t = HTangent::new(f.point, f.tangent);
        let mut g = 0.0;
        for x in [a, b] {
            if let Some(u) = log_map(&f.point, x).unit() {
                g -= u.u.mip(&t.u);
            }
        }
        g
    }

    /// Bisection on the slope inside a small bracket around the golden-section
    /// minimizer; sharpens the contact point to roundoff.
    fn polish(&self, a: &H2Point, b: &H2Point, c: Contact) -> Contact {
        let w = 1e-6;
        let (mut lo, mut hi) = (c.s - w, c.s + w);
        let (glo, ghi) = (self.contact_slope(a, b, lo), self.contact_slope(a, b, hi));
        if !(glo < 0.0 && ghi > 0.0) {
            return c;
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.contact_slope(a, b, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = 0.5 * (lo + hi);
        let length = self.path_length(a, b, s);
        if length <= c.length + 1e-14 {
            Contact {
                s: s.rem_euclid(1.0),
                c: self.body.boundary_point(s),
                length,
            }
        } else {
            c
        }
    }

    /// Shortest path between points on opposite sheets with its reflection
    /// data. `None` when the points are not on opposite sheets.
    pub fn reflected_path(&self, p: &DoublePoint, q: &DoublePoint) -> Option<ReflectedPath> {
        if !Self::crosses(p, q) {
            return None;
        }
        let c = self.polish(&p.pt, &q.pt, self.contact(&p.pt, &q.pt));
        let f = self.body.boundary_frame(c.s);
        let inward = HTangent::new(f.point, -f.normal);
        let measure = |x: &H2Point| tangent_angle(&inward, &log_map(&f.point, x)).unwrap_or(0.0);
        Some(ReflectedPath {
            p: *p,
            q: *q,
            c: c.c,
            s: c.s,
            incidence: measure(&p.pt),
            reflection: measure(&q.pt),
            length: c.length,
        })
    }

    /// Geodesic from `a` to `b` sampled at `m` arclength-equispaced points.
    pub fn double_geodesic(&self, a: &DoublePoint, b: &DoublePoint, m: usize) -> DoubleGeodesic {
        if a.pt == b.pt && (a.sheet == b.sheet || a.on_boundary) {
            return DoubleGeodesic {
                points: vec![*a],
                length: 0.0,
                reflected: None,
            };
        }
        let reflected = self.reflected_path(a, b);
        let length = reflected.map_or_else(|| dist(&a.pt, &b.pt), |r| r.length);
        let points = match m {
            0 => Vec::new(),
            1 => vec![*a],
            _ => (0..m)
                .map(|i| self.sample_on(a, b, i as f64 / (m - 1) as f64, reflected.as_ref()))
                .collect(),
        };
        DoubleGeodesic { points, length, reflected }
    }

    fn sample_on(&self, a: &DoublePoint, b: &DoublePoint, t: f64, path: Option<&ReflectedPath>) -> DoublePoint {
        if t <= 0.0 {
            return *a;
        }
        if t >= 1.0 {
            return *b;
        }
        match path {
            None => {
                let sheet = if a.on_boundary { b.sheet } else { a.sheet };
                self.retag(sheet, geodesic_point(&a.pt, &b.pt, t))
            }
            Some(r) => {
                let l1 = dist(&a.pt, &r.c);
                let l2 = dist(&r.c, &b.pt);
                let ell = t * (l1 + l2);
                if ell <= l1 {
                    let frac = if l1 > 0.0 { ell / l1 } else { 1.0 };
                    self.retag(a.sheet, geodesic_point(&a.pt, &r.c, frac))
                } else {
                    let frac = if l2 > 0.0 { (ell - l1) / l2 } else { 0.0 };
                    self.retag(b.sheet, geodesic_point(&r.c, &b.pt, frac))
                }
            }
        }
    }

    /// Reflection across the geodesic tangent to the boundary at `p`.
    pub fn tangent_reflection(&self, p: &H2Point) -> HIsometry<3> {
        let f = self.body.boundary_frame(self.body.boundary_param(p));
        HIsometry::reflect_across_geodesic(&HTangent::new(*p, f.tangent)).expect("unit tangent")
    }

    /// Angle at a boundary point `p` between `r` and `q`, measured after
    /// folding sheet two onto the outside of the tangent geodesic.
    pub fn boundary_angle(&self, p: &DoublePoint, r: &DoublePoint, q: &DoublePoint) -> Result<f64> {
        if !p.on_boundary {
            return Err(GeomError::Precondition("boundary_angle needs a boundary vertex".into()));
        }
        let u = self.direction(p, r)?;
        let v = self.direction(p, q)?;
        tangent_angle(&u, &v)
    }

    /// Initial direction at `at` of the chosen geodesic toward `y`.
    pub fn direction(&self, at: &DoublePoint, y: &DoublePoint) -> Result<HTangent<3>> {
        let target = if at.on_boundary {
            if y.sheet == Sheet::Two && !y.on_boundary {
                self.tangent_reflection(&at.pt).apply(&y.pt)
            } else {
                y.pt
            }
        } else if Self::crosses(at, y) {
            self.polish(&at.pt, &y.pt, self.contact(&at.pt, &y.pt)).c
        } else {
            y.pt
        };
        let t = log_map(&at.pt, &target);
        if t.norm() == 0.0 {
            return Err(GeomError::DegenerateAngle);
        }
        Ok(t)
    }

    /// Unit inward normal at a boundary point.
    pub fn inward_normal(&self, p: &H2Point) -> HTangent<3> {
        let f = self.body.boundary_frame(self.body.boundary_param(p));
        HTangent::new(*p, -f.normal)
    }

    /// Point at distance `d` from boundary point `s` along the inward normal.
    pub fn inward_point(&self, s: f64, d: f64, sheet: Sheet) -> DoublePoint {
        let f = self.body.boundary_frame(s);
        let pt = exp_map(&HTangent::new(f.point, -f.normal).scaled(d));
        self.retag(sheet, pt)
    }
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > GOLDEN_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

impl GeodesicOracle for DoubledSpace {
    type Point = DoublePoint;

    fn dimension(&self) -> usize {
        2
    }

    fn distance(&self, a: &DoublePoint, b: &DoublePoint) -> f64 {
        DoubledSpace::distance(self, a, b)
    }

    fn geodesic_sample(&self, a: &DoublePoint, b: &DoublePoint, t: f64) -> DoublePoint {
        let path = self.reflected_path(a, b);
        self.sample_on(a, b, t, path.as_ref())
    }

    fn geodesic_samples(&self, a: &DoublePoint, b: &DoublePoint, m: usize) -> Vec<DoublePoint> {
        self.double_geodesic(a, b, m).points
    }

    fn angle_at(&self, at: &DoublePoint, b: &DoublePoint, c: &DoublePoint) -> Option<Result<f64>> {
        Some(self.direction(at, b).and_then(|u| tangent_angle(&u, &self.direction(at, c)?)))
    }

    /// Hit-or-miss against the hyperbolic ball on a uniformly chosen sheet;
    /// the double distance dominates the planar one, so this covers the ball.
    fn measure_sample<G: Rng + ?Sized>(&self, center: &DoublePoint, radius: f64, rng: &mut G) -> MeasureSample<DoublePoint> {
        let sheet = if rng.random::<bool>() { Sheet::One } else { Sheet::Two };
        let y = sample_ball(&center.pt, radius, rng);
        let gap = self.body.boundary_gap(&y);
        MeasureSample {
            point: (gap <= BOUNDARY_TOL).then(|| self.tag(sheet, y, gap)),
            proposal_mass: 2.0 * hyp::ball_volume(2, radius).expect("n = 2"),
        }
    }
}

impl PointSampler for DoubledSpace {
    /// Uniform over the body, uniform sheet.
    fn sample_point<G: Rng + ?Sized>(&self, rng: &mut G) -> DoublePoint {
        let c = self.body.center();
        let r = self.body.bounding_radius();
        let sheet = if rng.random::<bool>() { Sheet::One } else { Sheet::Two };
        loop {
            let y = sample_ball(&c, r, rng);
            let gap = self.body.boundary_gap(&y);
            if gap <= 0.0 {
                return self.tag(sheet, y, gap);
            }
        }
    }
}

/// Angle in `[0, pi]` of the unit direction `cos(psi) n + sin(psi) t` with a
/// tangent vector; helper for the reflection inequality.
pub fn direction_from_normal(n: &HTangent<3>, t: &HTangent<3>, psi: f64) -> HTangent<3> {
    let (s, c) = psi.sin_cos();
    HTangent::new(n.base, n.u * c + t.u * s)
}

/// Bounds `∠(N,cp) + ∠(N,cq) <= ∠(v,cp) + ∠(v,cq) <= pi` over `count`
/// directions `v` in the inward half-plane. Returns the worst violation of
/// each inequality (positive means violated) and the largest deviation from
/// `pi` of the middle term at the two tangential directions.
pub fn reflection_inequality(space: &DoubledSpace, path: &ReflectedPath, count: usize) -> (f64, f64, f64) {
    let f = space.body().boundary_frame(path.s);
    let n = HTangent::new(f.point, -f.normal);
    let t = HTangent::new(f.point, f.tangent);
    let to_p = log_map(&f.point, &path.p.pt);
    let to_q = log_map(&f.point, &path.q.pt);
    let ang = |v: &HTangent<3>, w: &HTangent<3>| tangent_angle(v, w).unwrap_or(0.0);
    let base = ang(&n, &to_p) + ang(&n, &to_q);
    let (mut left, mut right, mut ends) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0f64);
    for j in 0..count {
        let psi = -0.5 * PI + PI * j as f64 / (count - 1) as f64;
        let v = direction_from_normal(&n, &t, psi);
        let mid = ang(&v, &to_p) + ang(&v, &to_q);
        left = left.max(base - mid);
        right = right.max(mid - PI);
        if j == 0 || j == count - 1 {
            ends = ends.max((mid - PI).abs());
        }
    }
    (left, right, ends)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double::body::{make_ball_body, make_neighborhood_body, CoreShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ball() -> DoubledSpace {
        DoubledSpace::new(make_ball_body(H2Point::origin(), 1.0).unwrap())
    }

    #[test]
    fn centers_on_opposite_sheets() {
        let x = ball();
        let a = x.point(Sheet::One, H2Point::origin()).unwrap();
        let b = x.point(Sheet::Two, H2Point::origin()).unwrap();
        assert!((x.distance(&a, &b) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn boundary_points_are_canonical() {
        let x = ball();
        let p = x.body().boundary_point(0.3);
        let a = x.point(Sheet::One, p).unwrap();
        let b = x.point(Sheet::Two, p).unwrap();
        assert_eq!(a, b);
        assert_eq!(x.distance(&a, &b), 0.0);
    }

    #[test]
    fn outside_points_rejected() {
        let x = ball();
        assert!(matches!(
            x.point(Sheet::One, H2Point::from_polar(1.1, 0.0)),
            Err(GeomError::OutsideBody(_))
        ));
    }

    #[test]
    fn mirror_pair_reflects_at_symmetry_point() {
        let x = ball();
        let p = x.point(Sheet::One, H2Point::from_polar(0.5, 0.3)).unwrap();
        let q = x.point(Sheet::Two, H2Point::from_polar(0.5, -0.3)).unwrap();
        let r = x.reflected_path(&p, &q).unwrap();
        let c0 = H2Point::from_polar(1.0, 0.0);
        assert!(dist(&r.c, &c0) < 1e-9);
        assert!((r.incidence - r.reflection).abs() < 1e-9);
    }

    #[test]
    fn golden_matches_brute_force() {
        let body = make_neighborhood_body(
            CoreShape::Segment(H2Point::from_polar(1.0, PI), H2Point::from_polar(1.0, 0.0)),
            0.5,
        )
        .unwrap();
        let x = DoubledSpace::new(body);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = x.point(Sheet::One, x.sample_point(&mut rng).pt).unwrap();
            let b = x.point(Sheet::Two, x.sample_point(&mut rng).pt).unwrap();
            // Dense grid, then a second dense grid over the best cell.
            let n = 10_000;
            let coarse = (0..n)
                .map(|i| (i, x.path_length(&a.pt, &b.pt, i as f64 / n as f64)))
                .fold((0, f64::INFINITY), |m, v| if v.1 < m.1 { v } else { m });
            let center = coarse.0 as f64 / n as f64;
            let brute = (0..=n)
                .map(|j| x.path_length(&a.pt, &b.pt, center + (2.0 * j as f64 / n as f64 - 1.0) / n as f64))
                .fold(coarse.1, f64::min);
            let d = x.distance(&a, &b);
            assert!(d <= brute + 1e-12 && brute - d < 1e-7, "d={d} brute={brute}");
        }
    }

    #[test]
    fn same_sheet_is_planar() {
        let x = ball();
        let a = x.point(Sheet::Two, H2Point::from_polar(0.5, 0.3)).unwrap();
        let b = x.point(Sheet::Two, H2Point::from_polar(0.7, 2.0)).unwrap();
        assert_eq!(x.distance(&a, &b), dist(&a.pt, &b.pt));
        let path = x.double_geodesic(&a, &b, 9);
        for (i, p) in path.points.iter().enumerate() {
            let expected = geodesic_point(&a.pt, &b.pt, i as f64 / 8.0);
            assert!(dist(&p.pt, &expected) < 1e-10);
            assert_eq!(p.sheet, Sheet::Two);
        }
    }

    #[test]
    fn cross_path_is_arclength_parameterized() {
        let x = ball();
        let a = x.point(Sheet::One, H2Point::from_polar(0.4, 0.1)).unwrap();
        let b = x.point(Sheet::Two, H2Point::from_polar(0.6, 1.9)).unwrap();
        let g = x.double_geodesic(&a, &b, 11);
        let step = g.length / 10.0;
        for w in g.points.windows(2) {
            assert!((x.distance(&w[0], &w[1]) - step).abs() < 1e-9);
        }
        let crossings = g
            .points
            .windows(2)
            .filter(|w| w[0].sheet != w[1].sheet && !w[0].on_boundary && !w[1].on_boundary)
            .count();
        assert!(crossings <= 1);
    }

    #[test]
    fn single_point_path() {
        let x = ball();
        let a = x.point(Sheet::One, H2Point::from_polar(0.4, 0.1)).unwrap();
        assert_eq!(x.double_geodesic(&a, &a, 5).points.len(), 1);
    }

    #[test]
    fn boundary_angle_on_normal_is_pi() {
        let x = ball();
        let p = x.boundary(0.2);
        let r = x.inward_point(0.2, 0.3, Sheet::One);
        let q = x.inward_point(0.2, 0.6, Sheet::Two);
        assert!((x.boundary_angle(&p, &r, &q).unwrap() - PI).abs() < 1e-9);
    }

    #[test]
    fn boundary_angle_degenerate() {
        let x = ball();
        let p = x.boundary(0.2);
        let r = x.inward_point(0.2, 0.3, Sheet::One);
        assert_eq!(x.boundary_angle(&p, &r, &p), Err(GeomError::DegenerateAngle));
    }

    #[test]
    fn swap_is_an_isometry() {
        let x = ball();
        let a = x.point(Sheet::One, H2Point::from_polar(0.4, 0.1)).unwrap();
        let b = x.point(Sheet::Two, H2Point::from_polar(0.6, 1.9)).unwrap();
        assert_eq!(x.distance(&a, &b), x.distance(&x.swap(&a), &x.swap(&b)));
    }
}
