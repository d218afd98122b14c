//! Hyperbolic cone metrics: the plane with one cone point, and Gauss-Bonnet
//! bookkeeping for closed cone surfaces.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hyp::{
    comparison_cevian, geodesic_point, law_of_cosines_side, log_map, sample_radius_2d, H2Point, MinkowskiVector,
};
use crate::oracle::{GeodesicOracle, MeasureSample, PointSampler};

/// Geodesic polar coordinates about the apex, `phi` taken modulo the cone
/// angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConePoint {
    pub r: f64,
    pub phi: f64,
}

impl ConePoint {
    pub const APEX: ConePoint = ConePoint { r: 0.0, phi: 0.0 };

    pub fn is_apex(&self) -> bool {
        self.r == 0.0
    }
}

/// The hyperbolic plane with a single cone point of angle `theta` at `r = 0`:
/// metric `dr^2 + sinh^2(r) dphi^2`, `phi` in `[0, theta)`.
#[derive(Clone, Copy, Debug)]
pub struct ConeChart {
    theta: f64,
    /// Radius of the disk random test points are drawn from.
    pub region: f64,
}

impl ConeChart {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(GeomError::InvalidParameter(format!("cone angle must be positive, got {theta}")));
        }
        Ok(Self { theta, region: 1.5 })
    }

    pub fn with_region(mut self, region: f64) -> Self {
        self.region = region;
        self
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn point(&self, r: f64, phi: f64) -> ConePoint {
        if r <= 0.0 {
            ConePoint::APEX
        } else {
            ConePoint {
                r,
                phi: phi.rem_euclid(self.theta),
            }
        }
    }

    /// Signed angular offset from `a` to `b`, in `(-theta/2, theta/2]`.
    fn offset(&self, a: &ConePoint, b: &ConePoint) -> f64 {
        let d = (b.phi - a.phi).rem_euclid(self.theta);
        if d > 0.5 * self.theta {
            d - self.theta
        } else {
            d
        }
    }

    /// Angular separation `min(|dphi|, theta - |dphi|)`.
    pub fn separation(&self, a: &ConePoint, b: &ConePoint) -> f64 {
        self.offset(a, b).abs()
    }

    pub fn distance(&self, a: &ConePoint, b: &ConePoint) -> f64 {
        cone_distance(self, a, b)
    }

    /// Direction at non-apex `at` toward `y`, as an angle from the outward
    /// radial direction.
    fn heading(&self, at: &ConePoint, y: &ConePoint) -> Result<f64> {
        if cone_distance(self, at, y) == 0.0 {
            return Err(GeomError::DegenerateAngle);
        }
        let delta = self.offset(at, y);
        if y.is_apex() || delta.abs() >= PI {
            return Ok(PI);
        }
        let x = H2Point::from_polar(at.r, 0.0);
        let u = log_map(&x, &H2Point::from_polar(y.r, delta)).u;
        let e_r = MinkowskiVector::new([at.r.sinh(), at.r.cosh(), 0.0]);
        let e_phi = MinkowskiVector::new([0.0, 0.0, 1.0]);
        Ok(u.mip(&e_phi).atan2(u.mip(&e_r)))
    }

    /// Angle at `at` between the chosen geodesics toward `b` and `c`.
    pub fn angle(&self, at: &ConePoint, b: &ConePoint, c: &ConePoint) -> Result<f64> {
        if at.is_apex() {
            if b.is_apex() || c.is_apex() {
                return Err(GeomError::DegenerateAngle);
            }
            return Ok(self.separation(b, c).min(PI));
        }
        let d = (self.heading(at, b)? - self.heading(at, c)?).abs();
        Ok(d.min(2.0 * PI - d))
    }

    pub fn geodesic_point(&self, a: &ConePoint, b: &ConePoint, t: f64) -> ConePoint {
        if t <= 0.0 {
            return *a;
        }
        if t >= 1.0 {
            return *b;
        }
        let delta = self.offset(a, b);
        if a.is_apex() || b.is_apex() || delta.abs() >= PI {
            let ell = t * (a.r + b.r);
            return if ell <= a.r {
                self.point(a.r - ell, a.phi)
            } else {
                self.point(ell - a.r, b.phi)
            };
        }
        let p = geodesic_point(&H2Point::from_polar(a.r, 0.0), &H2Point::from_polar(b.r, delta), t);
        self.point(p.radius(), a.phi + p.polar_angle())
    }
}

/// Distance in the cone chart: through a planar development when the angular
/// separation is below `pi`, otherwise through the apex.
pub fn cone_distance(chart: &ConeChart, a: &ConePoint, b: &ConePoint) -> f64 {
    let delta = chart.separation(a, b);
    if delta < PI {
        law_of_cosines_side(a.r, b.r, delta)
    } else {
        a.r + b.r
    }
}

impl GeodesicOracle for ConeChart {
    type Point = ConePoint;

    fn dimension(&self) -> usize {
        2
    }

    fn distance(&self, a: &ConePoint, b: &ConePoint) -> f64 {
        cone_distance(self, a, b)
    }

    fn geodesic_sample(&self, a: &ConePoint, b: &ConePoint, t: f64) -> ConePoint {
        self.geodesic_point(a, b, t)
    }

    fn angle_at(&self, at: &ConePoint, b: &ConePoint, c: &ConePoint) -> Option<Result<f64>> {
        Some(self.angle(at, b, c))
    }

    /// Uniform draw from the disk about the apex of radius `r_center + R`,
    /// which contains `B(center, R)`.
    fn measure_sample<G: Rng + ?Sized>(&self, center: &ConePoint, radius: f64, rng: &mut G) -> MeasureSample<ConePoint> {
        let big = center.r + radius;
        let r = sample_radius_2d(big, rng);
        let phi = rng.random::<f64>() * self.theta;
        MeasureSample {
            point: Some(self.point(r, phi)),
            proposal_mass: self.theta * 2.0 * (0.5 * big).sinh().powi(2),
        }
    }

    fn ball_measure_exact(&self, center: &ConePoint, radius: f64) -> Option<f64> {
        center
            .is_apex()
            .then(|| self.theta * 2.0 * (0.5 * radius).sinh().powi(2))
    }
}

impl PointSampler for ConeChart {
    fn sample_point<G: Rng + ?Sized>(&self, rng: &mut G) -> ConePoint {
        let r = sample_radius_2d(self.region, rng);
        let phi = rng.random::<f64>() * self.theta;
        self.point(r, phi)
    }
}

/// A closed cone surface of Euler characteristic `euler` with cone angles
/// `angles`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeSurfaceSpec {
    pub euler: i64,
    pub angles: Vec<f64>,
}

impl ConeSurfaceSpec {
    pub fn from_genus(genus: u32, angles: Vec<f64>) -> Result<Self> {
        Self::new(2 - 2 * genus as i64, angles)
    }

    /// Requires positive angles and positive hyperbolic area
    /// `-2 pi chi + sum(2 pi - theta_i) > 0`.
    pub fn new(euler: i64, angles: Vec<f64>) -> Result<Self> {
        if let Some(bad) = angles.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(GeomError::InadmissibleCone(format!("cone angle {bad} is not positive")));
        }
        let spec = Self { euler, angles };
        let area = spec.raw_area();
        if !(area > 0.0) {
            return Err(GeomError::InadmissibleCone(format!(
                "generalized Euler characteristic is nonnegative (area {area})"
            )));
        }
        Ok(spec)
    }

    fn raw_area(&self) -> f64 {
        -2.0 * PI * self.euler as f64 + self.angles.iter().map(|t| 2.0 * PI - t).sum::<f64>()
    }

    /// Area of the smooth hyperbolic surface with the same topology.
    pub fn smooth_area(&self) -> f64 {
        -2.0 * PI * self.euler as f64
    }
}

/// Gauss-Bonnet area of a hyperbolic cone surface.
pub fn cone_area(spec: &ConeSurfaceSpec) -> Result<f64> {
    ConeSurfaceSpec::new(spec.euler, spec.angles.clone()).map(|s| s.raw_area())
}

/// Three points witnessing that a cone point of angle `theta > 2 pi` breaks
/// distance comparison.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConeWitness {
    pub theta: f64,
    pub rho: f64,
    pub p: ConePoint,
    pub q: ConePoint,
    pub r: ConePoint,
    /// Midpoint of `qr`, which is the apex.
    pub s: ConePoint,
    pub ps: f64,
    pub comparison_median: f64,
    pub expected_slack: f64,
}

/// `q` and `r` at radius `rho` on opposite sides of the apex (so the
/// geodesic `qr` runs through it), `p` at radius `rho` bisecting the other
/// sector. For `theta >= 3 pi` all three gaps are at least `pi`.
pub fn cone_witness_triangle(theta: f64, rho: f64) -> Result<ConeWitness> {
    if !(theta > 2.0 * PI) {
        return Err(GeomError::NoWitness(theta));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(GeomError::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let chart = ConeChart::new(theta)?;
    let q = chart.point(rho, 0.0);
    let r = chart.point(rho, PI);
    let p = chart.point(rho, PI + 0.5 * (theta - PI));
    let pq = cone_distance(&chart, &p, &q);
    let pr = cone_distance(&chart, &p, &r);
    let qr = cone_distance(&chart, &q, &r);
    let median = comparison_cevian(pq, pr, qr, 0.5 * qr);
    Ok(ConeWitness {
        theta,
        rho,
        p,
        q,
        r,
        s: ConePoint::APEX,
        ps: rho,
        comparison_median: median,
        expected_slack: rho - median,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::dist;

    #[test]
    fn flat_cone_is_the_plane() {
        let c = ConeChart::new(2.0 * PI).unwrap();
        for (ra, pa, rb, pb) in [(0.3, 0.1, 1.2, 2.0), (1.0, 0.0, 1.0, PI), (0.5, 6.0, 2.0, 0.2)] {
            let d = cone_distance(&c, &c.point(ra, pa), &c.point(rb, pb));
            let e = dist(&H2Point::from_polar(ra, pa), &H2Point::from_polar(rb, pb));
            assert!((d - e).abs() < 1e-12);
        }
    }

    #[test]
    fn apex_distance_is_radius() {
        let c = ConeChart::new(1.5 * PI).unwrap();
        assert_eq!(cone_distance(&c, &ConePoint::APEX, &c.point(0.8, 1.0)), 0.8);
    }

    #[test]
    fn opposite_points_go_through_apex() {
        let c = ConeChart::new(3.0 * PI).unwrap();
        let a = c.point(0.4, 0.0);
        let b = c.point(0.7, PI);
        assert_eq!(cone_distance(&c, &a, &b), 1.1);
        assert_eq!(c.geodesic_point(&a, &b, 0.4 / 1.1), ConePoint::APEX);
    }

    #[test]
    fn witness_three_pi_frozen() {
        let w = cone_witness_triangle(3.0 * PI, 0.5).unwrap();
        assert!((w.comparison_median - 0.834025228981330650515907741637).abs() < 1e-12);
        assert!((w.expected_slack + 0.334025228981330650515907741637).abs() < 1e-12);
    }

    #[test]
    fn witness_two_and_a_half_pi_frozen() {
        let w = cone_witness_triangle(2.5 * PI, 0.5).unwrap();
        let c = ConeChart::new(2.5 * PI).unwrap();
        assert!((cone_distance(&c, &w.p, &w.q) - 0.929080592422705255).abs() < 1e-12);
        assert!((w.comparison_median - 0.753902551647047922).abs() < 1e-12);
        assert!((w.expected_slack + 0.253902551647047922).abs() < 1e-12);
    }

    #[test]
    fn witness_needs_excess_angle() {
        assert_eq!(cone_witness_triangle(2.0 * PI, 0.5).unwrap_err(), GeomError::NoWitness(2.0 * PI));
    }

    #[test]
    fn gauss_bonnet_areas() {
        let g2 = ConeSurfaceSpec::from_genus(2, vec![]).unwrap();
        assert!((cone_area(&g2).unwrap() - 4.0 * PI).abs() < 1e-12);
        let one = ConeSurfaceSpec::from_genus(2, vec![PI]).unwrap();
        assert!((cone_area(&one).unwrap() - 5.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn inadmissible_specs_rejected() {
        assert!(ConeSurfaceSpec::from_genus(1, vec![]).is_err());
        assert!(ConeSurfaceSpec::from_genus(2, vec![-1.0]).is_err());
        assert!(ConeSurfaceSpec::from_genus(2, vec![7.0 * PI]).is_err());
        assert!(ConeSurfaceSpec::new(0, vec![PI]).is_ok());
    }

    #[test]
    fn apex_angle_is_capped_at_pi() {
        let c = ConeChart::new(3.0 * PI).unwrap();
        let a = c.angle(&ConePoint::APEX, &c.point(1.0, 0.0), &c.point(1.0, 1.4 * PI)).unwrap();
        assert_eq!(a, PI);
        let b = c.angle(&ConePoint::APEX, &c.point(1.0, 0.0), &c.point(1.0, 0.5)).unwrap();
        assert!((b - 0.5).abs() < 1e-15);
    }

    #[test]
    fn flat_cone_angles_match_the_plane() {
        let c = ConeChart::new(2.0 * PI).unwrap();
        let (x, y, z) = (c.point(0.7, 0.3), c.point(1.1, 2.0), c.point(0.4, 4.0));
        let e = crate::hyp::angle(
            &H2Point::from_polar(0.7, 0.3),
            &H2Point::from_polar(1.1, 2.0),
            &H2Point::from_polar(0.4, 4.0),
        )
        .unwrap();
        assert!((c.angle(&x, &y, &z).unwrap() - e).abs() < 1e-12);
    }

    #[test]
    fn geodesic_samples_are_proportional() {
        let c = ConeChart::new(1.5 * PI).unwrap();
        let a = c.point(0.9, 0.2);
        let b = c.point(1.3, 4.5);
        let d = cone_distance(&c, &a, &b);
        for i in 1..10 {
            let t = i as f64 / 10.0;
            let m = c.geodesic_point(&a, &b, t);
            assert!((cone_distance(&c, &a, &m) - t * d).abs() < 1e-10);
            assert!((cone_distance(&c, &m, &b) - (1.0 - t) * d).abs() < 1e-10);
        }
    }
}
