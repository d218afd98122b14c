use serde::{Serialize, Serializer};

use super::vector::MinkowskiVector;
use crate::error::{GeomError, Result};

/// A point on the upper sheet of the hyperboloid in `R^{D-1,1}`, i.e. a point
/// of `H^{D-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint<const D: usize> {
    v: MinkowskiVector<D>,
}

/// Points of the hyperbolic plane.
pub type H2Point = HPoint<3>;
/// Points of hyperbolic 3-space.
pub type H3Point = HPoint<4>;

impl<const D: usize> HPoint<D> {
    pub fn origin() -> Self {
        Self {
            v: MinkowskiVector::basis(0),
        }
    }

    /// Re-projects an arbitrary vector onto the hyperboloid by keeping its
    /// spatial part and recomputing the time coordinate.
    pub fn project(v: MinkowskiVector<D>) -> Self {
        let mut v = v;
        v.0[0] = 1f64.hypot(v.spatial_norm());
        Self { v }
    }

    /// Builds a point from its `D - 1` spatial coordinates.
    pub fn from_spatial(spatial: &[f64]) -> Self {
        assert_eq!(spatial.len(), D - 1, "expected {} spatial coordinates", D - 1);
        let mut v = MinkowskiVector::zeros();
        for (i, x) in spatial.iter().enumerate() {
            v.0[i + 1] = *x;
        }
        Self::project(v)
    }

    pub fn vector(&self) -> &MinkowskiVector<D> {
        &self.v
    }

    pub fn coords(&self) -> &[f64] {
        self.v.as_slice()
    }

    pub fn spatial(&self) -> Vec<f64> {
        self.v.as_slice()[1..].to_vec()
    }

    /// Hyperbolic distance to the origin.
    pub fn radius(&self) -> f64 {
        self.v.spatial_norm().asinh()
    }
}

impl HPoint<3> {
    /// Geodesic polar coordinates about the origin.
    pub fn from_polar(r: f64, phi: f64) -> Self {
        let s = r.sinh();
        Self::project(MinkowskiVector::new([r.cosh(), s * phi.cos(), s * phi.sin()]))
    }

    /// Polar angle about the origin in `(-pi, pi]`.
    pub fn polar_angle(&self) -> f64 {
        self.v[2].atan2(self.v[1])
    }
}

impl<const D: usize> Serialize for HPoint<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.v.serialize(serializer)
    }
}

/// A tangent vector `u` at `base`, with `<base, u> = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HTangent<const D: usize> {
    pub base: HPoint<D>,
    pub u: MinkowskiVector<D>,
}

impl<const D: usize> HTangent<D> {
    /// Projects `u` onto the tangent space at `base`.
    pub fn new(base: HPoint<D>, u: MinkowskiVector<D>) -> Self {
        let p = base.v;
        let u = u + p * u.mip(&p);
        Self { base, u }
    }

    pub fn zero(base: HPoint<D>) -> Self {
        Self {
            base,
            u: MinkowskiVector::zeros(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.u.spacelike_norm()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            base: self.base,
            u: self.u * s,
        }
    }

    pub fn unit(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self.scaled(1.0 / n))
    }
}

/// `<q-p, q-p>`, which equals `4 sinh^2(d/2)` and is well conditioned for
/// nearby points.
fn chord_sq<const D: usize>(p: &HPoint<D>, q: &HPoint<D>) -> f64 {
    let diff = q.v - p.v;
    diff.mip(&diff).max(0.0)
}

/// Hyperbolic distance `arccosh(-<p,q>)`, evaluated through the half-chord
/// `2 asinh(|q - p| / 2)` when the points are close.
pub fn dist<const D: usize>(p: &HPoint<D>, q: &HPoint<D>) -> f64 {
    let ch = -p.v.mip(&q.v);
    if ch < 2.0 {
        2.0 * (0.5 * chord_sq(p, q).sqrt()).asinh()
    } else {
        ch.max(1.0).acosh()
    }
}

/// Initial velocity of the unit-time geodesic from `p` to `q`; its norm is
/// `dist(p, q)`. Coincident points give the zero vector.
pub fn log_map<const D: usize>(p: &HPoint<D>, q: &HPoint<D>) -> HTangent<D> {
    let d = dist(p, q);
    if d == 0.0 {
        return HTangent::zero(*p);
    }
    // q + <p,q> p, rewritten as (q - p) - (<q-p,q-p>/2) p to avoid cancellation.
    let w = (q.v - p.v) - p.v * (0.5 * chord_sq(p, q));
    let w = HTangent::new(*p, w);
    let n = w.norm();
    if n == 0.0 {
        return HTangent::zero(*p);
    }
    w.scaled(d / n)
}

pub fn exp_map<const D: usize>(t: &HTangent<D>) -> HPoint<D> {
    let n = t.norm();
    if n == 0.0 {
        return t.base;
    }
    let v = t.base.v * n.cosh() + t.u * (n.sinh() / n);
    HPoint::project(v)
}

/// Point at fraction `t` of the way from `p` to `q` along the geodesic.
pub fn geodesic_point<const D: usize>(p: &HPoint<D>, q: &HPoint<D>, t: f64) -> HPoint<D> {
    if t == 0.0 {
        return *p;
    }
    if t == 1.0 {
        return *q;
    }
    let d = dist(p, q);
    if d <= 1.0 {
        return exp_map(&log_map(p, q).scaled(t));
    }
    // (sinh((1-t)d) p + sinh(td) q) / sinh d with e^{d} scaled out; the
    // exp-log route loses precision far from the origin.
    let den = 1.0 - (-2.0 * d).exp();
    let a = (-t * d).exp() * (1.0 - (-2.0 * (1.0 - t) * d).exp()) / den;
    let b = (-(1.0 - t) * d).exp() * (1.0 - (-2.0 * t * d).exp()) / den;
    HPoint::project(p.v * a + q.v * b)
}

/// Angle between two tangent vectors at the same base point, in `[0, pi]`.
///
/// Uses `2 atan2(|a - b|, |a + b|)` on the normalized vectors, which stays
/// accurate near `0` and `pi`.
pub fn tangent_angle<const D: usize>(a: &HTangent<D>, b: &HTangent<D>) -> Result<f64> {
    let (Some(a), Some(b)) = (a.unit(), b.unit()) else {
        return Err(GeomError::DegenerateAngle);
    };
    let minus = (a.u - b.u).spacelike_norm();
    let plus = (a.u + b.u).spacelike_norm();
    Ok(2.0 * minus.atan2(plus))
}

/// Vertex angle at `at` of the geodesic triangle with the other two vertices.
pub fn angle<const D: usize>(at: &HPoint<D>, toward1: &HPoint<D>, toward2: &HPoint<D>) -> Result<f64> {
    let u = log_map(at, toward1);
    let v = log_map(at, toward2);
    if u.norm() == 0.0 || v.norm() == 0.0 {
        return Err(GeomError::DegenerateAngle);
    }
    tangent_angle(&u, &v)
}
