//! Minkowski space `R^{n,1}` with the form `<x,y> = -x0*y0 + sum xi*yi`.
//!
//! Index 0 is the time coordinate. Points of hyperbolic space live on the
//! upper sheet `<v,v> = -1, v0 > 0`; tangent vectors at `p` are the spacelike
//! vectors with `<p,u> = 0`.

use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::SVector;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkowskiVector<const D: usize>(pub SVector<f64, D>);

impl<const D: usize> MinkowskiVector<D> {
    pub fn new(coords: [f64; D]) -> Self {
        Self(SVector::from(coords))
    }

    pub fn zeros() -> Self {
        Self(SVector::zeros())
    }

    /// Unit vector along coordinate axis `i`.
    pub fn basis(i: usize) -> Self {
        let mut v = SVector::zeros();
        v[i] = 1.0;
        Self(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    /// Minkowski bilinear form.
    pub fn mip(&self, other: &Self) -> f64 {
        let mut acc = -self.0[0] * other.0[0];
        for i in 1..D {
            acc += self.0[i] * other.0[i];
        }
        acc
    }

    /// `sqrt(<v,v>)` for spacelike vectors, clamped at zero.
    pub fn spacelike_norm(&self) -> f64 {
        self.mip(self).max(0.0).sqrt()
    }

    /// Euclidean norm of the spatial part, computed without overflow for
    /// points far out on the hyperboloid.
    pub fn spatial_norm(&self) -> f64 {
        let scale = (1..D).map(|i| self.0[i].abs()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return scale;
        }
        let sum: f64 = (1..D).map(|i| (self.0[i] / scale).powi(2)).sum();
        scale * sum.sqrt()
    }

    /// The vector `Jv` with `J = diag(-1, 1, ..., 1)`.
    pub fn flip_time(&self) -> Self {
        let mut v = self.0;
        v[0] = -v[0];
        Self(v)
    }
}

impl<const D: usize> Index<usize> for MinkowskiVector<D> {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<const D: usize> Add for MinkowskiVector<D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl<const D: usize> Sub for MinkowskiVector<D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl<const D: usize> Mul<f64> for MinkowskiVector<D> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * rhs)
    }
}

impl<const D: usize> Neg for MinkowskiVector<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl<const D: usize> Serialize for MinkowskiVector<D> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.as_slice().serialize(serializer)
    }
}

/// Minkowski "cross product" in `R^{2,1}`: the vector `J(a x b)`, which is
/// Minkowski-orthogonal to both `a` and `b`.
pub fn lorentz_cross(a: &MinkowskiVector<3>, b: &MinkowskiVector<3>) -> MinkowskiVector<3> {
    MinkowskiVector(a.0.cross(&b.0)).flip_time()
}
