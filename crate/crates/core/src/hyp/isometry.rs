use nalgebra::SMatrix;

use super::point::{HPoint, HTangent};
use super::vector::MinkowskiVector;
use crate::error::{GeomError, Result};

/// A linear map of Minkowski space preserving the form and the upper sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HIsometry<const D: usize> {
    m: SMatrix<f64, D, D>,
}

fn form<const D: usize>() -> SMatrix<f64, D, D> {
    let mut j = SMatrix::<f64, D, D>::identity();
    j[(0, 0)] = -1.0;
    j
}

fn outer<const D: usize>(a: &MinkowskiVector<D>, b: &MinkowskiVector<D>) -> SMatrix<f64, D, D> {
    a.0 * b.0.transpose()
}

impl<const D: usize> HIsometry<D> {
    pub fn identity() -> Self {
        Self {
            m: SMatrix::identity(),
        }
    }

    /// Validates `M^T J M = J` (within 1e-10) and `M_00 > 0`.
    pub fn from_matrix(m: SMatrix<f64, D, D>) -> Result<Self> {
        let j = form::<D>();
        let defect = (m.transpose() * j * m - j).abs().max();
        if !(defect <= 1e-10) {
            return Err(GeomError::InvalidParameter(format!(
                "matrix does not preserve the Minkowski form (defect {defect:e})"
            )));
        }
        if m[(0, 0)] <= 0.0 {
            return Err(GeomError::InvalidParameter("matrix swaps the sheets".into()));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &SMatrix<f64, D, D> {
        &self.m
    }

    pub fn apply(&self, p: &HPoint<D>) -> HPoint<D> {
        HPoint::project(MinkowskiVector(self.m * p.vector().0))
    }

    pub fn apply_tangent(&self, t: &HTangent<D>) -> HTangent<D> {
        HTangent::new(self.apply(&t.base), MinkowskiVector(self.m * t.u.0))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    /// `J M^T J`, exact for form-preserving matrices.
    pub fn inverse(&self) -> Self {
        let j = form::<D>();
        Self {
            m: j * self.m.transpose() * j,
        }
    }

    /// The hyperbolic translation along the geodesic from the origin to `p`,
    /// mapping the origin to `p`.
    pub fn translation_to(p: &HPoint<D>) -> Self {
        let v = p.vector();
        let p0 = v[0];
        let mut m = SMatrix::<f64, D, D>::identity();
        m[(0, 0)] = p0;
        for i in 1..D {
            m[(0, i)] = v[i];
            m[(i, 0)] = v[i];
            for k in 1..D {
                m[(i, k)] += v[i] * v[k] / (1.0 + p0);
            }
        }
        Self { m }
    }

    /// Rotation by `angle` about the origin in the spatial coordinate plane
    /// `(i, k)`, with `1 <= i, k < D`.
    pub fn rotation(i: usize, k: usize, angle: f64) -> Self {
        assert!(i >= 1 && k >= 1 && i < D && k < D && i != k);
        let mut m = SMatrix::<f64, D, D>::identity();
        let (s, c) = angle.sin_cos();
        m[(i, i)] = c;
        m[(k, k)] = c;
        m[(i, k)] = -s;
        m[(k, i)] = s;
        Self { m }
    }

    /// `2P - I`, where `P` is the Minkowski-orthogonal projection onto the
    /// plane spanned by `p` and the unit tangent direction `u`.
    ///
    /// It fixes the geodesic through `p` in direction `u` pointwise. In the
    /// plane it is the reflection across that geodesic; in 3-space it is the
    /// half-turn about it.
    pub fn reflect_across_geodesic(dir: &HTangent<D>) -> Result<Self> {
        let u = dir.unit().ok_or(GeomError::DegenerateAngle)?;
        let p = dir.base.vector();
        let j = form::<D>();
        let proj = (outer(&u.u, &u.u) - outer(p, p)) * j;
        Ok(Self {
            m: proj * 2.0 - SMatrix::identity(),
        })
    }

    /// Maximum entry of `M^T J M - J`.
    pub fn form_defect(&self) -> f64 {
        let j = form::<D>();
        (self.m.transpose() * j * self.m - j).abs().max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::point::{dist, exp_map, log_map, H2Point, H3Point};
    use crate::hyp::vector::lorentz_cross;

    fn sample_tangent() -> HTangent<3> {
        let p = H2Point::from_spatial(&[0.4, -0.3]);
        log_map(&p, &H2Point::from_spatial(&[-0.5, 1.1]))
    }

    #[test]
    fn translation_hits_target() {
        let p = H3Point::from_spatial(&[0.3, -1.4, 2.0]);
        let t = HIsometry::translation_to(&p);
        assert!(t.form_defect() < 1e-12);
        assert!(dist(&t.apply(&H3Point::origin()), &p) < 1e-12);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = H2Point::from_spatial(&[1.0, 2.0]);
        let t = HIsometry::translation_to(&p).compose(&HIsometry::rotation(1, 2, 0.7));
        let id = t.compose(&t.inverse());
        assert!((id.matrix() - SMatrix::<f64, 3, 3>::identity()).abs().max() < 1e-12);
    }

    #[test]
    fn reflection_is_involution_and_fixes_geodesic() {
        let g = sample_tangent();
        let r = HIsometry::reflect_across_geodesic(&g).unwrap();
        assert!(r.form_defect() < 1e-12);
        let rr = r.compose(&r);
        assert!((rr.matrix() - SMatrix::<f64, 3, 3>::identity()).abs().max() < 1e-10);
        for k in -5..=5 {
            let x = exp_map(&g.unit().unwrap().scaled(0.4 * k as f64));
            assert!(dist(&r.apply(&x), &x) < 1e-10);
        }
    }

    #[test]
    fn reflection_swaps_sides() {
        let g = sample_tangent();
        let r = HIsometry::reflect_across_geodesic(&g).unwrap();
        let normal = lorentz_cross(g.base.vector(), &g.u);
        let x = H2Point::from_spatial(&[2.0, 0.5]);
        let before = x.vector().mip(&normal);
        let after = r.apply(&x).vector().mip(&normal);
        assert!(before * after < 0.0);
        assert!((before + after).abs() < 1e-10 * before.abs().max(1.0));
    }

    #[test]
    fn rejects_non_isometry() {
        let mut m = SMatrix::<f64, 3, 3>::identity();
        m[(1, 1)] = 2.0;
        assert!(HIsometry::from_matrix(m).is_err());
        assert!(HIsometry::from_matrix(-SMatrix::<f64, 3, 3>::identity()).is_err());
    }

    #[test]
    fn half_turn_in_three_space() {
        let p = H3Point::from_spatial(&[0.1, 0.2, 0.3]);
        let g = log_map(&p, &H3Point::from_spatial(&[1.0, -0.4, 0.2]));
        let r = HIsometry::reflect_across_geodesic(&g).unwrap();
        assert!(r.form_defect() < 1e-12);
        assert!(r.matrix().determinant() > 0.0);
    }
}
