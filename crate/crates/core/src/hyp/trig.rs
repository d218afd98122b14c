//! Hyperbolic trigonometry for triangles in the plane of curvature -1.

use serde::Serialize;

use super::point::H2Point;
use crate::error::{GeomError, Result};

const TRIANGLE_SLACK: f64 = 1e-12;

/// `sinh(a) / sinh(b)` without overflow for large arguments.
pub(crate) fn sinh_ratio(a: f64, b: f64) -> f64 {
    if a.max(b) < 20.0 {
        return a.sinh() / b.sinh();
    }
    // sinh x = e^x (1 - e^{-2x}) / 2
    (a - b).exp() * (-(-2.0 * a).exp_m1()) / (-(-2.0 * b).exp_m1())
}

fn log_sinh(x: f64) -> f64 {
    if x < 20.0 {
        x.sinh().ln()
    } else {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    }
}

fn check_sides(a: f64, b: f64, c: f64) -> Result<()> {
    let bad = !(a >= 0.0 && b >= 0.0 && c >= 0.0)
        || a > b + c + TRIANGLE_SLACK
        || b > a + c + TRIANGLE_SLACK
        || c > a + b + TRIANGLE_SLACK;
    if bad {
        Err(GeomError::NotATriangle(a, b, c))
    } else {
        Ok(())
    }
}

/// Angle opposite side `a` in the hyperbolic triangle with sides `a, b, c`.
///
/// Evaluated with the half-angle formula
/// `tan^2(alpha/2) = sinh(s-b) sinh(s-c) / (sinh s sinh(s-a))`, which is
/// well conditioned for thin and nearly degenerate triangles.
pub fn comparison_angle(a: f64, b: f64, c: f64) -> Result<f64> {
    check_sides(a, b, c)?;
    if b == 0.0 || c == 0.0 {
        return Err(GeomError::DegenerateAngle);
    }
    let sa = (0.5 * (b + c - a)).max(0.0);
    let sb = (0.5 * (a - b + c)).max(0.0);
    let sc = (0.5 * (a + b - c)).max(0.0);
    let s = 0.5 * (a + b + c);
    let num = sb.sinh() * sc.sinh();
    let den = s.sinh() * sa.sinh();
    if num == 0.0 && den == 0.0 {
        return Err(GeomError::DegenerateAngle);
    }
    if s > 300.0 {
        if num == 0.0 {
            return Ok(0.0);
        }
        if den == 0.0 {
            return Ok(std::f64::consts::PI);
        }
        let log_ratio = log_sinh(sb) + log_sinh(sc) - log_sinh(s) - log_sinh(sa);
        return Ok(2.0 * (0.5 * log_ratio).exp().atan());
    }
    Ok(2.0 * num.sqrt().atan2(den.sqrt()))
}

/// Third side from two sides and their included angle.
pub fn law_of_cosines_side(b: f64, c: f64, alpha: f64) -> f64 {
    // sinh^2(a/2) = sinh^2((b-c)/2) + sinh b sinh c sin^2(alpha/2)
    let h = (0.5 * (b - c)).sinh();
    let s = (0.5 * alpha).sin();
    let v = h * h + b.sinh() * c.sinh() * s * s;
    2.0 * v.max(0.0).sqrt().asinh()
}

/// Distance from `p` to the point at distance `t` from `q` along side `qr`
/// of the comparison triangle with sides `pq`, `pr`, `qr`.
///
/// This is the comparison quantity `|p~s~|` used for distance comparison.
pub fn comparison_cevian(pq: f64, pr: f64, qr: f64, t: f64) -> f64 {
    if qr == 0.0 || t == 0.0 {
        return pq;
    }
    let t = t.clamp(0.0, qr);
    let h = (0.5 * (pq - t)).sinh();
    let k = sinh_ratio(t, qr) * (0.5 * (pr - pq + qr)).sinh() * (0.5 * (pr + pq - qr)).sinh();
    2.0 * (h * h + k).max(0.0).sqrt().asinh()
}

/// A triangle in the hyperbolic plane described by its sides and angles.
/// `alpha` is opposite `a`, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonTriangle {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ComparisonTriangle {
    pub fn from_sides(a: f64, b: f64, c: f64) -> Result<Self> {
        Ok(Self {
            a,
            b,
            c,
            alpha: comparison_angle(a, b, c)?,
            beta: comparison_angle(b, c, a)?,
            gamma: comparison_angle(c, a, b)?,
        })
    }

    /// Places the triangle in the plane: the vertex opposite `a` at the
    /// origin, the vertex opposite `c` on the positive x-axis.
    pub fn realize(&self) -> [H2Point; 3] {
        let va = H2Point::origin();
        let vc = H2Point::from_polar(self.b, 0.0);
        let vb = H2Point::from_polar(self.c, self.alpha);
        [va, vb, vc]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::point::{angle, dist};
    use std::f64::consts::PI;

    #[test]
    fn equilateral_unit_matches_frozen_value() {
        let a = comparison_angle(1.0, 1.0, 1.0).unwrap();
        assert!((a - 0.918797872178027369).abs() < 1e-15);
    }

    #[test]
    fn equilateral_matches_cosine_form() {
        let ch = 1f64.cosh();
        let expected = (ch * (ch - 1.0) / 1f64.sinh().powi(2)).acos();
        assert!((comparison_angle(1.0, 1.0, 1.0).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn explicit_triangle_cross_check() {
        let t = ComparisonTriangle::from_sides(1.3, 0.8, 1.1).unwrap();
        let [va, vb, vc] = t.realize();
        assert!((dist(&vb, &vc) - 1.3).abs() < 1e-12);
        assert!((angle(&vb, &vc, &va).unwrap() - t.beta).abs() < 1e-12);
        assert!((angle(&vc, &va, &vb).unwrap() - t.gamma).abs() < 1e-12);
    }

    #[test]
    fn degenerate_is_pi() {
        assert_eq!(comparison_angle(2.0, 1.2, 0.8).unwrap(), PI);
    }

    #[test]
    fn vanishing_opposite_side_gives_zero() {
        assert_eq!(comparison_angle(0.0, 0.7, 0.7).unwrap(), 0.0);
        assert!(comparison_angle(1e-9, 0.7, 0.7).unwrap() < 1e-8);
    }

    #[test]
    fn rejects_non_triangles() {
        assert!(matches!(
            comparison_angle(3.0, 1.0, 1.0),
            Err(GeomError::NotATriangle(..))
        ));
    }

    #[test]
    fn huge_triangles_stay_finite() {
        let a = comparison_angle(500.0, 400.0, 300.0).unwrap();
        assert!(a.is_finite() && a > 0.0 && a <= PI);
    }

    #[test]
    fn law_of_cosines_roundtrip() {
        let t = ComparisonTriangle::from_sides(1.3, 0.8, 1.1).unwrap();
        assert!((law_of_cosines_side(t.b, t.c, t.alpha) - 1.3).abs() < 1e-12);
    }

    #[test]
    fn cevian_endpoints() {
        assert!((comparison_cevian(1.0, 1.4, 0.9, 0.0) - 1.0).abs() < 1e-14);
        assert!((comparison_cevian(1.0, 1.4, 0.9, 0.9) - 1.4).abs() < 1e-12);
    }

    #[test]
    fn cevian_matches_construction() {
        let (pq, pr, qr) = (1.0, 1.4, 0.9);
        let t = ComparisonTriangle::from_sides(qr, pr, pq).unwrap();
        let [p, q, r] = t.realize();
        let s = crate::hyp::point::geodesic_point(&q, &r, 0.3);
        assert!((comparison_cevian(pq, pr, qr, 0.27) - dist(&p, &s)).abs() < 1e-12);
    }

    #[test]
    fn sinh_ratio_large_arguments() {
        assert!((sinh_ratio(700.0, 701.0) - (-1f64).exp()).abs() < 1e-15);
        assert!((sinh_ratio(1.0, 2.0) - 1f64.sinh() / 2f64.sinh()).abs() < 1e-16);
    }
}
