use std::f64::consts::PI;

use rand::Rng;

use super::isometry::HIsometry;
use super::point::HPoint;
use super::vector::MinkowskiVector;
use crate::error::{GeomError, Result};

/// `sinh(x) - x`, with a series for small `x` where direct evaluation cancels.
fn sinh_minus_id(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        // x^3/3! + x^5/5! + ... + x^13/13!
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        for k in 2..7 {
            term *= x2 / ((2 * k) as f64 * (2 * k + 1) as f64);
            sum += term;
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// Volume of a ball of radius `r` in `H^n`, `n` in {2, 3}.
pub fn ball_volume(n: usize, r: f64) -> Result<f64> {
    match n {
        2 => Ok(4.0 * PI * (0.5 * r).sinh().powi(2)),
        3 => Ok(PI * sinh_minus_id(2.0 * r)),
        _ => Err(GeomError::UnsupportedDimension(n)),
    }
}

/// Radius distributed with density proportional to `sinh r` on `[0, R]`.
pub fn sample_radius_2d<G: Rng + ?Sized>(radius: f64, rng: &mut G) -> f64 {
    let u: f64 = rng.random();
    2.0 * (u.sqrt() * (0.5 * radius).sinh()).asinh()
}

/// Radius distributed with density proportional to `sinh^2 r` on `[0, R]`.
pub fn sample_radius_3d<G: Rng + ?Sized>(radius: f64, rng: &mut G) -> f64 {
    let u: f64 = rng.random();
    invert_cdf_3d(u, radius)
}

fn invert_cdf_3d(u: f64, radius: f64) -> f64 {
    let target = u * sinh_minus_id(2.0 * radius);
    let (mut lo, mut hi) = (0.0, radius);
    // Small-r start from the cubic term: (2r)^3/6 ~ target.
    let mut r = (6.0 * target).cbrt().mul_add(0.5, 0.0).min(radius);
    for _ in 0..100 {
        let g = sinh_minus_id(2.0 * r) - target;
        if g > 0.0 {
            hi = r;
        } else {
            lo = r;
        }
        let dg = 4.0 * r.sinh().powi(2);
        let mut next = if dg > 0.0 { r - g / dg } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - r).abs() <= 1e-15 * radius.max(1.0) {
            return next;
        }
        r = next;
    }
    r
}

/// A point drawn uniformly, with respect to hyperbolic measure, from the
/// closed ball of radius `radius` about `center`. Supported for `H^2` and
/// `H^3`.
pub fn sample_ball<const D: usize, G: Rng + ?Sized>(
    center: &HPoint<D>,
    radius: f64,
    rng: &mut G,
) -> HPoint<D> {
    let mut v = MinkowskiVector::<D>::zeros();
    match D {
        3 => {
            let r = sample_radius_2d(radius, rng);
            let phi = rng.random::<f64>() * 2.0 * PI;
            v.0[0] = r.cosh();
            v.0[1] = r.sinh() * phi.cos();
            v.0[2] = r.sinh() * phi.sin();
        }
        4 => {
            let r = sample_radius_3d(radius, rng);
            let z = 2.0 * rng.random::<f64>() - 1.0;
            let phi = rng.random::<f64>() * 2.0 * PI;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let s = r.sinh();
            v.0[0] = r.cosh();
            v.0[1] = s * rho * phi.cos();
            v.0[2] = s * rho * phi.sin();
            v.0[3] = s * z;
        }
        _ => panic!("sample_ball supports H^2 and H^3 only"),
    }
    HIsometry::translation_to(center).apply(&HPoint::project(v))
}
