//! The contract every concrete metric space implements.

use std::fmt::Debug;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::hyp::{self, HPoint};

/// One draw from a proposal measure of known total mass that covers a ball.
///
/// `point` is `None` when the proposal landed outside the space (hit-or-miss
/// rejection); the caller still counts the draw.
#[derive(Clone, Debug)]
pub struct MeasureSample<P> {
    pub point: Option<P>,
    pub proposal_mass: f64,
}

/// Distance, geodesics and measure of a geodesic metric space.
pub trait GeodesicOracle: Sync {
    type Point: Clone + Send + Sync + Debug + Serialize;

    /// Hausdorff dimension.
    fn dimension(&self) -> usize;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> f64;

    /// Point at fraction `t` of a (chosen) geodesic from `a` to `b`.
    fn geodesic_sample(&self, a: &Self::Point, b: &Self::Point, t: f64) -> Self::Point;

    /// `m` points at fractions `i / (m - 1)`.
    fn geodesic_samples(&self, a: &Self::Point, b: &Self::Point, m: usize) -> Vec<Self::Point> {
        match m {
            0 => Vec::new(),
            1 => vec![a.clone()],
            _ => (0..m)
                .map(|i| self.geodesic_sample(a, b, i as f64 / (m - 1) as f64))
                .collect(),
        }
    }

    /// Angle at `at` between the chosen geodesics toward `b` and `c`, when the
    /// space can compute it directly. `None` means "not exposed"; callers fall
    /// back to the limit of comparison angles.
    fn angle_at(&self, _at: &Self::Point, _b: &Self::Point, _c: &Self::Point) -> Option<Result<f64>> {
        None
    }

    /// Draw from a proposal covering the ball `B(center, radius)`.
    fn measure_sample<G: Rng + ?Sized>(&self, center: &Self::Point, radius: f64, rng: &mut G) -> MeasureSample<Self::Point>;

    /// Exact measure of `B(center, radius)` when a closed form is known.
    fn ball_measure_exact(&self, _center: &Self::Point, _radius: f64) -> Option<f64> {
        None
    }
}

/// Random points from a bounded test region of a space.
pub trait PointSampler: GeodesicOracle {
    fn sample_point<G: Rng + ?Sized>(&self, rng: &mut G) -> Self::Point;
}

/// Hyperbolic space `H^{D-1}` as an oracle. Random test points are drawn
/// uniformly from the ball of radius `region` about the origin.
#[derive(Clone, Copy, Debug)]
pub struct HyperbolicSpace<const D: usize> {
    pub region: f64,
}

pub type H2Space = HyperbolicSpace<3>;
pub type H3Space = HyperbolicSpace<4>;

impl<const D: usize> HyperbolicSpace<D> {
    pub fn new(region: f64) -> Self {
        Self { region }
    }
}

impl<const D: usize> Default for HyperbolicSpace<D> {
    fn default() -> Self {
        Self { region: 2.0 }
    }
}

impl<const D: usize> GeodesicOracle for HyperbolicSpace<D> {
    type Point = HPoint<D>;

    fn dimension(&self) -> usize {
        D - 1
    }

    fn distance(&self, a: &HPoint<D>, b: &HPoint<D>) -> f64 {
        hyp::dist(a, b)
    }

    fn geodesic_sample(&self, a: &HPoint<D>, b: &HPoint<D>, t: f64) -> HPoint<D> {
        hyp::geodesic_point(a, b, t)
    }

    fn angle_at(&self, at: &HPoint<D>, b: &HPoint<D>, c: &HPoint<D>) -> Option<Result<f64>> {
        Some(hyp::angle(at, b, c))
    }

    fn measure_sample<G: Rng + ?Sized>(&self, center: &HPoint<D>, radius: f64, rng: &mut G) -> MeasureSample<HPoint<D>> {
        MeasureSample {
            point: Some(hyp::sample_ball(center, radius, rng)),
            proposal_mass: hyp::ball_volume(D - 1, radius).expect("dimension 2 or 3"),
        }
    }

    fn ball_measure_exact(&self, _center: &HPoint<D>, radius: f64) -> Option<f64> {
        hyp::ball_volume(D - 1, radius).ok()
    }
}

impl<const D: usize> PointSampler for HyperbolicSpace<D> {
    fn sample_point<G: Rng + ?Sized>(&self, rng: &mut G) -> HPoint<D> {
        hyp::sample_ball(&HPoint::origin(), self.region, rng)
    }
}
