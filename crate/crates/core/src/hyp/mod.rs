//! Hyperbolic geometry in the hyperboloid model.

mod isometry;
mod measure;
mod point;
mod trig;
mod vector;

pub use isometry::HIsometry;
pub use measure::{ball_volume, sample_ball, sample_radius_2d, sample_radius_3d};
pub use point::{angle, dist, exp_map, geodesic_point, log_map, tangent_angle, H2Point, H3Point, HPoint, HTangent};
pub use trig::{comparison_angle, comparison_cevian, law_of_cosines_side, ComparisonTriangle};
pub use vector::{lorentz_cross, MinkowskiVector};
