//! The metric double of a strictly convex body in the hyperbolic plane.

mod body;
mod space;

pub use body::{make_ball_body, make_neighborhood_body, BodyValidation, BoundaryFrame, ConvexBody, CoreShape};
pub use space::{
    direction_from_normal, reflection_inequality, DoubleGeodesic, DoublePoint, DoubledSpace, ReflectedPath, Sheet,
    BOUNDARY_TOL,
};
