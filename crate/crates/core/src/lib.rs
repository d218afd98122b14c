//! Numerical verification toolkit for spaces with curvature bounded below:
//! hyperbolic model geometry, doubled convex bodies, cone surfaces, triangle
//! comparison checkers, volume entropy and the spherical-volume embedding.

pub mod batch;
pub mod bcg;
pub mod comparison;
pub mod cone;
pub mod double;
pub mod entropy;
pub mod error;
pub mod hyp;
pub mod oracle;

pub use error::{GeomError, Result};
