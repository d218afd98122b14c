use thiserror::Error;

/// Errors raised by the geometric constructions and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate angle")]
    DegenerateAngle,

    #[error("not a triangle: sides ({0}, {1}, {2})")]
    NotATriangle(f64, f64, f64),

    #[error("unsupported dimension {0} (only 2 and 3 are modeled)")]
    UnsupportedDimension(usize),

    #[error("boundary not C1 at vertices")]
    BoundaryNotC1,

    #[error("invalid convex body: {0}")]
    InvalidBody(String),

    #[error("point lies outside the body (distance to core {0})")]
    OutsideBody(f64),

    #[error("no witness exists for cone angle {0} <= 2*pi")]
    NoWitness(f64),

    #[error("inadmissible cone surface: {0}")]
    InadmissibleCone(String),

    #[error("point is not on the geodesic (excess {0})")]
    NotOnGeodesic(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("divergent: c = {c} must exceed {threshold}")]
    Divergent { c: f64, threshold: f64 },

    #[error("truncation too small: relative tail {0:e}")]
    TruncationTooSmall(f64),

    #[error("degenerate map: jacobian {0:e}")]
    DegenerateMap(f64),

    #[error("need at least 3 radii, got {0}")]
    TooFewRadii(usize),

    #[error("no hits at radius {0}")]
    NoHits(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
