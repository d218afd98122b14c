//! Run configuration files.
//!
//! A run is described by one JSON file; command-line flags override `seed`,
//! `trials` and the output directory.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use alexandrov_core::cone::ConeChart;
use alexandrov_core::double::{make_ball_body, make_neighborhood_body, CoreShape, DoubledSpace};
use alexandrov_core::hyp::H2Point;
use alexandrov_core::oracle::{H2Space, H3Space};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// A point of the hyperbolic plane in geodesic polar coordinates about the
/// origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polar {
    pub r: f64,
    #[serde(default)]
    pub phi: f64,
}

impl Polar {
    pub fn point(&self) -> H2Point {
        H2Point::from_polar(self.r, self.phi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    /// Double of the ball of radius `rho`.
    Ball {
        rho: f64,
        #[serde(default)]
        center: Option<Polar>,
    },
    /// Double of the `eps`-neighborhood of a segment of the given length,
    /// centered at the origin along the x-axis.
    SegmentNbhd { length: f64, eps: f64 },
    /// Double of the `eps`-neighborhood of a convex polygon, vertices
    /// counterclockwise.
    PolygonNbhd { vertices: Vec<Polar>, eps: f64 },
    /// Plane with one cone point of angle `theta`; test triangles within
    /// `region` of the apex.
    Cone {
        theta: f64,
        #[serde(default)]
        region: Option<f64>,
    },
    H2 {
        #[serde(default)]
        region: Option<f64>,
    },
    H3 {
        #[serde(default)]
        region: Option<f64>,
    },
}

/// A concrete space built from a `SpaceSpec`.
pub enum Space {
    Double(DoubledSpace),
    Cone(ConeChart),
    H2(H2Space),
    H3(H3Space),
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Space, CliError> {
        Ok(match self {
            SpaceSpec::Ball { rho, center } => {
                let c = center.map_or_else(H2Point::origin, |p| p.point());
                Space::Double(DoubledSpace::new(make_ball_body(c, *rho)?))
            }
            SpaceSpec::SegmentNbhd { length, eps } => {
                if !(*length > 0.0) {
                    return Err(CliError::Config(format!("segment length must be positive, got {length}")));
                }
                let a = H2Point::from_polar(0.5 * length, PI);
                let b = H2Point::from_polar(0.5 * length, 0.0);
                Space::Double(DoubledSpace::new(make_neighborhood_body(CoreShape::Segment(a, b), *eps)?))
            }
            SpaceSpec::PolygonNbhd { vertices, eps } => {
                let v = vertices.iter().map(Polar::point).collect();
                Space::Double(DoubledSpace::new(make_neighborhood_body(CoreShape::Polygon(v), *eps)?))
            }
            SpaceSpec::Cone { theta, region } => {
                let c = ConeChart::new(*theta)?;
                Space::Cone(match region {
                    Some(r) => c.with_region(*r),
                    None => c,
                })
            }
            SpaceSpec::H2 { region } => Space::H2(region.map_or_else(H2Space::default, H2Space::new)),
            SpaceSpec::H3 { region } => Space::H3(region.map_or_else(H3Space::default, H3Space::new)),
        })
    }

    /// Dimension of the space.
    pub fn dimension(&self) -> usize {
        match self {
            SpaceSpec::H3 { .. } => 3,
            _ => 2,
        }
    }
}

/// Checker tolerances; absent fields take the library defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub comparison_absolute: Option<f64>,
    pub comparison_per_diameter: Option<f64>,
    pub condition_b: Option<f64>,
    pub condition_c: Option<f64>,
    pub reflection: Option<f64>,
    pub bcg_relative: Option<f64>,
    pub entropy: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Checker {
    /// Distance comparison on random triangles.
    Comparison,
    /// Vertex angles against comparison angles on random triangles.
    ConditionB,
    /// Adjacent angles at boundary crossings (doubles only).
    ConditionC,
    /// Reflection law of cross-sheet geodesics (doubles only).
    Reflection,
    /// Distance and angle verdicts agree on random triangles.
    Equivalence,
    /// Alexandrov's lemma on random quadrilaterals of the plane.
    Lemma,
    /// Witness triangle at the cone point (cones with angle above 2 pi).
    Witness,
}

/// Parameters of the embedding run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcgParams {
    pub c: Vec<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub lipschitz_pairs: usize,
    /// Truncation radius; defaults to `8 / (2c - h)`, widened on cones.
    #[serde(default)]
    pub truncation: Option<f64>,
    #[serde(default)]
    pub angular_nodes: Option<usize>,
    /// Integrate over the genus-two octagon (plane only).
    #[serde(default)]
    pub vol_phi: bool,
    /// Radial stretch parameters for the pushforward check (plane only).
    #[serde(default)]
    pub pushforward: Vec<f64>,
}

fn default_points() -> usize {
    10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyParams {
    pub radii: Vec<f64>,
    #[serde(default)]
    pub samples: usize,
    /// Base point; the origin (or the apex) when absent. For doubles the
    /// base is the boundary point at this parameter.
    #[serde(default)]
    pub base: Option<Polar>,
    #[serde(default)]
    pub boundary_param: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeParams {
    /// Radius of the witness triangle.
    #[serde(default = "default_rho")]
    pub rho: f64,
    /// Closed cone surfaces whose Gauss-Bonnet area is reported.
    #[serde(default)]
    pub surfaces: Vec<SurfaceSpec>,
}

fn default_rho() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceSpec {
    pub genus: u32,
    #[serde(default)]
    pub angles: Vec<f64>,
}

/// A point of a double: sheet 1 or 2 and polar coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheetPoint {
    pub sheet: u8,
    pub r: f64,
    #[serde(default)]
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicParams {
    pub from: SheetPoint,
    pub to: SheetPoint,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    17
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    /// File stem; defaults to the command name.
    pub name: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: SpaceSpec,
    pub seed: Option<u64>,
    #[serde(default)]
    pub trials: Option<usize>,
    /// Geodesic samples per triangle side.
    #[serde(default)]
    pub samples: Option<usize>,
    /// Checkers for `check`; all applicable ones when empty.
    #[serde(default)]
    pub checks: Vec<Checker>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub bcg: Option<BcgParams>,
    #[serde(default)]
    pub entropy: Option<EntropyParams>,
    #[serde(default)]
    pub cone: Option<ConeParams>,
    #[serde(default)]
    pub geodesic: Option<GeodesicParams>,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Flag values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        self.seed = o.seed.or(self.seed);
        self.trials = o.trials.or(self.trials);
        if o.out.is_some() {
            self.output.dir = o.out.clone();
        }
        self
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Config("missing seed".into()))
    }

    pub fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_config() {
        let c = RunConfig::from_json(r#"{"space": {"kind": "ball", "rho": 1.0}, "seed": 3}"#).unwrap();
        assert_eq!(c.space, SpaceSpec::Ball { rho: 1.0, center: None });
        assert_eq!(c.seed().unwrap(), 3);
        assert!(c.checks.is_empty());
    }

    #[test]
    fn missing_seed_is_an_error() {
        let c = RunConfig::from_json(r#"{"space": {"kind": "h2"}}"#).unwrap();
        assert!(matches!(c.seed(), Err(CliError::Config(m)) if m.contains("seed")));
        let c = c.apply(&Overrides { seed: Some(1), ..Default::default() });
        assert_eq!(c.seed().unwrap(), 1);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(RunConfig::from_json(r#"{"space": {"kind": "h2", "radius": 1}, "seed": 1}"#).is_err());
        assert!(RunConfig::from_json(r#"{"space": {"kind": "torus"}, "seed": 1}"#).is_err());
    }
}
