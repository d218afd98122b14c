use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use crate::error::{GeomError, Result};

/// Parameters of the `Psi_c` embedding and its quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmbeddingConfig {
    pub c: f64,
    /// Truncation radius; `None` means `8 / (2c - h)`.
    pub r_trunc: Option<f64>,
    /// Gauss-Legendre nodes per radial panel.
    pub radial_order: usize,
    /// Radial panel width near the center; panels widen linearly with radius.
    pub panel_width: f64,
    /// Angular nodes per full turn.
    pub angular_nodes: usize,
    /// Angular nodes per unit of circle length at radius `r`; raises the
    /// count on large circles, capped by `max_angular_nodes`. Zero disables.
    pub arc_density: f64,
    pub max_angular_nodes: usize,
    /// Finite-difference step.
    pub delta: f64,
}

impl EmbeddingConfig {
    pub fn new(c: f64) -> Self {
        Self {
            c,
            r_trunc: None,
            radial_order: 8,
            panel_width: 0.5,
            angular_nodes: 64,
            arc_density: 0.0,
            max_angular_nodes: 512,
            delta: 1e-4,
        }
    }

    pub fn with_truncation(mut self, r: f64) -> Self {
        self.r_trunc = Some(r);
        self
    }

    /// Checks `c > h / 2` and the numeric parameters.
    pub fn validate(&self, entropy: f64) -> Result<()> {
        if !(self.c > entropy / 2.0) {
            return Err(GeomError::Divergent {
                c: self.c,
                threshold: entropy / 2.0,
            });
        }
        if self.radial_order == 0 || self.angular_nodes < 3 || !(self.panel_width > 0.0) || !(self.delta > 0.0) {
            return Err(GeomError::InvalidParameter("quadrature parameters must be positive".into()));
        }
        if let Some(r) = self.r_trunc {
            if !(r > 0.0) {
                return Err(GeomError::InvalidParameter("truncation radius must be positive".into()));
            }
        }
        Ok(())
    }

    /// Rule for functions with kinks away from the quadrature center.
    pub fn refined(mut self) -> Self {
        self.arc_density = self.arc_density.max(4.0);
        self
    }

    /// Angular nodes per full turn on the circle of radius `r`.
    pub fn angular_count(&self, r: f64) -> usize {
        let want = (self.arc_density * 2.0 * std::f64::consts::PI * r.sinh()).ceil();
        if want.is_finite() && want as usize > self.angular_nodes {
            (want as usize).min(self.max_angular_nodes.max(self.angular_nodes))
        } else {
            self.angular_nodes
        }
    }

    pub fn truncation(&self, entropy: f64) -> f64 {
        self.scaled_truncation(entropy, 1.0)
    }

    /// Default radius for a tail estimate inflated by `scale`.
    pub fn scaled_truncation(&self, entropy: f64, scale: f64) -> f64 {
        self.r_trunc.unwrap_or((8.0 + scale.ln()) / (2.0 * self.c - entropy))
    }
}

/// Nodes and positive weights for integrals over a region of a space.
#[derive(Clone, Debug)]
pub struct QuadratureSet<P> {
    pub nodes: Vec<P>,
    pub weights: Vec<f64>,
    /// Estimated relative truncation error of `||Psi_c||^2`.
    pub tail: f64,
}

impl<P> QuadratureSet<P> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Gauss-Legendre rule of the given order on `[a, b]`.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(order).expect("order > 0"));
    let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
    rule.as_node_weight_pairs().iter().map(|(x, w)| (m + h * x, h * w)).collect()
}

/// Composite Gauss-Legendre on `[0, r_max]` with panels of width
/// `width * (1 + r / 8)`. Weights are for `dr` only.
pub fn radial_rule(r_max: f64, width: f64, order: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut a = 0.0;
    while a < r_max {
        let b = (a + width * (1.0 + a / 8.0)).min(r_max);
        if r_max - b < 1e-3 * width {
            out.extend(gauss_legendre(order, a, r_max));
            break;
        }
        out.extend(gauss_legendre(order, a, b));
        a = b;
    }
    out
}

/// Periodic trapezoid rule with `m` nodes on `[0, span)`.
pub fn angular_rule(m: usize, span: f64) -> Vec<(f64, f64)> {
    let h = span / m as f64;
    (0..m).map(|k| ((k as f64 + 0.5) * h, h)).collect()
}

/// `int_R^inf e^{-2cr} A(r) dr / int_0^inf e^{-2cr} A(r) dr` for the
/// sphere area `A` of `H^n`, `n` in {2, 3}.
pub fn hyperbolic_tail(n: usize, c: f64, r: f64) -> Result<f64> {
    let tail = |r: f64| -> Result<f64> {
        let e = |k: f64| (-k * r).exp() / k;
        match n {
            // sinh r = (e^r - e^-r) / 2
            2 => Ok(0.5 * (e(2.0 * c - 1.0) - e(2.0 * c + 1.0))),
            // sinh^2 r = (e^2r + e^-2r - 2) / 4
            3 => Ok(0.25 * (e(2.0 * c - 2.0) + e(2.0 * c + 2.0) - 2.0 * e(2.0 * c))),
            _ => Err(GeomError::UnsupportedDimension(n)),
        }
    };
    Ok(tail(r)? / tail(0.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_rule_integrates_sinh() {
        let r = 7.3;
        let q: f64 = radial_rule(r, 0.5, 8).iter().map(|(x, w)| w * x.sinh()).sum();
        assert!((q / (r.cosh() - 1.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn wide_truncation_has_few_panels() {
        let n = radial_rule(400.0, 0.5, 8).len() / 8;
        assert!(n < 80, "{n}");
    }

    #[test]
    fn tail_matches_quadrature() {
        for (n, c) in [(2usize, 0.75), (3, 1.3)] {
            let dens = |r: f64| if n == 2 { r.sinh() } else { r.sinh().powi(2) };
            let f = |a: f64, b: f64| -> f64 {
                radial_rule(b - a, 0.25, 12)
                    .iter()
                    .map(|(x, w)| w * (-2.0 * c * (a + x)).exp() * dens(a + x))
                    .sum()
            };
            let total = f(0.0, 120.0);
            let t = hyperbolic_tail(n, c, 5.0).unwrap();
            assert!((t - f(5.0, 120.0) / total).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn config_threshold() {
        assert!(matches!(EmbeddingConfig::new(0.5).validate(1.0), Err(GeomError::Divergent { .. })));
        assert!(EmbeddingConfig::new(0.51).validate(1.0).is_ok());
        assert!((EmbeddingConfig::new(0.75).truncation(1.0) - 16.0).abs() < 1e-12);
    }
}
