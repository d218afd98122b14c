//! The `Psi_c` embedding into `L^2`, its radial projection `Phi_c`, the
//! induced metric `g_Phi`, and the pushforward isometry.

mod chart;
mod metric;
mod octagon;
mod psi;
mod pushforward;
mod quadrature;

pub use chart::MetricChart;
pub use metric::{g_phi, g_phi_finite_difference, EmbeddedMetricReport, MAX_TAIL};
pub use octagon::{genus_two_octagon, vol_phi, Octagon, VolPhiReport};
pub use psi::{grad_distance_check, lipschitz_probe, psi, psi_on, GradCheck, LipschitzReport, SampledFunction};
pub use pushforward::{pushforward_isometry_check, PushforwardReport, RadialStretch};
pub use quadrature::{
    angular_rule, gauss_legendre, hyperbolic_tail, radial_rule, EmbeddingConfig, QuadratureSet,
};

#[cfg(test)]
mod tests;
