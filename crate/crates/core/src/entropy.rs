//! Volume growth entropy: closed forms and Monte Carlo ball-measure slopes.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::batch::parallel_trials;
use crate::error::{GeomError, Result};
use crate::oracle::GeodesicOracle;

/// Samples per parallel chunk.
const CHUNK: usize = 4096;

/// Entropy of `H^n`.
pub fn entropy_analytic(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(GeomError::UnsupportedDimension(n));
    }
    Ok((n - 1) as f64)
}

/// `||x -> e^{-c d(x, .)}||_{L^2(H^2)} = sqrt(2 pi / (4c^2 - 1))`.
pub fn psi_norm_closed_form(c: f64) -> Result<f64> {
    if !(c > 0.5) {
        return Err(GeomError::Divergent { c, threshold: 0.5 });
    }
    Ok((2.0 * PI / (4.0 * c * c - 1.0)).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct EntropyEstimate {
    pub radii: Vec<f64>,
    pub log_measure: Vec<f64>,
    /// Standard error of each `log_measure`; zero for exact values.
    pub log_stderr: Vec<f64>,
    /// Draws per radius; zero where the measure is exact.
    pub samples: Vec<usize>,
    pub hits: Vec<usize>,
    /// First index of the fitting window.
    pub window_start: usize,
    pub slope: f64,
    pub slope_stderr: f64,
}

impl EntropyEstimate {
    pub fn measure(&self) -> Vec<f64> {
        self.log_measure.iter().map(|l| l.exp()).collect()
    }
}

/// Estimates `log |B(base, R)|` for each radius and fits a least-squares
/// slope over the upper half of the radii. Exact ball measures are used when
/// the oracle has them; otherwise `samples` hit-or-miss draws per radius.
pub fn entropy_estimate<O: GeodesicOracle, G: Rng + ?Sized>(
    o: &O,
    base: &O::Point,
    radii: &[f64],
    samples: usize,
    rng: &mut G,
) -> Result<EntropyEstimate> {
    if radii.len() < 3 {
        return Err(GeomError::TooFewRadii(radii.len()));
    }
    if radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
        return Err(GeomError::InvalidParameter("radii must be positive and strictly increasing".into()));
    }
    if samples == 0 && radii.iter().any(|r| o.ball_measure_exact(base, *r).is_none()) {
        return Err(GeomError::InvalidParameter("samples must be positive".into()));
    }
    let seeds: Vec<u64> = radii.iter().map(|_| rng.random()).collect();
    let mut log_measure = Vec::new();
    let mut log_stderr = Vec::new();
    let mut counts = Vec::new();
    let mut hits = Vec::new();
    for (&radius, &seed) in radii.iter().zip(&seeds) {
        if let Some(m) = o.ball_measure_exact(base, radius) {
            log_measure.push(m.ln());
            log_stderr.push(0.0);
            counts.push(0);
            hits.push(0);
            continue;
        }
        let (k, mass) = hit_or_miss(o, base, radius, samples, seed);
        if k == 0 {
            return Err(GeomError::NoHits(radius));
        }
        let p = k as f64 / samples as f64;
        log_measure.push((mass * p).ln());
        log_stderr.push(((1.0 - p) / (samples as f64 * p)).sqrt());
        counts.push(samples);
        hits.push(k);
    }
    let window_start = radii.len() / 2;
    let (slope, slope_stderr) = ols_slope(&radii[window_start..], &log_measure[window_start..], &log_stderr[window_start..]);
    Ok(EntropyEstimate {
        radii: radii.to_vec(),
        log_measure,
        log_stderr,
        samples: counts,
        hits,
        window_start,
        slope,
        slope_stderr,
    })
}

fn hit_or_miss<O: GeodesicOracle>(o: &O, base: &O::Point, radius: f64, samples: usize, seed: u64) -> (usize, f64) {
    let chunks = samples.div_ceil(CHUNK);
    let per_chunk = parallel_trials(chunks, seed, |i, rng| {
        let n = CHUNK.min(samples - i * CHUNK);
        let mut k = 0;
        let mut mass = 0.0;
        for _ in 0..n {
            let s = o.measure_sample(base, radius, rng);
            mass = s.proposal_mass;
            if s.point.is_some_and(|y| o.distance(base, &y) <= radius) {
                k += 1;
            }
        }
        (k, mass)
    });
    let k = per_chunk.iter().map(|c| c.0).sum();
    (k, per_chunk[0].1)
}

/// Unweighted least squares slope with the standard error propagated from
/// independent per-point errors.
fn ols_slope(x: &[f64], y: &[f64], sy: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let slope = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / sxx;
    let var: f64 = x.iter().zip(sy).map(|(a, s)| ((a - mx) / sxx * s).powi(2)).sum();
    (slope, var.sqrt())
}
