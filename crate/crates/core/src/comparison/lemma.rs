//! Alexandrov's lemma for a planar quadrilateral glued along a diagonal.
//!
//! Triangles `abc` and `acd` share the side `ac`; `b` and `d` lie on
//! opposite sides of it. `gamma = ∠acb`, `gamma' = ∠acd`. The comparison
//! triangle has sides `|ab|`, `|bc| + |cd|`, `|ad|`, with `c~` on the side
//! `b~d~` at distance `|bc|` from `b~`.

use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::hyp::{angle, comparison_angle, dist, H2Point, HIsometry};

/// Slack below which a conclusion counts as an equality.
pub const EQUALITY_TRIGGER: f64 = 1e-9;
/// Tolerance for the other conclusions once one is an equality.
pub const RIGIDITY_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadConfig {
    pub a: H2Point,
    pub b: H2Point,
    pub c: H2Point,
    pub d: H2Point,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadMeasures {
    pub alpha: f64,
    pub alpha_prime: f64,
    pub beta: f64,
    pub beta_prime: f64,
    pub gamma: f64,
    pub gamma_prime: f64,
    pub alpha_tilde: f64,
    pub beta_tilde: f64,
    pub beta_prime_tilde: f64,
    pub ac: f64,
    pub ac_tilde: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LemmaCheck {
    pub measures: QuadMeasures,
    /// `alpha~ - (alpha + alpha')`, `beta - beta~`, `beta' - beta'~`,
    /// `|ac| - |a~c~|`.
    pub slacks: [f64; 4],
    pub holds: [bool; 4],
    /// `Some(all slacks < RIGIDITY_TOL)` when some slack is below
    /// `EQUALITY_TRIGGER`.
    pub rigidity: Option<bool>,
}

impl QuadConfig {
    /// Angles and comparison data. Fails when the comparison triangle does
    /// not exist.
    pub fn measure(&self) -> Result<QuadMeasures> {
        let QuadConfig { a, b, c, d } = self;
        let ab = dist(a, b);
        let ad = dist(a, d);
        let bc = dist(b, c);
        let cd = dist(c, d);
        let bd = bc + cd;
        let beta_tilde = comparison_angle(ad, ab, bd)?;
        let bt = H2Point::origin();
        let dt = H2Point::from_polar(bd, 0.0);
        let at = H2Point::from_polar(ab, beta_tilde);
        let ct = H2Point::from_polar(bc, 0.0);
        Ok(QuadMeasures {
            alpha: angle(a, b, c)?,
            alpha_prime: angle(a, c, d)?,
            beta: angle(b, a, c)?,
            beta_prime: angle(d, a, c)?,
            gamma: angle(c, a, b)?,
            gamma_prime: angle(c, a, d)?,
            alpha_tilde: comparison_angle(bd, ab, ad)?,
            beta_tilde,
            beta_prime_tilde: angle(&dt, &at, &bt)?,
            ac: dist(a, c),
            ac_tilde: dist(&at, &ct),
        })
    }
}

/// Checks the four conclusions and, when one is an equality, the rigidity
/// clause.
pub fn alexandrov_lemma_check(quad: &QuadConfig) -> Result<LemmaCheck> {
    let m = quad.measure()?;
    if m.gamma + m.gamma_prime > PI + 1e-12 {
        return Err(GeomError::Precondition(format!(
            "gamma + gamma' = {} exceeds pi",
            m.gamma + m.gamma_prime
        )));
    }
    let slacks = [
        m.alpha_tilde - (m.alpha + m.alpha_prime),
        m.beta - m.beta_tilde,
        m.beta_prime - m.beta_prime_tilde,
        m.ac - m.ac_tilde,
    ];
    let min = slacks.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(LemmaCheck {
        measures: m,
        holds: slacks.map(|s| s >= -1e-9),
        rigidity: (min < EQUALITY_TRIGGER).then(|| slacks.iter().all(|s| s.abs() < RIGIDITY_TOL)),
        slacks,
    })
}

/// Quadrilateral with `c` at the origin, `a` on the positive x-axis, `b` at
/// angle `gamma` above and `d` at angle `gamma'` below, moved by `iso`.
pub fn quad_from_angles(ca: f64, cb: f64, cd: f64, gamma: f64, gamma_prime: f64, iso: &HIsometry<3>) -> QuadConfig {
    QuadConfig {
        a: iso.apply(&H2Point::from_polar(ca, 0.0)),
        b: iso.apply(&H2Point::from_polar(cb, gamma)),
        c: iso.apply(&H2Point::origin()),
        d: iso.apply(&H2Point::from_polar(cd, -gamma_prime)),
    }
}

fn random_iso<G: Rng + ?Sized>(rng: &mut G) -> HIsometry<3> {
    let p = H2Point::from_polar(rng.random_range(0.0..1.5), rng.random_range(0.0..2.0 * PI));
    HIsometry::translation_to(&p).compose(&HIsometry::rotation(1, 2, rng.random_range(0.0..2.0 * PI)))
}

/// A random quadrilateral with `gamma + gamma' <= pi` whose comparison
/// triangle exists. Returns the quad and the number of rejected draws.
pub fn random_admissible_quad<G: Rng + ?Sized>(rng: &mut G) -> (QuadConfig, usize) {
    let mut rejected = 0;
    loop {
        let ca = rng.random_range(0.05..2.0);
        let cb = rng.random_range(0.05..2.0);
        let cd = rng.random_range(0.05..2.0);
        let gamma = rng.random_range(0.02..PI - 0.02);
        let gamma_prime = rng.random_range(0.01..1.0) * (PI - gamma);
        let quad = quad_from_angles(ca, cb, cd, gamma, gamma_prime, &random_iso(rng));
        if quad.measure().is_ok() {
            return (quad, rejected);
        }
        rejected += 1;
    }
}

/// A random quadrilateral with `gamma + gamma' = pi - defect`.
pub fn random_quad_with_defect<G: Rng + ?Sized>(rng: &mut G, defect: f64) -> QuadConfig {
    loop {
        let ca = rng.random_range(0.05..2.0);
        let cb = rng.random_range(0.05..2.0);
        let cd = rng.random_range(0.05..2.0);
        let gamma = rng.random_range(0.1..PI - 0.1);
        let quad = quad_from_angles(ca, cb, cd, gamma, PI - gamma - defect, &random_iso(rng));
        if quad.measure().is_ok() {
            return quad;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn collinear_quad_is_rigid() {
        let q = quad_from_angles(0.8, 1.1, 0.6, 1.2, PI - 1.2, &HIsometry::identity());
        let c = alexandrov_lemma_check(&q).unwrap();
        for s in c.slacks {
            assert!(s.abs() < 1e-9, "{:?}", c.slacks);
        }
        assert_eq!(c.rigidity, Some(true));
    }

    #[test]
    fn rejects_reflex_configuration() {
        let q = quad_from_angles(0.8, 1.1, 0.6, 2.0, 1.5, &HIsometry::identity());
        assert!(matches!(alexandrov_lemma_check(&q), Err(GeomError::Precondition(_))));
    }

    #[test]
    fn random_quads_satisfy_conclusions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let (q, _) = random_admissible_quad(&mut rng);
            let c = alexandrov_lemma_check(&q).unwrap();
            assert!(c.slacks.iter().all(|s| *s >= -1e-9), "{:?}", c.slacks);
        }
    }

    #[test]
    fn small_defect_gives_small_positive_slacks() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let q = random_quad_with_defect(&mut rng, 1e-3);
            let c = alexandrov_lemma_check(&q).unwrap();
            assert!(c.slacks.iter().all(|s| *s >= -1e-9 && *s < 1e-2), "{:?}", c.slacks);
        }
    }
}
