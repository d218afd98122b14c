use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cone::ConeChart;
use crate::double::{make_ball_body, make_neighborhood_body, CoreShape, DoubledSpace, Sheet};
use crate::entropy::psi_norm_closed_form;
use crate::error::GeomError;
use crate::hyp::{H2Point, H3Point, HIsometry};
use crate::oracle::{H2Space, H3Space, PointSampler};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn psi_norm_matches_closed_form() {
    let cfg = EmbeddingConfig::new(0.75).with_truncation(12.0);
    let x = H2Point::from_polar(0.9, 2.0);
    let f = psi(&H2Space::default(), &cfg, &x).unwrap();
    let exact = psi_norm_closed_form(0.75).unwrap();
    assert!(rel(f.norm(), exact) < 2e-3, "{} vs {exact}", f.norm());
    assert!(f.values.iter().all(|v| *v > 0.0));
}

#[test]
fn psi_at_its_own_point_is_one() {
    let x = H2Point::from_polar(0.4, 1.0);
    let q = Arc::new(QuadratureSet {
        nodes: vec![x],
        weights: vec![1.0],
        tail: 0.0,
    });
    assert_eq!(psi_on(&H2Space::default(), 0.75, &x, &q).values, vec![1.0]);
}

#[test]
fn psi_norm_is_invariant_under_isometries() {
    let cfg = EmbeddingConfig::new(0.75);
    let h = H2Space::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let x = h.sample_point(&mut rng);
        let g = HIsometry::translation_to(&h.sample_point(&mut rng)).compose(&HIsometry::rotation(1, 2, rng.random_range(0.0..6.0)));
        let a = psi(&h, &cfg, &x).unwrap().norm();
        let b = psi(&h, &cfg, &g.apply(&x)).unwrap().norm();
        assert!(rel(a, b) < 1e-3);
    }
    // Swapping sheets is an isometry of the double.
    let d = DoubledSpace::new(make_ball_body(H2Point::origin(), 1.0).unwrap());
    let x = d.point(Sheet::One, H2Point::from_polar(0.5, 0.3)).unwrap();
    let a = psi(&d, &cfg, &x).unwrap().norm();
    let b = psi(&d, &cfg, &d.swap(&x)).unwrap().norm();
    assert!(rel(a, b) < 1e-3);
}

#[test]
fn truncation_increases_norm_monotonically() {
    let h = H2Space::default();
    let x = H2Point::origin();
    let exact = psi_norm_closed_form(0.75).unwrap();
    let norms: Vec<f64> = [4.0, 6.0, 8.0, 12.0, 16.0]
        .iter()
        .map(|r| psi(&h, &EmbeddingConfig::new(0.75).with_truncation(*r), &x).unwrap().norm())
        .collect();
    assert!(norms.windows(2).all(|w| w[1] > w[0]));
    assert!(norms.iter().all(|n| *n < exact));
}

#[test]
fn plane_metric_is_isotropic() {
    let c = 0.75;
    let cfg = EmbeddingConfig::new(c);
    let h = H2Space::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let t = 0.7f64;
    let frame = vec![vec![t.cos(), t.sin()], vec![-t.sin(), t.cos()]];
    for i in 0..4 {
        let x = h.sample_point(&mut rng);
        let f = (i % 2 == 1).then_some(frame.as_slice());
        let r = g_phi(&h, &cfg, &x, f).unwrap();
        let target = c * c / 2.0;
        assert!(rel(r.gram[0][0], target) < 5e-3 && rel(r.gram[1][1], target) < 5e-3, "{:?}", r.gram);
        assert!(r.gram[0][1].abs() < 5e-3 * target);
        assert!(r.within(1e-3));
        assert!((r.trace - r.identity_trace).abs() < 1e-12);
        assert!(r.psi_trace >= r.trace * (1.0 - 1e-12), "{} {}", r.psi_trace, r.trace);
    }
}

#[test]
fn space_metric_is_isotropic() {
    let c = 1.5;
    let cfg = EmbeddingConfig::new(c);
    let x = H3Point::from_spatial(&[0.3, -0.2, 0.5]);
    let r = g_phi(&H3Space::default(), &cfg, &x, None).unwrap();
    for i in 0..3 {
        assert!(rel(r.gram[i][i], c * c / 3.0) < 5e-3, "{:?}", r.gram);
    }
    assert!(r.within(1e-3));
    let low = EmbeddingConfig::new(1.0);
    assert!(matches!(g_phi(&H3Space::default(), &low, &x, None), Err(GeomError::Divergent { .. })));
}

#[test]
fn finite_difference_cross_check() {
    let cfg = EmbeddingConfig::new(0.75);
    let h = H2Space::default();
    let x = H2Point::from_polar(0.6, 1.1);
    let a = g_phi(&h, &cfg, &x, None).unwrap().gram_matrix();
    let b = g_phi_finite_difference(&h, &cfg, &x, None).unwrap();
    assert!((&a - &b).abs().max() < 1e-6);

    let d = DoubledSpace::new(make_ball_body(H2Point::origin(), 1.0).unwrap());
    let cfg = EmbeddingConfig {
        angular_nodes: 24,
        ..EmbeddingConfig::new(0.75)
    };
    let x = d.point(Sheet::Two, H2Point::from_polar(0.4, 2.0)).unwrap();
    let a = g_phi(&d, &cfg, &x, None).unwrap().gram_matrix();
    let b = g_phi_finite_difference(&d, &cfg, &x, None).unwrap();
    assert!((&a - &b).abs().max() < 1e-5, "{a} {b}");
}

#[test]
fn singular_spaces_satisfy_the_chain() {
    let cfg = EmbeddingConfig {
        angular_nodes: 32,
        ..EmbeddingConfig::new(0.6)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let ball = DoubledSpace::new(make_ball_body(H2Point::origin(), 1.0).unwrap());
    let seg = CoreShape::Segment(H2Point::from_polar(1.0, PI), H2Point::from_polar(1.0, 0.0));
    let nbhd = DoubledSpace::new(make_neighborhood_body(seg, 0.5).unwrap());
    for d in [&ball, &nbhd] {
        for _ in 0..3 {
            let x = d.sample_point(&mut rng);
            let r = g_phi(d, &cfg, &x, None).unwrap();
            assert!(r.within(1e-3), "{:?}", r);
            assert!(r.amgm_slack >= -1e-12 && r.min_eigenvalue >= -1e-8);
        }
    }
    let cone = ConeChart::new(1.5 * PI).unwrap();
    for _ in 0..3 {
        let x = cone.sample_point(&mut rng);
        let r = g_phi(&cone, &cfg, &x, None).unwrap();
        assert!(r.within(1e-3), "{:?}", r);
    }
}

#[test]
fn truncation_too_small_is_rejected() {
    let cfg = EmbeddingConfig::new(0.75).with_truncation(12.0);
    assert!(matches!(
        g_phi(&H2Space::default(), &cfg, &H2Point::origin(), None),
        Err(GeomError::TruncationTooSmall(_))
    ));
}

#[test]
fn lipschitz_ratio_is_bounded() {
    let cfg = EmbeddingConfig {
        angular_nodes: 32,
        ..EmbeddingConfig::new(0.75)
    };
    let h = H2Space::default();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut pairs: Vec<_> = (0..100).map(|_| (h.sample_point(&mut rng), h.sample_point(&mut rng))).collect();
    pairs.push((H2Point::origin(), H2Point::origin()));
    let r = lipschitz_probe(&h, &cfg, &pairs).unwrap();
    assert!(r.pass && r.skipped == 1, "{r:?}");
    assert!(rel(r.b, psi_norm_closed_form(0.75).unwrap()) < 2e-3, "{r:?}");
}

#[test]
fn distance_gradients_are_unit_or_less() {
    let cfg = EmbeddingConfig::new(0.75);
    let h = H2Space::default();
    let g = grad_distance_check(&h, &cfg, &H2Point::from_polar(0.3, 0.2), &H2Point::from_polar(1.2, 2.0));
    match g {
        GradCheck::Checked { squared_norm, .. } => assert!((squared_norm - 1.0).abs() < 1e-6),
        _ => panic!("{g:?}"),
    }
    let d = DoubledSpace::new(make_ball_body(H2Point::origin(), 1.0).unwrap());
    let x = d.point(Sheet::One, H2Point::from_polar(0.5, 0.0)).unwrap();
    let y = d.point(Sheet::Two, H2Point::from_polar(0.3, 2.5)).unwrap();
    assert!(matches!(grad_distance_check(&d, &cfg, &x, &y), GradCheck::Checked { pass: true, .. }));
    let b = d.boundary(0.25);
    assert!(matches!(grad_distance_check(&d, &cfg, &b, &y), GradCheck::Skipped { .. }));
    let cone = ConeChart::new(1.5 * PI).unwrap();
    let x = cone.point(0.8, 0.1);
    let y = cone.point(1.1, 2.5);
    assert!(matches!(grad_distance_check(&cone, &cfg, &x, &y), GradCheck::Checked { pass: true, .. }));
    assert!(matches!(grad_distance_check(&cone, &cfg, &x, &x), GradCheck::Skipped { .. }));
}

#[test]
fn kinks_of_the_distance_are_skipped() {
    let cfg = EmbeddingConfig::new(0.75);
    let cone = ConeChart::new(PI).unwrap();
    let y = cone.point(1.0, 0.0);
    assert!(matches!(grad_distance_check(&cone, &cfg, &cone.point(0.8, 0.5 * PI), &y), GradCheck::Skipped { .. }));
    assert!(matches!(grad_distance_check(&cone, &cfg, &cone.point(0.8, 0.5 * PI - 1e-3), &y), GradCheck::Checked { pass: true, .. }));

    let a = H2Point::from_polar(1.0, PI);
    let b = H2Point::from_polar(1.0, 0.0);
    let d = DoubledSpace::new(make_neighborhood_body(CoreShape::Segment(a, b), 0.5).unwrap());
    let x = d.point(Sheet::One, H2Point::from_spatial(&[-1.1590235217493496, -0.5103564649013761])).unwrap();
    let y = d.point(Sheet::Two, H2Point::from_spatial(&[-0.3785398161082626, -0.5104018570619585])).unwrap();
    assert!(matches!(grad_distance_check(&d, &cfg, &x, &y), GradCheck::Skipped { .. }));
    let off = d.displace(&x, &[0.0, -3e-4]);
    assert!(matches!(grad_distance_check(&d, &cfg, &off, &y), GradCheck::Checked { pass: true, .. }));
    let r = g_phi(&d, &EmbeddingConfig::new(0.6), &x, None).unwrap();
    assert!(r.kinked_nodes > 0 && r.max_grad_sq <= 1.0 + 4.0 * cfg.delta, "{} {}", r.kinked_nodes, r.max_grad_sq);
}

#[test]
fn octagon_geometry() {
    let o = genus_two_octagon().unwrap();
    assert!((o.circumradius - 2.44845244767807579).abs() < 1e-14);
    assert!((o.inradius - 1.52857091948099816).abs() < 1e-14);
    assert!(o.angles.iter().all(|a| (a - PI / 4.0).abs() < 1e-12));
    assert!((o.area - 4.0 * PI).abs() < 1e-6);
    let q = o.quadrature(12, 8);
    assert!((q.total_weight() - 4.0 * PI).abs() < 1e-8, "{}", q.total_weight() - 4.0 * PI);
}

#[test]
fn identity_pushforward_is_exact() {
    let cfg = EmbeddingConfig::new(0.75);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let r = pushforward_isometry_check(&RadialStretch::IDENTITY, 1.5, &cfg, 5, 5, &mut rng).unwrap();
    assert!(r.inner_product_defect < 1e-10 && r.jacobian_defect < 1e-10, "{r:?}");
    assert!(r.determinant_defect < 1e-2);
}

#[test]
fn degenerate_stretch_is_rejected() {
    let cfg = EmbeddingConfig::new(0.75);
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let fold = RadialStretch { k: -0.5 };
    assert!(matches!(
        pushforward_isometry_check(&fold, 1.5, &cfg, 1, 1, &mut rng),
        Err(GeomError::DegenerateMap(_))
    ));
}
