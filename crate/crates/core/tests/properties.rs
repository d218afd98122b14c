use std::f64::consts::PI;

use alexandrov_core::comparison::{
    alexandrov_lemma_check, check_condition_b, check_point_comparison, quad_from_angles, AngleMethod, Tolerance,
};
use alexandrov_core::cone::{cone_distance, ConeChart};
use alexandrov_core::double::{make_ball_body, make_neighborhood_body, CoreShape, DoubledSpace, Sheet};
use alexandrov_core::hyp::{
    angle, comparison_angle, dist, exp_map, geodesic_point, law_of_cosines_side, log_map, H2Point, H3Point, HIsometry,
};
use proptest::prelude::*;

fn h2() -> impl Strategy<Value = H2Point> {
    (0.0..3.0f64, 0.0..2.0 * PI).prop_map(|(r, phi)| H2Point::from_polar(r, phi))
}

fn h3() -> impl Strategy<Value = H3Point> {
    prop::array::uniform3(-2.0..2.0f64).prop_map(|x| H3Point::from_spatial(&x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn triangle_inequality_h2(a in h2(), b in h2(), c in h2()) {
        prop_assert!(dist(&a, &c) <= dist(&a, &b) + dist(&b, &c) + 1e-12);
    }

    #[test]
    fn triangle_inequality_h3(a in h3(), b in h3(), c in h3()) {
        prop_assert!(dist(&a, &c) <= dist(&a, &b) + dist(&b, &c) + 1e-12);
    }

    #[test]
    fn exp_inverts_log(a in h3(), b in h3()) {
        let back = exp_map(&log_map(&a, &b));
        prop_assert!(dist(&back, &b) < 1e-9 * (1.0 + dist(&a, &b).exp()));
    }

    #[test]
    fn geodesic_is_proportional(a in h2(), b in h2(), t in 0.0..1.0f64) {
        let d = dist(&a, &b);
        let m = geodesic_point(&a, &b, t);
        prop_assert!((dist(&a, &m) - t * d).abs() < 1e-9);
        prop_assert!((dist(&m, &b) - (1.0 - t) * d).abs() < 1e-9);
    }

    #[test]
    fn isometries_preserve_distance(a in h2(), b in h2(), p in h2(), th in 0.0..2.0 * PI) {
        let g = HIsometry::translation_to(&p).compose(&HIsometry::rotation(1, 2, th));
        prop_assert!((dist(&g.apply(&a), &g.apply(&b)) - dist(&a, &b)).abs() < 1e-9);
    }

    #[test]
    fn model_angle_equals_comparison_angle(a in h2(), b in h2(), c in h2()) {
        let (ab, ac, bc) = (dist(&a, &b), dist(&a, &c), dist(&b, &c));
        prop_assume!(ab > 1e-3 && ac > 1e-3 && bc > 1e-3);
        let exact = angle(&a, &b, &c).unwrap();
        let cmp = comparison_angle(bc, ab, ac).unwrap();
        prop_assert!((exact - cmp).abs() < 1e-8);
        prop_assert!((law_of_cosines_side(ab, ac, exact) - bc).abs() < 1e-9);
    }

    #[test]
    fn lemma_slacks_nonnegative(
        ca in 0.05..2.0f64, cb in 0.05..2.0f64, cd in 0.05..2.0f64,
        g in 0.02..PI - 0.02, f in 0.0..1.0f64,
    ) {
        let q = quad_from_angles(ca, cb, cd, g, f * (PI - g), &HIsometry::identity());
        if let Ok(c) = alexandrov_lemma_check(&q) {
            prop_assert!(c.slacks.iter().all(|s| *s >= -1e-9), "{:?}", c.slacks);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cone_below_two_pi_is_fat(
        th in 0.3..2.0f64,
        r in prop::array::uniform3(0.05..1.5f64),
        phi in prop::array::uniform3(0.0..1.0f64),
    ) {
        let chart = ConeChart::new(th * PI).unwrap();
        let p: Vec<_> = (0..3).map(|i| chart.point(r[i], phi[i] * th * PI)).collect();
        if let Ok(rep) = check_point_comparison(&chart, &p[0], &p[1], &p[2], 16, Tolerance::BOUNDED_BELOW) {
            prop_assert!(rep.pass, "{}", rep.min_slack);
        }
        prop_assert!((cone_distance(&chart, &p[0], &p[1]) - cone_distance(&chart, &p[1], &p[0])).abs() < 1e-12);
    }

    #[test]
    fn doubled_ball_angles_dominate(
        r in prop::array::uniform3(0.0..0.95f64),
        phi in prop::array::uniform3(0.0..2.0 * PI),
        sheets in prop::array::uniform3(any::<bool>()),
    ) {
        let x = DoubledSpace::new(make_ball_body(H2Point::origin(), 1.0).unwrap());
        let p: Vec<_> = (0..3)
            .map(|i| {
                let s = if sheets[i] { Sheet::One } else { Sheet::Two };
                x.point(s, H2Point::from_polar(r[i], phi[i])).unwrap()
            })
            .collect();
        if let Ok(b) = check_condition_b(&x, &p[0], &p[1], &p[2], AngleMethod::default()) {
            prop_assert!(b.pass, "{:?}", b.deficits);
        }
    }

    #[test]
    fn double_metric_axioms(
        r in prop::array::uniform3(0.0..0.49f64),
        t in prop::array::uniform3(-1.0..1.0f64),
        sheets in prop::array::uniform3(any::<bool>()),
    ) {
        let a = H2Point::from_polar(1.0, 0.0);
        let b = H2Point::from_polar(1.0, PI);
        let x = DoubledSpace::new(make_neighborhood_body(CoreShape::Segment(a, b), 0.5).unwrap());
        let p: Vec<_> = (0..3)
            .map(|i| {
                let s = if sheets[i] { Sheet::One } else { Sheet::Two };
                let pt = exp_map(&log_map(&geodesic_point(&a, &b, 0.5 * (t[i] + 1.0)), &H2Point::from_polar(1.0, 0.5 * PI)).unit().unwrap().scaled(r[i]));
                x.point(s, pt).unwrap()
            })
            .collect();
        let d01 = x.distance(&p[0], &p[1]);
        prop_assert_eq!(d01, x.distance(&p[1], &p[0]));
        prop_assert!(x.distance(&p[0], &p[2]) <= d01 + x.distance(&p[1], &p[2]) + 1e-9);
        prop_assert!((x.distance(&x.swap(&p[0]), &x.swap(&p[1])) - d01).abs() < 1e-9);
    }
}
