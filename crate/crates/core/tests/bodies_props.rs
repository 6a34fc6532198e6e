use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;
use qfinsler::bodies::mahler_volume;
use qfinsler::{ConvexBody, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn body() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![
        (1.05f64..8.0, 2usize..=3).prop_map(|(p, d)| ConvexBody::lp_ball(p, d, 1.0).unwrap()),
        prop::collection::vec(0.2f64..5.0, 2..=3)
            .prop_map(|d| ConvexBody::ellipsoid(DMatrix::from_diagonal(&Vector::from_vec(d))).unwrap()),
        (any::<u64>(), 3usize..9).prop_map(|(s, m)| {
            ConvexBody::random_symmetric_polygon(&mut ChaCha8Rng::seed_from_u64(s), m).unwrap()
        }),
    ]
}

fn direction(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-1.0f64..1.0, dim)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-4)
        .prop_map(Vector::from_vec)
}

fn body_and_vectors() -> impl Strategy<Value = (ConvexBody, Vector, Vector)> {
    body().prop_flat_map(|b| {
        let d = b.dim();
        (Just(b), direction(d), direction(d))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn support_is_the_polar_gauge((b, _, xi) in body_and_vectors()) {
        let h = b.support(&xi).unwrap();
        let g = b.polar().gauge(&xi).unwrap();
        prop_assert!((h - g).abs() <= 1e-9 * h.max(1.0));
    }

    #[test]
    fn polar_is_an_involution((b, x, _) in body_and_vectors()) {
        let g = b.gauge(&x).unwrap();
        let gg = b.polar().polar().gauge(&x).unwrap();
        prop_assert!((g - gg).abs() <= 1e-9 * g.max(1.0));
    }

    #[test]
    fn gauge_support_inequality((b, x, xi) in body_and_vectors()) {
        let lhs = x.dot(&xi);
        prop_assert!(lhs <= b.gauge(&x).unwrap() * b.support(&xi).unwrap() * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn support_point_attains_support((b, _, xi) in body_and_vectors()) {
        let p = b.support_point(&xi);
        let h = b.support(&xi).unwrap();
        prop_assert!((p.dot(&xi) - h).abs() <= 1e-9 * h.max(1.0));
        prop_assert!(b.gauge(&p).unwrap() <= 1.0 + 1e-9);
    }

    #[test]
    fn gauge_is_a_norm((b, x, y) in body_and_vectors(), t in -5.0f64..5.0) {
        let g = |v: &Vector| b.gauge(v).unwrap();
        prop_assert!((g(&(&x * t)) - t.abs() * g(&x)).abs() <= 1e-9 * g(&x).max(1.0) * t.abs().max(1.0));
        prop_assert!(g(&(&x + &y)) <= (g(&x) + g(&y)) * (1.0 + 1e-12));
        prop_assert!((g(&-&x) - g(&x)).abs() <= 1e-12 * g(&x).max(1.0));
    }

    #[test]
    fn ellipse_mahler_volume_is_pi_squared(a in 0.1f64..10.0, b in 0.1f64..10.0, c in -0.9f64..0.9) {
        let off = c * (a * b).sqrt();
        let e = ConvexBody::ellipsoid(DMatrix::from_row_slice(2, 2, &[a, off, off, b])).unwrap();
        prop_assert!((mahler_volume(&e).unwrap() - PI * PI).abs() < 1e-9);
    }

    #[test]
    fn polygon_mahler_volume_is_between_8_and_ellipse(s in any::<u64>(), m in 3usize..9) {
        let p = ConvexBody::random_symmetric_polygon(&mut ChaCha8Rng::seed_from_u64(s), m).unwrap();
        let mv = mahler_volume(&p).unwrap();
        prop_assert!((8.0 - 1e-9..=PI * PI + 1e-9).contains(&mv), "{mv}");
    }
}
