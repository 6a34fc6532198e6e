use proptest::prelude::*;
use qfinsler::finsler::{quotient_norm, SurfaceMetric};
use qfinsler::grassmann::linalg::{gaussian_matrix, qf, rank, singular_values};
use qfinsler::grassmann::{
    cotangent_norm, det_identity_defect, grass_distance, invariant_complement, quotient_tangent_norm,
    random_invariant_instance, GrassCotangent, GrassDistanceOptions, GrassPoint, Matrix, OperatorNormSpec,
};
use qfinsler::{ConvexBody, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sv_norm() -> impl Strategy<Value = OperatorNormSpec> {
    let base = prop_oneof![
        Just(OperatorNormSpec::HilbertSchmidt),
        Just(OperatorNormSpec::Spectral),
        Just(OperatorNormSpec::Trace)
    ];
    (base, prop::option::of(0.0f64..0.99)).prop_map(|(b, w)| match w {
        Some(w) => b.blended(w).unwrap(),
        None => b,
    })
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((3, 1)), Just((3, 2)), Just((4, 1)), Just((4, 2)), Just((5, 2))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_one_crossnorm(beta in sv_norm(), seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (gaussian_matrix(&mut rng, n, 1), gaussian_matrix(&mut rng, n, 1));
        let t = &a * b.transpose();
        let want = a.norm() * b.norm();
        prop_assert!((beta.norm(&t).unwrap() - want).abs() <= 1e-12 * want);
        prop_assert!((beta.dual_norm(&t).unwrap() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn cotangent_norm_is_dual_to_quotient_norm(beta in sv_norm(), (n, k) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = GrassPoint::haar(&mut rng, n, k).unwrap();
        let c = GrassCotangent::from_block(base.clone(), &gaussian_matrix(&mut rng, k, n - k)).unwrap();
        let dual = cotangent_norm(&beta, &c).unwrap();
        let t = c.block();
        for _ in 0..8 {
            let f = gaussian_matrix(&mut rng, n - k, k);
            let pairing = (&t * &f).trace();
            prop_assert!(pairing <= dual * quotient_tangent_norm(&beta, &base, &f).unwrap() * (1.0 + 1e-9));
        }
        // the maximizer of the dual norm compresses to a tangent attaining the pairing
        let (_, m) = beta.dual_with_maximizer(&c.t).unwrap();
        let f = base.complement_frame().transpose() * m * base.frame();
        let ratio = (&t * &f).trace() / quotient_tangent_norm(&beta, &base, &f).unwrap();
        prop_assert!(ratio >= dual * (1.0 - 1e-5), "{ratio} {dual}");
    }

    #[test]
    fn lines_reproduce_the_round_sphere(seed in any::<u64>(), which in 0usize..3) {
        let beta = [OperatorNormSpec::HilbertSchmidt, OperatorNormSpec::Spectral, OperatorNormSpec::Trace][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let line = GrassPoint::haar(&mut rng, 3, 1).unwrap();
        let f = gaussian_matrix(&mut rng, 2, 1);
        let q: Vector = line.frame().column(0).into_owned();
        let v: Vector = (line.complement_frame() * &f).column(0).into_owned();
        let ball = ConvexBody::euclidean_ball(3);
        let sphere = quotient_norm(&SurfaceMetric::quotient(ball.clone(), ball).unwrap(), &q, &v).unwrap();
        prop_assert!((quotient_tangent_norm(&beta, &line, &f).unwrap() - sphere).abs() <= 1e-6 * sphere);
    }

    #[test]
    fn cotangents_are_conjugation_equivariant((n, k) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = GrassPoint::haar(&mut rng, n, k).unwrap();
        let c = GrassCotangent::from_block(base.clone(), &gaussian_matrix(&mut rng, k, n - k)).unwrap();
        let u = loop {
            let u = gaussian_matrix(&mut rng, n, n);
            let s = singular_values(&u);
            if s[n - 1] > 0.1 * s[0] {
                break u;
            }
        };
        let moved = GrassPoint::from_basis(&(&u * base.frame())).unwrap();
        let t = &u * &c.t * u.clone().try_inverse().unwrap();
        let image = GrassCotangent::new(moved, t.clone());
        prop_assert!(image.is_ok(), "{image:?}");
        prop_assert_eq!(rank(&t, 1e-9), rank(&c.t, 1e-9));
    }

    #[test]
    fn invariant_complement_determinant_identity((n, k) in shape(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (t, lambda) = random_invariant_instance(&mut rng, n, k).unwrap();
        let omega = invariant_complement(&t, &lambda, seed).unwrap();
        prop_assert!(det_identity_defect(&t, &lambda, &omega) <= 1e-6);
        prop_assert!(singular_values(&qfinsler::grassmann::linalg::stack(lambda.frame(), omega.frame()))[n - 1] > 1e-8);
    }

    #[test]
    fn polytope_operator_gauge_transposes(seed in any::<u64>()) {
        let k = ConvexBody::lp_ball(f64::INFINITY, 3, 1.0).unwrap();
        let l = ConvexBody::lp_ball(1.0, 3, 1.0).unwrap();
        let beta = OperatorNormSpec::op_gauge(k, l).unwrap();
        let bar = beta.transposed().unwrap();
        let t = gaussian_matrix(&mut ChaCha8Rng::seed_from_u64(seed), 3, 3);
        let (a, b) = (beta.norm(&t.transpose()).unwrap(), bar.norm(&t).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn antipodal_map_is_an_isometry(seed in any::<u64>(), which in 0usize..2) {
        let beta = [OperatorNormSpec::HilbertSchmidt, OperatorNormSpec::Spectral][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = GrassPoint::haar(&mut rng, 4, 2).unwrap();
        let b = GrassPoint::haar(&mut rng, 4, 2).unwrap();
        let opts = GrassDistanceOptions { segments: 32, ..Default::default() };
        let (d, _) = grass_distance(&beta, &a, &b, &opts).unwrap();
        let (e, _) = grass_distance(&beta, &a.antipode(), &b.antipode(), &opts).unwrap();
        prop_assert!((d - e).abs() <= 1e-6 * d.max(1.0), "{d} {e}");
    }
}

#[test]
fn qr_frames_keep_the_flag() {
    let m = Matrix::from_row_slice(3, 2, &[2.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
    let q = qf(&m);
    assert!((q.transpose() * &m).upper_triangle().diagonal().iter().all(|&x| x > 0.0));
}
