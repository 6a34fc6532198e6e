use nalgebra::DMatrix;
use proptest::prelude::*;
use qfinsler::finsler::{
    cosphere_swap, dual_quotient_norm, immersion_norm, legendre, quotient_norm, tangent_basis, CoState, SurfaceMetric,
};
use qfinsler::geodesy::{girth_2d_closed_form, girth_continuity_check};
use qfinsler::htvol::ht_volume_curve;
use qfinsler::{ConvexBody, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn smooth_body(dim: usize) -> impl Strategy<Value = ConvexBody> {
    prop_oneof![
        (1.2f64..6.0).prop_map(move |p| ConvexBody::lp_ball(p, dim, 1.0).unwrap()),
        prop::collection::vec(0.3f64..3.0, dim)
            .prop_map(|d| ConvexBody::ellipsoid(DMatrix::from_diagonal(&Vector::from_vec(d))).unwrap()),
    ]
}

fn polygon() -> impl Strategy<Value = ConvexBody> {
    (any::<u64>(), 3usize..9)
        .prop_map(|(s, m)| ConvexBody::random_symmetric_polygon(&mut ChaCha8Rng::seed_from_u64(s), m).unwrap())
}

fn planar_body() -> impl Strategy<Value = ConvexBody> {
    prop_oneof![smooth_body(2), polygon()]
}

fn unit(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-1.0f64..1.0, dim)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(Vector::from_vec)
}

/// A boundary point of `k` and two tangent vectors there.
fn tangent_pair(k: &ConvexBody, dir: &Vector, a: &[f64], b: &[f64]) -> (Vector, Vector, Vector) {
    let m = k.to_boundary(dir);
    let basis = tangent_basis(k, &m);
    let comb = |c: &[f64]| basis.iter().zip(c).fold(Vector::zeros(m.len()), |acc, (e, x)| acc + e * *x);
    (m.clone(), comb(a), comb(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quotient_never_exceeds_immersion(k in smooth_body(3), l in smooth_body(3), d in unit(3), a in unit(2)) {
        let (m, v, _) = tangent_pair(&k, &d, a.as_slice(), a.as_slice());
        let phi = quotient_norm(&SurfaceMetric::quotient(k.clone(), l.clone()).unwrap(), &m, &v).unwrap();
        let psi = immersion_norm(&SurfaceMetric::immersion(k, l).unwrap(), &m, &v).unwrap();
        prop_assert!(phi <= psi * (1.0 + 1e-9));
    }

    #[test]
    fn quotient_norm_is_a_norm(k in smooth_body(3), l in smooth_body(3), d in unit(3), a in unit(2), b in unit(2), t in -4.0f64..4.0) {
        let met = SurfaceMetric::quotient(k.clone(), l).unwrap();
        let (m, v, w) = tangent_pair(&k, &d, a.as_slice(), b.as_slice());
        let f = |x: &Vector| quotient_norm(&met, &m, x).unwrap();
        let tol = 1e-8 * (f(&v) + f(&w)).max(1e-3);
        prop_assert!(f(&(&v + &w)) <= f(&v) + f(&w) + tol);
        prop_assert!((f(&(&v * t)) - t.abs() * f(&v)).abs() <= tol * t.abs().max(1.0));
        prop_assert!(f(&v) > 0.0);
    }

    #[test]
    fn legendre_pairs_to_the_norm(k in smooth_body(3), l in smooth_body(3), d in unit(3), a in unit(2)) {
        let met = SurfaceMetric::quotient(k.clone(), l).unwrap();
        let (m, v, _) = tangent_pair(&k, &d, a.as_slice(), a.as_slice());
        let leg = legendre(&met, &m, &v).unwrap();
        let phi = quotient_norm(&met, &m, &v).unwrap();
        prop_assert!((leg.state.p.dot(&v) - phi).abs() <= 1e-6 * phi);
        prop_assert!((dual_quotient_norm(&met, &m, &leg.state.p).unwrap() - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn cosphere_swap_is_an_involution(k in smooth_body(3), l in smooth_body(3), d in unit(3), a in unit(2)) {
        let met = SurfaceMetric::quotient(k.clone(), l.clone()).unwrap();
        let (m, v, _) = tangent_pair(&k, &d, a.as_slice(), a.as_slice());
        let c = legendre(&met, &m, &v).unwrap().state;
        let s = cosphere_swap(&c);
        prop_assert!(CoState::new(&l.polar(), &k.polar(), s.q.clone(), s.p.clone()).is_ok());
        prop_assert_eq!(cosphere_swap(&s), c);
    }

    #[test]
    fn planar_girth_duality(k in planar_body(), l in planar_body()) {
        let g = girth_2d_closed_form(&k, &l).unwrap();
        let d = girth_2d_closed_form(&l.polar(), &k.polar()).unwrap();
        prop_assert!((g - d).abs() <= 1e-6 * g, "{g} {d}");
    }

    #[test]
    fn planar_girth_sandwich(k in planar_body(), l in planar_body(), eps in 0.001f64..0.5) {
        prop_assert!(girth_continuity_check(&k, &l, eps).unwrap().holds);
    }

    #[test]
    fn planar_girth_bounds(b in planar_body()) {
        let g = girth_2d_closed_form(&b, &b).unwrap();
        prop_assert!(g > 4.0 && g < 8.0, "{g}");
    }

    #[test]
    fn curve_volume_scales_inversely(k in planar_body(), l in planar_body(), s in 0.2f64..5.0) {
        let v = ht_volume_curve(&k, &l).unwrap().value;
        let w = ht_volume_curve(&k, &l.scaled(s).unwrap()).unwrap().value;
        prop_assert!((w * s - v).abs() <= 1e-9 * v);
    }
}
