use std::f64::consts::{LN_2, PI, TAU};
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::config::{Experiment, ExperimentConfig};
use super::report::{Report, Row};
use crate::bodies::{ConvexBody, FitOptions, Vector};
use crate::error::Result;
use crate::finsler::{cosphere_swap, immersion_norm, legendre, quotient_norm, tangent_basis, SurfaceMetric};
use crate::geodesy::{
    characteristic_flow, girth, girth_2d_closed_form, girth_continuity_check, girth_lower_bound, FlowOptions,
    GirthOptions,
};
use crate::grassmann::linalg::{gaussian_matrix, rank};
use crate::grassmann::{
    constructed_geodesics, det_identity_defect, geodesic_correspondence_check, grass_characteristic_flow, grass_girth,
    invariant_complement, random_invariant_instance, transpose_isometry_check, GrassCotangent, GrassFlowOptions,
    GrassGirthOptions, GrassPoint, OperatorNormSpec, RANK_TOL,
};
use crate::htvol::{
    ht_volume_curve, ht_volume_grassmann, ht_volume_surface, ChartFamily, SurfaceOptions, GRASS_MC_SEED,
};

type Case<'a> = Box<dyn Fn() -> Vec<Row> + Send + Sync + 'a>;

/// Runs the cases in parallel and collects their rows in case order.
fn run_cases(suite: &str, cfg: &ExperimentConfig, cases: Vec<Case<'_>>) -> Report {
    let start = Instant::now();
    let rows: Vec<Row> = cases.par_iter().map(|c| c()).collect::<Vec<_>>().into_iter().flatten().collect();
    Report::new(suite, cfg.seed, start.elapsed().as_secs_f64(), rows)
}

/// Rows from a fallible computation; an error becomes one failing row.
fn guarded(case_id: &str, quantity: &str, f: impl FnOnce() -> Result<Vec<Row>>) -> Vec<Row> {
    f().unwrap_or_else(|e| vec![Row::failed(case_id, quantity, &e)])
}

fn case_rng(cfg: &ExperimentConfig, salt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(salt);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// `Rᵀ diag(e^u) R` with `u` uniform in `[−1, 1]` and `R` a random rotation.
fn random_ellipsoid(rng: &mut ChaCha8Rng, n: usize) -> Result<ConvexBody> {
    let r = gaussian_matrix(rng, n, n).qr().q();
    let d = DMatrix::from_diagonal(&Vector::from_fn(n, |_, _| rng.random_range(-1.0f64..1.0).exp()));
    ConvexBody::ellipsoid(r.transpose() * d * r)
}

fn diag(v: &[f64]) -> Result<ConvexBody> {
    ConvexBody::ellipsoid(DMatrix::from_diagonal(&Vector::from_column_slice(v)))
}

/// Sampled `(m, v)` comparison of the quotient and immersion norms: the number
/// of points with `φ > ψ` and the largest `|φ − ψ|`.
fn phi_psi(k: &ConvexBody, l: &ConvexBody, samples: usize, rng: &mut ChaCha8Rng) -> Result<(usize, f64)> {
    let q = SurfaceMetric::quotient(k.clone(), l.clone())?;
    let i = SurfaceMetric::immersion(k.clone(), l.clone())?;
    let n = k.dim();
    let (mut violations, mut gap) = (0, 0.0f64);
    for _ in 0..samples {
        let m = k.to_boundary(&gaussian(rng, n));
        let v = tangent_basis(k, &m).iter().fold(Vector::zeros(n), |acc, b| acc + b * rng.sample::<f64, _>(StandardNormal));
        let (phi, psi) = (quotient_norm(&q, &m, &v)?, immersion_norm(&i, &m, &v)?);
        if phi > psi * (1.0 + 1e-9) + 1e-12 {
            violations += 1;
        }
        gap = gap.max((phi - psi).abs());
    }
    Ok((violations, gap))
}

fn phi_psi_case<'a>(cfg: &'a ExperimentConfig, id: &'a str, k: ConvexBody, l: ConvexBody, salt: u64) -> Case<'a> {
    Box::new(move || {
        guarded(id, "phi <= psi", || {
            let (bad, _) = phi_psi(&k, &l, cfg.knobs.phi_psi_samples, &mut case_rng(cfg, salt))?;
            Ok(vec![Row::at_most(id, "samples with phi > psi", bad as f64, 0.0)])
        })
    })
}

fn equality_case<'a>(cfg: &'a ExperimentConfig, id: &'a str, k: ConvexBody, l: ConvexBody, salt: u64) -> Case<'a> {
    Box::new(move || {
        guarded(id, "phi = psi", || {
            let samples = cfg.knobs.phi_psi_samples.min(2000);
            let (bad, gap) = phi_psi(&k, &l, samples, &mut case_rng(cfg, salt))?;
            Ok(vec![
                Row::at_most(id, "max |phi - psi|", gap, 1e-6),
                Row::at_most(id, "samples with phi > psi", bad as f64, 0.0),
            ])
        })
    })
}

/// Girth duality `g(∂K, φ_L) = g(∂L°, φ_{K°})` in the plane through the closed form.
fn planar_duality(id: &str, k: &ConvexBody, l: &ConvexBody, tol: f64) -> Vec<Row> {
    guarded(id, "girth duality", || {
        let g = girth_2d_closed_form(k, l)?;
        let d = girth_2d_closed_form(&l.polar(), &k.polar())?;
        Ok(vec![Row::close(id, "g(K;L) vs g(L°;K°)", g, d, tol)])
    })
}

fn random_polygon_pairs(cfg: &ExperimentConfig) -> Vec<(ConvexBody, ConvexBody)> {
    let mut rng = case_rng(cfg, 4);
    (0..cfg.knobs.random_pairs)
        .map(|_| {
            let (a, b) = (rng.random_range(3..9), rng.random_range(3..9));
            let k = ConvexBody::random_symmetric_polygon(&mut rng, a).expect("hull of random points");
            let l = ConvexBody::random_symmetric_polygon(&mut rng, b).expect("hull of random points");
            (k, l)
        })
        .collect()
}

/// Planar girths: exact constants, random duality pairs, bounds, the pointwise
/// metric comparison and continuity.
pub fn run_girth2d(cfg: &ExperimentConfig) -> Report {
    let mut cases: Vec<Case> = Vec::new();
    cases.push(Box::new(|| {
        let id = "c01_square_closed_form";
        guarded(id, "girth", || {
            let t = Instant::now();
            let sq = ConvexBody::square();
            let g = girth_2d_closed_form(&sq, &sq)?;
            let secs = t.elapsed().as_secs_f64();
            Ok(vec![Row::close(id, "girth", g, 8.0 * LN_2, 1e-8), Row::at_most(id, "runtime_s", secs, 1.0)])
        })
    }));
    cases.push(Box::new(|| {
        let id = "c02_square_generic";
        guarded(id, "girth", || {
            let t = Instant::now();
            let sq = ConvexBody::square();
            let g = girth(&SurfaceMetric::quotient(sq.clone(), sq)?, &GirthOptions::default())?.length;
            let secs = t.elapsed().as_secs_f64();
            Ok(vec![Row::close(id, "girth", g, 8.0 * LN_2, 1e-2), Row::at_most(id, "runtime_s", secs, 30.0)])
        })
    }));
    cases.push(Box::new(|| {
        let id = "c03_disk_2d";
        guarded(id, "girth", || {
            let d = ConvexBody::euclidean_ball(2);
            let closed = girth_2d_closed_form(&d, &d)?;
            let generic = girth(&SurfaceMetric::quotient(d.clone(), d)?, &GirthOptions::default())?.length;
            Ok(vec![Row::close(id, "closed form", closed, TAU, 1e-6), Row::close(id, "generic", generic, TAU, 1e-6)])
        })
    }));
    for (i, (k, l)) in random_polygon_pairs(cfg).into_iter().enumerate() {
        cases.push(Box::new(move || planar_duality(&format!("c04_polygon_pair_{i:02}"), &k, &l, 1e-3)));
    }
    for p in cfg.pairs.iter().filter(|p| p.k.build().map(|b| b.dim() == 2).unwrap_or(false)) {
        cases.push(Box::new(move || {
            let id = format!("c04_user_{}", p.id);
            guarded(&id, "build", || Ok(planar_duality(&id, &p.k.build()?, &p.l.build()?, 1e-3)))
        }));
    }
    let bound_bodies: Vec<(&str, Result<ConvexBody>)> = vec![
        ("square", Ok(ConvexBody::square())),
        ("disk", Ok(ConvexBody::euclidean_ball(2))),
        ("l1_5", ConvexBody::lp_ball(1.5, 2, 1.0)),
        ("l3", ConvexBody::lp_ball(3.0, 2, 1.0)),
        ("hexagon", ConvexBody::regular_polygon(3, 1.0)),
        ("ellipse", diag(&[4.0, 1.0])),
        ("random_polygon", ConvexBody::random_symmetric_polygon(&mut case_rng(cfg, 7), 5)),
    ];
    for (name, body) in bound_bodies {
        cases.push(Box::new(move || {
            let id = format!("c07_bounds_{name}");
            guarded(&id, "girth bounds", || {
                let b = body.clone()?;
                let g = girth_2d_closed_form(&b, &b)?;
                let lower = girth_lower_bound(&b, &FitOptions::default())?;
                let mut rows = vec![
                    Row::at_least(&id, "girth > 4", g, 4.0),
                    Row::at_most(&id, "girth < 8", g, 8.0),
                    Row::at_least_within(&id, "girth >= (2/pi) M / vr^2", g, lower, 1e-9 * lower),
                ];
                if name == "square" {
                    rows.push(Row::close(&id, "square lower bound", lower, 4.0, 1e-6));
                }
                Ok(rows)
            })
        }));
    }
    let mut rng = case_rng(cfg, 8);
    let planar_pairs: Vec<(&str, Result<(ConvexBody, ConvexBody)>)> = vec![
        ("c08_phi_psi_square_disk", Ok((ConvexBody::square(), ConvexBody::euclidean_ball(2)))),
        ("c08_phi_psi_disk_square", Ok((ConvexBody::euclidean_ball(2), ConvexBody::square()))),
        ("c08_phi_psi_l3_l1_5", ConvexBody::lp_ball(3.0, 2, 1.0).and_then(|k| Ok((k, ConvexBody::lp_ball(1.5, 2, 1.0)?)))),
        (
            "c08_phi_psi_polygon_ellipse",
            ConvexBody::random_symmetric_polygon(&mut rng, 6).and_then(|k| Ok((k, diag(&[2.0, 0.5])?))),
        ),
    ];
    for (i, (id, pair)) in planar_pairs.into_iter().enumerate() {
        match pair {
            Ok((k, l)) => cases.push(phi_psi_case(cfg, id, k, l, 80 + i as u64)),
            Err(e) => cases.push(Box::new(move || vec![Row::failed(id, "build", &e)])),
        }
    }
    for (i, (id, k)) in [
        ("c08_isoperimetrix_l3", ConvexBody::lp_ball(3.0, 2, 1.0)),
        ("c08_isoperimetrix_polygon", ConvexBody::random_symmetric_polygon(&mut rng, 5)),
    ]
    .into_iter()
    .enumerate()
    {
        match k.and_then(|k| Ok((k.polar().rotate_quarter_turn()?, k))) {
            Ok((l, k)) => cases.push(equality_case(cfg, id, k, l, 90 + i as u64)),
            Err(e) => cases.push(Box::new(move || vec![Row::failed(id, "build", &e)])),
        }
    }
    let mut cont_pairs = vec![
        ("square", ConvexBody::square(), ConvexBody::square()),
        ("disk_l3", ConvexBody::euclidean_ball(2), ConvexBody::lp_ball(3.0, 2, 1.0).expect("valid exponent")),
    ];
    if let Some((k, l)) = random_polygon_pairs(cfg).into_iter().next() {
        cont_pairs.push(("polygons", k, l));
    }
    for (name, k, l) in cont_pairs {
        for eps in [0.1, 0.01] {
            let (k, l) = (k.clone(), l.clone());
            cases.push(Box::new(move || {
                let id = format!("c13_continuity_{name}_eps{eps}");
                guarded(&id, "sandwich", || {
                    let s = girth_continuity_check(&k, &l, eps)?;
                    // attained for scaled bodies, so rounding needs a relative slack
                    let slack = 1e-10 * s.g1;
                    Ok(vec![
                        Row::at_least_within(&id, "g2 >= g1/(1+eps)", s.g2, s.lower, slack),
                        Row::at_most_within(&id, "g2 <= (1+eps) g1", s.g2, s.upper, slack),
                    ])
                })
            }));
        }
    }
    run_cases(Experiment::Girth2d.name(), cfg, cases)
}

/// Girths in space, the pointwise comparison in space and the characteristic flow.
pub fn run_girth3d(cfg: &ExperimentConfig) -> Report {
    let mut cases: Vec<Case> = Vec::new();
    cases.push(Box::new(|| {
        let id = "c03_euclidean_3d";
        guarded(id, "girth", || {
            let b = ConvexBody::euclidean_ball(3);
            let g = girth(&SurfaceMetric::quotient(b.clone(), b)?, &GirthOptions::default())?.length;
            Ok(vec![Row::close(id, "girth", g, TAU, 1e-2)])
        })
    }));
    cases.push(Box::new(|| {
        let id = "c05_l1_5_vs_l3";
        guarded(id, "girth duality", || {
            let t = Instant::now();
            let k = ConvexBody::lp_ball(1.5, 3, 1.0)?;
            let g = girth(&SurfaceMetric::quotient(k.clone(), k.clone())?, &GirthOptions::default())?.length;
            let d = girth(&SurfaceMetric::quotient(k.polar(), k.polar())?, &GirthOptions::default())?.length;
            let secs = t.elapsed().as_secs_f64();
            Ok(vec![Row::close(id, "g(l1.5) vs g(l3)", g, d, 2e-2), Row::at_most(id, "runtime_s", secs, 300.0)])
        })
    }));
    for p in cfg.pairs.iter().filter(|p| p.k.build().map(|b| b.dim() == 3).unwrap_or(false)) {
        cases.push(Box::new(move || {
            let id = format!("c05_user_{}", p.id);
            guarded(&id, "girth duality", || {
                let (k, l) = (p.k.build()?, p.l.build()?);
                let g = girth(&SurfaceMetric::quotient(k.clone(), l.clone())?, &GirthOptions::default())?.length;
                let d = girth(&SurfaceMetric::quotient(l.polar(), k.polar())?, &GirthOptions::default())?.length;
                Ok(vec![Row::close(&id, "g(K;L) vs g(L°;K°)", g, d, 2e-2)])
            })
        }));
    }
    let spatial: Vec<(&str, Result<(ConvexBody, ConvexBody)>)> = vec![
        ("c08_phi_psi_3d_l3_ellipsoid", ConvexBody::lp_ball(3.0, 3, 1.0).and_then(|k| Ok((k, diag(&[1.0, 2.0, 0.5])?)))),
        (
            "c08_phi_psi_3d_cube_l1_5",
            ConvexBody::lp_ball(f64::INFINITY, 3, 1.0).and_then(|k| Ok((k, ConvexBody::lp_ball(1.5, 3, 1.0)?))),
        ),
    ];
    for (i, (id, pair)) in spatial.into_iter().enumerate() {
        match pair {
            Ok((k, l)) => cases.push(phi_psi_case(cfg, id, k, l, 180 + i as u64)),
            Err(e) => cases.push(Box::new(move || vec![Row::failed(id, "build", &e)])),
        }
    }
    match random_ellipsoid(&mut case_rng(cfg, 190), 3).and_then(|e| Ok((e.scaled(2.0)?, e))) {
        Ok((l, k)) => cases.push(equality_case(cfg, "c08_homothetic_ellipsoids", k, l, 191)),
        Err(e) => cases.push(Box::new(move || vec![Row::failed("c08_homothetic_ellipsoids", "build", &e)])),
    }
    for i in 0..3u64 {
        cases.push(Box::new(move || {
            let id = format!("c09_flow_energy_{i}");
            guarded(&id, "energy drift", || {
                let mut rng = case_rng(cfg, 200 + i);
                let (k, l) = (random_ellipsoid(&mut rng, 3)?, random_ellipsoid(&mut rng, 3)?);
                let met = SurfaceMetric::quotient(k.clone(), l)?;
                let q = k.to_boundary(&gaussian(&mut rng, 3));
                let start = legendre(&met, &q, &gaussian(&mut rng, 3))?.state;
                let opts = FlowOptions { project: false, ..Default::default() };
                let tr = characteristic_flow(&met, &start, 10.0, 1e-3, &opts)?;
                Ok(vec![Row::at_most(&id, "max |H - 1/2| over duration 10", tr.drift_max, 1e-6)])
            })
        }));
    }
    cases.push(Box::new(move || {
        let id = "c09_dual_swap";
        guarded(id, "swap", || {
            let mut rng = case_rng(cfg, 210);
            let k = ConvexBody::lp_ball(3.0, 3, 1.0)?;
            let l = random_ellipsoid(&mut rng, 3)?;
            let met = SurfaceMetric::quotient(k.clone(), l)?;
            let q = k.to_boundary(&gaussian(&mut rng, 3));
            let c = legendre(&met, &q, &gaussian(&mut rng, 3))?.state;
            let o = FlowOptions::default();
            let fwd = characteristic_flow(&met, &c, 2.0, 1e-3, &o)?;
            let bwd = characteristic_flow(&met.dual_pair(), &cosphere_swap(&c), -2.0, 1e-3, &o)?;
            let mut dev: f64 = if fwd.states.len() == bwd.states.len() { 0.0 } else { f64::INFINITY };
            for (a, b) in fwd.states.iter().zip(&bwd.states) {
                let s = cosphere_swap(&a.state);
                dev = dev.max((&s.q - &b.state.q).amax()).max((&s.p - &b.state.p).amax());
            }
            Ok(vec![Row::at_most(id, "max swap deviation", dev, 1e-5)])
        })
    }));
    run_cases(Experiment::Girth3d.name(), cfg, cases)
}

/// Closeness within a multiple of the combined error estimates, with a floor
/// for estimates that are exact.
fn within_errors(id: &str, quantity: &str, a: f64, ea: f64, b: f64, eb: f64, factor: f64) -> Row {
    Row::close(id, quantity, a, b, factor * (ea + eb) + 1e-9 * a.abs().max(b.abs()))
}

/// Holmes–Thompson volumes of curves, surfaces and small Grassmannians.
pub fn run_htvol(cfg: &ExperimentConfig) -> Report {
    let mut cases: Vec<Case> = Vec::new();
    let surface = SurfaceOptions { chart: ChartFamily::Icosahedral, frequency: cfg.knobs.surface_frequency, fiber_nodes: 256 };
    cases.push(Box::new(move || {
        let id = "c03_ht_euclidean_3d";
        guarded(id, "volume", || {
            let b = ConvexBody::euclidean_ball(3);
            let v = ht_volume_surface(&b, &b, &surface)?;
            let target = 4.0 * PI * PI;
            Ok(vec![Row::close(id, "v_HT(S2)", v.value, target, 0.01 * target)])
        })
    }));
    for (i, (k, l)) in random_polygon_pairs(cfg).into_iter().take(5).enumerate() {
        cases.push(Box::new(move || {
            let id = format!("c06_curve_duality_{i}");
            guarded(&id, "curve volume", || {
                let a = ht_volume_curve(&k, &l)?.value;
                let b = ht_volume_curve(&l.polar(), &k.polar())?.value;
                Ok(vec![Row::close(&id, "v(K;L) vs v(L°;K°)", a, b, 1e-8)])
            })
        }));
    }
    for i in 0..cfg.knobs.ellipsoid_pairs as u64 {
        cases.push(Box::new(move || {
            let id = format!("c06_surface_duality_{i}");
            guarded(&id, "surface volume", || {
                let mut rng = case_rng(cfg, 300 + i);
                let (k, l) = (random_ellipsoid(&mut rng, 3)?, random_ellipsoid(&mut rng, 3)?);
                let a = ht_volume_surface(&k, &l, &surface)?;
                let b = ht_volume_surface(&l.polar(), &k.polar(), &surface)?;
                Ok(vec![within_errors(&id, "v(K;L) vs v(L°;K°), 3x error", a.value, a.std_error, b.value, b.std_error, 3.0)])
            })
        }));
    }
    for (name, beta) in [("hs", OperatorNormSpec::HilbertSchmidt), ("spectral", OperatorNormSpec::Spectral)] {
        cases.push(Box::new(move || {
            let id = format!("c06_grassmann_n3_{name}");
            guarded(&id, "grassmann volume", || {
                let a = ht_volume_grassmann(3, 1, &beta, 0, 0)?;
                let b = ht_volume_grassmann(3, 2, &beta, 0, 0)?;
                let mut rows = vec![within_errors(&id, "v(G(3,1)) vs v(G(3,2)), 3 sigma", a.value, a.std_error, b.value, b.std_error, 3.0)];
                if name == "hs" {
                    let target = 4.0 * PI * PI;
                    rows.push(Row::close(&id, "v(G(3,1)) = 4 pi^2", a.value, target, 0.01 * target));
                }
                Ok(rows)
            })
        }));
    }
    let mc = cfg.knobs.mc_samples;
    let seed = GRASS_MC_SEED.wrapping_add(cfg.seed);
    let n4: Vec<(&str, Result<OperatorNormSpec>)> = vec![
        ("spectral", Ok(OperatorNormSpec::Spectral)),
        (
            "op_gauge_l1_l3",
            ConvexBody::lp_ball(1.0, 4, 1.0)
                .and_then(|k| OperatorNormSpec::op_gauge(k, ConvexBody::lp_ball(3.0, 4, 1.0)?)),
        ),
    ];
    for (name, beta) in n4 {
        cases.push(Box::new(move || {
            let id = format!("c06_grassmann_n4_{name}");
            guarded(&id, "grassmann volume", || {
                let beta = beta.clone()?;
                let a = ht_volume_grassmann(4, 1, &beta, mc, seed)?;
                let b = ht_volume_grassmann(4, 3, &beta, mc, seed.wrapping_add(1))?;
                let sigma = a.std_error.hypot(b.std_error);
                Ok(vec![Row::close(&id, "v(G(4,1)) vs v(G(4,3)), 3 sigma", a.value, b.value, 3.0 * sigma + 1e-9 * a.value)])
            })
        }));
    }
    run_cases(Experiment::Htvol.name(), cfg, cases)
}

/// Grassmannian girth duality, rank constancy, the geodesic correspondence and
/// the transpose isometry.
pub fn run_grassmann(cfg: &ExperimentConfig) -> Report {
    let mut cases: Vec<Case> = Vec::new();
    let gopts = GrassGirthOptions { starts: cfg.knobs.grass_starts, seed: 0x61e7 ^ cfg.seed, ..Default::default() };
    let mut norms: Vec<(String, Result<OperatorNormSpec>)> = vec![
        ("hs".into(), Ok(OperatorNormSpec::HilbertSchmidt)),
        ("spectral".into(), Ok(OperatorNormSpec::Spectral)),
    ];
    for (i, n) in cfg.norms.iter().enumerate() {
        norms.push((format!("user{i}"), n.build()));
    }
    for (name, beta) in norms {
        for n in [3usize, 4] {
            let (name, beta) = (name.clone(), beta.clone());
            cases.push(Box::new(move || {
                let id = format!("c10_girth_{name}_n{n}");
                guarded(&id, "grassmann girth", || {
                    let beta = beta.clone()?;
                    let a = grass_girth(n, 1, &beta, &gopts)?.length;
                    let b = grass_girth(n, n - 1, &beta, &gopts)?.length;
                    let mut rows = vec![Row::close(&id, &format!("girth G({n},1) vs G({n},{})", n - 1), a, b, 2e-2)];
                    if n == 3 && name == "hs" {
                        rows.push(Row::close(&id, "girth G(3,1) = 2 pi", a, TAU, 2e-2));
                    }
                    Ok(rows)
                })
            }));
        }
    }
    for (name, beta) in [("hs", OperatorNormSpec::HilbertSchmidt), ("spectral", OperatorNormSpec::Spectral), ("trace", OperatorNormSpec::Trace)] {
        cases.push(Box::new(move || {
            let id = format!("c10_transpose_isometry_{name}");
            guarded(&id, "transpose", || {
                let rep = transpose_isometry_check(&beta, 4, 1, 20, cfg.seed ^ 0x7a, false)?;
                Ok(vec![Row::at_most(&id, "max |phi(f) - phi_T(f*)|", rep.max_defect, 1e-5)])
            })
        }));
    }
    for i in 0..cfg.knobs.rank_flows as u64 {
        cases.push(Box::new(move || {
            let id = format!("c11_rank_flow_{i:02}");
            guarded(&id, "flow", || {
                let mut rng = case_rng(cfg, 400 + i);
                let base = GrassPoint::haar(&mut rng, 4, 2)?;
                let block = if i % 2 == 0 {
                    gaussian_matrix(&mut rng, 2, 2)
                } else {
                    gaussian_matrix(&mut rng, 2, 1) * gaussian_matrix(&mut rng, 1, 2)
                };
                let beta = if i % 4 < 2 { OperatorNormSpec::Spectral } else { OperatorNormSpec::Trace }.blended(0.9)?;
                let start = GrassCotangent::from_block(base, &block)?;
                let traj = grass_characteristic_flow(&beta, &start, 10.0, 0.01, &GrassFlowOptions::default())?;
                let ranks: Vec<usize> = traj.states.iter().map(|s| rank(&s.t, RANK_TOL)).collect();
                let spread = ranks.iter().max().unwrap_or(&0) - ranks.iter().min().unwrap_or(&0);
                Ok(vec![
                    Row::at_most(&id, "rank spread along the flow", spread as f64, 0.0),
                    Row::close(&id, "rank", ranks[0] as f64, 2.0 - (i % 2) as f64, 0.0),
                ])
            })
        }));
    }
    match constructed_geodesics() {
        Ok(list) => {
            for g in list {
                cases.push(Box::new(move || {
                    let id = format!("c12_correspondence_{}", g.name);
                    guarded(&id, "correspondence", || {
                        let beta = OperatorNormSpec::HilbertSchmidt;
                        let traj = grass_characteristic_flow(&beta, &g.start, g.period, g.period / 400.0, &GrassFlowOptions::default())?;
                        let rep = geodesic_correspondence_check(&beta, &traj, cfg.seed ^ 0xc0)?;
                        Ok(vec![
                            Row::close(&id, "length", rep.length.1, rep.length.0, 1e-3),
                            Row::close(&id, "rank", rep.rank.1 as f64, rep.rank.0 as f64, 0.0),
                            Row::close(&id, "closure kind matches", (rep.kind.0 == rep.kind.1) as u8 as f64, 1.0, 0.0),
                            Row::at_most(&id, "max gap(Omega_t, B_t Omega_0)", rep.transport_gap, 1e-4),
                        ])
                    })
                }));
            }
        }
        Err(e) => cases.push(Box::new(move || vec![Row::failed("c12_correspondence", "construct", &e)])),
    }
    cases.push(Box::new(move || {
        let id = "c12_invariant_complement";
        guarded(id, "instances", || {
            let mut rng = case_rng(cfg, 500);
            let (mut worst, mut failures) = (0.0f64, 0usize);
            for i in 0..cfg.knobs.complement_instances {
                let (n, k) = [(3, 1), (4, 2), (4, 1), (5, 2), (4, 3)][i % 5];
                let (t, lambda) = random_invariant_instance(&mut rng, n, k)?;
                match invariant_complement(&t, &lambda, i as u64) {
                    Ok(omega) => worst = worst.max(det_identity_defect(&t, &lambda, &omega)),
                    Err(_) => failures += 1,
                }
            }
            Ok(vec![
                Row::at_most(id, "max relative det defect", worst, 1e-6),
                Row::at_most(id, "instances without a complement", failures as f64, 0.0),
            ])
        })
    }));
    run_cases(Experiment::Grassmann.name(), cfg, cases)
}

/// Every suite, in one report.
pub fn run_all(cfg: &ExperimentConfig) -> Report {
    let start = Instant::now();
    let rows = [run_girth2d(cfg), run_girth3d(cfg), run_htvol(cfg), run_grassmann(cfg)]
        .into_iter()
        .flat_map(|r| r.rows)
        .collect();
    Report::new(Experiment::All.name(), cfg.seed, start.elapsed().as_secs_f64(), rows)
}

pub fn run(cfg: &ExperimentConfig) -> Report {
    match cfg.experiment {
        Experiment::Girth2d => run_girth2d(cfg),
        Experiment::Girth3d => run_girth3d(cfg),
        Experiment::Htvol => run_htvol(cfg),
        Experiment::Grassmann => run_grassmann(cfg),
        Experiment::All => run_all(cfg),
    }
}
