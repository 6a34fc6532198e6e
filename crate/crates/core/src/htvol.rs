//! Holmes–Thompson volume `(1/n!) ∫ ωⁿ` of the unit co-ball bundle, computed
//! in charts as chart measure times the area of the dual unit ball.

use crate::bodies::{ConvexBody, SphereMesh, Vector};
use crate::error::{Error, Result};
use crate::geodesy::girth_2d_closed_form;
use crate::grassmann::OperatorNormSpec;
use crate::numeric::periodic_trapezoid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HtMethod {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtEstimate {
    pub value: f64,
    /// Resolution-doubling difference for quadrature, standard error for Monte Carlo.
    pub std_error: f64,
    pub method: HtMethod,
}

/// `v_HT` of the curve `(∂K, φ_L)` in the plane: the co-ball over each point is
/// an interval of half-length equal to the speed, so the volume is twice the length.
pub fn ht_volume_curve(k: &ConvexBody, l: &ConvexBody) -> Result<HtEstimate> {
    if k.dim() != 2 {
        return Err(Error::UnsupportedDimension(k.dim()));
    }
    Ok(HtEstimate { value: 2.0 * girth_2d_closed_form(k, l)?, std_error: 0.0, method: HtMethod::Quadrature })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartFamily {
    Icosahedral,
    Octahedral,
}

#[derive(Debug, Clone, Copy)]
pub struct SurfaceOptions {
    pub chart: ChartFamily,
    /// Mesh frequency of the coarse level; the estimate uses twice this.
    pub frequency: usize,
    /// Angular nodes for the area of each dual unit ball.
    pub fiber_nodes: usize,
}

impl Default for SurfaceOptions {
    fn default() -> Self {
        Self { chart: ChartFamily::Icosahedral, frequency: 8, fiber_nodes: 256 }
    }
}

/// Degree-5 seven-point rule on a triangle: barycentric points and weights.
const DUNAVANT5: [([f64; 3], f64); 7] = [
    ([1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], 0.225),
    ([0.059_715_871_789_770, 0.470_142_064_105_115, 0.470_142_064_105_115], 0.132_394_152_788_506),
    ([0.470_142_064_105_115, 0.059_715_871_789_770, 0.470_142_064_105_115], 0.132_394_152_788_506),
    ([0.470_142_064_105_115, 0.470_142_064_105_115, 0.059_715_871_789_770], 0.132_394_152_788_506),
    ([0.797_426_985_353_087, 0.101_286_507_323_456, 0.101_286_507_323_456], 0.125_939_180_544_827),
    ([0.101_286_507_323_456, 0.797_426_985_353_087, 0.101_286_507_323_456], 0.125_939_180_544_827),
    ([0.101_286_507_323_456, 0.101_286_507_323_456, 0.797_426_985_353_087], 0.125_939_180_544_827),
];

/// `∫_M |B*_q| dq` over `∂K`, charted by the flat triangles of a sphere mesh
/// scaled onto `∂K` and projected radially.
///
/// At a chart point `x` with `q = x / gauge_K(x)` and orthonormal in-plane
/// coordinates `e_1, e_2`, the chart covector `c` corresponds to the ambient
/// covector `p` with `p(q) = 0` and `p(e_i) = c_i · gauge_K(x)`. The fiber is
/// `{c : dual_norm(q, p) <= 1}`, whose area is `½ ∫ r(θ)² dθ`.
pub fn surface_volume<F>(k: &ConvexBody, mesh: &SphereMesh, fiber_nodes: usize, dual_norm: F) -> f64
where
    F: Fn(&Vector, &Vector) -> f64,
{
    let verts: Vec<Vector> = mesh.vertices.iter().map(|u| k.to_boundary(u)).collect();
    let mut total = 0.0;
    for tri in &mesh.triangles {
        let (a, b, c) = (&verts[tri[0]], &verts[tri[1]], &verts[tri[2]]);
        let (ab, ac) = (b - a, c - a);
        let normal = ab.cross(&ac);
        let area = 0.5 * normal.norm();
        let e1 = ab.normalize();
        let e2 = normal.cross(&e1).normalize();
        for (bary, w) in DUNAVANT5 {
            let x = a * bary[0] + b * bary[1] + c * bary[2];
            let g = k.gauge_unchecked(&x);
            let q = &x / g;
            // p = Σ c_i f_i with f_i the dual basis of (e_1, e_2) on q^⊥ scaled by g
            let basis = dual_frame(&q, &e1, &e2, g);
            let fiber = 0.5
                * periodic_trapezoid(
                    |t| {
                        let p = &basis.0 * t.cos() + &basis.1 * t.sin();
                        dual_norm(&q, &p).powi(-2)
                    },
                    fiber_nodes,
                );
            total += w * area * fiber;
        }
    }
    total
}

/// Covectors `f_1, f_2` with `f_i(q) = 0` and `f_i(e_j) = g δ_ij`.
fn dual_frame(q: &Vector, e1: &Vector, e2: &Vector, g: f64) -> (Vector, Vector) {
    let m = nalgebra::Matrix3::new(q[0], q[1], q[2], e1[0], e1[1], e1[2], e2[0], e2[1], e2[2]);
    let inv = m.try_inverse().expect("chart plane is transverse to the radius");
    let col = |j: usize| Vector::from_vec(vec![inv[(0, j)] * g, inv[(1, j)] * g, inv[(2, j)] * g]);
    (col(1), col(2))
}

fn mesh_for(chart: ChartFamily, freq: usize) -> SphereMesh {
    match chart {
        ChartFamily::Icosahedral => SphereMesh::icosahedral(freq),
        ChartFamily::Octahedral => SphereMesh::octahedral(freq),
    }
}

/// Runs [`surface_volume`] at the configured frequency and at twice it; the
/// finer value is returned with the difference as its error estimate.
pub fn surface_estimate<F>(k: &ConvexBody, opts: &SurfaceOptions, dual_norm: F) -> HtEstimate
where
    F: Fn(&Vector, &Vector) -> f64,
{
    let coarse = surface_volume(k, &mesh_for(opts.chart, opts.frequency), opts.fiber_nodes, &dual_norm);
    let fine = surface_volume(k, &mesh_for(opts.chart, 2 * opts.frequency), opts.fiber_nodes, &dual_norm);
    HtEstimate { value: fine, std_error: (fine - coarse).abs(), method: HtMethod::Quadrature }
}

/// `v_HT(∂K, φ_L)` for bodies in space. The dual norm at `q` is the support function of `L`.
pub fn ht_volume_surface(k: &ConvexBody, l: &ConvexBody, opts: &SurfaceOptions) -> Result<HtEstimate> {
    if k.dim() != 3 {
        return Err(Error::UnsupportedDimension(k.dim()));
    }
    if l.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: l.dim() });
    }
    Ok(surface_estimate(k, opts, |_, p| l.support_unchecked(p)))
}

/// Seed of the reference Monte Carlo runs.
pub const GRASS_MC_SEED: u64 = 0xF165;
pub const GRASS_MC_SAMPLES: usize = 2_000_000;
const MC_CHUNKS: usize = 64;

/// `β*` of the rank-one operator `a bᵀ`.
fn rank_one_dual(beta: &OperatorNormSpec, a: &Vector, b: &Vector) -> f64 {
    if beta.is_unitarily_invariant() {
        // the only singular value is |a||b|
        let mut d = crate::grassmann::Matrix::zeros(a.len(), a.len());
        d[(0, 0)] = a.norm() * b.norm();
        return beta.dual_norm(&d).unwrap_or(f64::NAN);
    }
    beta.dual_norm(&(a * b.transpose())).unwrap_or(f64::NAN)
}

/// `v_HT(G̃(V,k), φ_β)` for `(n,k) ∈ {(3,1),(3,2),(4,1),(4,3)}`.
///
/// The line `span(q)` has cotangents `q pᵀ` with `p(q) = 0`, and the plane
/// `q^⊥` has cotangents `p qᵀ`; both are paired with the velocity of `q`, so
/// each of these Grassmannians is the unit sphere with fibers
/// `{p ⊥ q : β*(q pᵀ) ≤ 1}` (or `β*(p qᵀ)`). For `n = 3` the surface pipeline
/// is reused and `samples` is ignored. For `n = 4` the base point is uniform on
/// `S³` and the fiber volume `⅓ ∫ r³` uses one uniform direction of `q^⊥` per sample.
pub fn ht_volume_grassmann(n: usize, k: usize, beta: &OperatorNormSpec, samples: usize, seed: u64) -> Result<HtEstimate> {
    if !matches!((n, k), (3, 1) | (3, 2) | (4, 1) | (4, 3)) {
        return Err(Error::InvalidInput(format!("Grassmannian volume supports (3,1),(3,2),(4,1),(4,3); got ({n},{k})")));
    }
    if !beta.has_exact_dual() {
        return Err(Error::InvalidInput(format!("volume needs a closed-form dual norm; {} has none", beta.name())));
    }
    let line = k == 1;
    let dual = |q: &Vector, p: &Vector| if line { rank_one_dual(beta, q, p) } else { rank_one_dual(beta, p, q) };
    let estimate = if n == 3 {
        surface_estimate(&ConvexBody::euclidean_ball(3), &SurfaceOptions::default(), dual)
    } else {
        if samples < 2 * MC_CHUNKS {
            return Err(Error::InvalidInput(format!("need at least {} samples", 2 * MC_CHUNKS)));
        }
        let per = samples / MC_CHUNKS;
        let sums: Vec<(f64, f64)> = (0..MC_CHUNKS)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let (mut s1, mut s2) = (0.0, 0.0);
                for _ in 0..per {
                    let q = gaussian(&mut rng).normalize();
                    let g = gaussian(&mut rng);
                    let u = (&g - &q * q.dot(&g)).normalize();
                    let r3 = dual(&q, &u).powi(-3);
                    s1 += r3;
                    s2 += r3 * r3;
                }
                (s1, s2)
            })
            .collect();
        let count = (per * MC_CHUNKS) as f64;
        let (s1, s2) = sums.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let mean = s1 / count;
        let var = (s2 / count - mean * mean).max(0.0) * count / (count - 1.0);
        // |S³| · |S²| / 3
        let scale = 2.0 * PI * PI * 4.0 * PI / 3.0;
        HtEstimate { value: scale * mean, std_error: scale * (var / count).sqrt(), method: HtMethod::MonteCarlo }
    };
    if !estimate.value.is_finite() {
        return Err(Error::Degenerate("dual norm evaluation failed".into()));
    }
    Ok(estimate)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Vector {
    Vector::from_fn(4, |_, _| rng.sample(StandardNormal))
}

/// Area of the planar star body `{r u(θ) : r <= radius(θ)}` by the periodic trapezoid rule.
pub fn radial_area<F: Fn(f64) -> f64>(radius: F, nodes: usize) -> f64 {
    0.5 * periodic_trapezoid(|t| radius(t).powi(2), nodes)
}
