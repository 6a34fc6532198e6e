//! Lengths of discrete curves on `G̃(V,k)`, relaxed geodesic distances, the
//! girth, and the transpose isometry `Λ ↦ Λ^⊥`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::linalg::{complement, gaussian_matrix, principal_angles, qf, svd_sorted, Matrix};
use super::norms::{quotient_tangent_norm, quotient_tangent_norm_numeric, OperatorNormSpec, QuotientOptions};
use super::point::GrassPoint;
use crate::error::{Error, Result};
use crate::numeric::golden_section;

/// A discrete curve on an oriented Grassmannian; consecutive frames are kept aligned.
#[derive(Debug, Clone)]
pub struct GrassCurve {
    pub points: Vec<GrassPoint>,
}

impl GrassCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GrassDistanceOptions {
    pub segments: usize,
    pub coarse_segments: usize,
    pub max_sweeps: usize,
    pub rel_tol: f64,
}

impl Default for GrassDistanceOptions {
    fn default() -> Self {
        Self { segments: 64, coarse_segments: 8, max_sweeps: 60, rel_tol: 1e-10 }
    }
}

fn check_same_shape(a: &GrassPoint, b: &GrassPoint) -> Result<()> {
    if a.n() != b.n() || a.k() != b.k() {
        return Err(Error::DimensionMismatch { expected: a.n() * 100 + a.k(), got: b.n() * 100 + b.k() });
    }
    Ok(())
}

/// Re-expresses `b` in the frame of its plane closest to `a`'s frame.
fn aligned(a: &Matrix, b: &GrassPoint) -> GrassPoint {
    let (u, _, v) = svd_sorted(&(b.frame().transpose() * a));
    let r = u * v.transpose();
    let sign = r.determinant().signum();
    GrassPoint::from_parts(b.frame() * r, b.orientation() * sign)
}

/// `φ_β` length of the short segment from `a` to `b`, measured in the graph
/// chart centred at the midpoint frame.
pub fn segment_length(beta: &OperatorNormSpec, a: &GrassPoint, b: &GrassPoint) -> Result<f64> {
    check_same_shape(a, b)?;
    let ya = a.frame();
    let yb = aligned(ya, b);
    let ym = qf(&(ya + yb.frame()));
    let c = complement(&ym);
    let chart = |y: &Matrix| -> Result<Matrix> {
        let inv = (ym.transpose() * y)
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("segment too long for a graph chart".into()))?;
        Ok(c.transpose() * y * inv)
    };
    let f = chart(yb.frame())? - chart(ya)?;
    quotient_tangent_norm(beta, &GrassPoint::from_parts(ym, a.orientation()), &f)
}

pub fn polyline_length(beta: &OperatorNormSpec, curve: &GrassCurve) -> Result<f64> {
    let mut total = 0.0;
    for w in curve.points.windows(2) {
        total += segment_length(beta, &w[0], &w[1])?;
    }
    Ok(total)
}

/// The principal-angle path from `a` to `b`. When the orientations do not
/// match, the largest angle `θ` is traversed as `θ − π`, which lands on `b`
/// with the opposite frame sign.
pub fn principal_path(a: &GrassPoint, b: &GrassPoint, segments: usize) -> Result<GrassCurve> {
    check_same_shape(a, b)?;
    let k = a.k();
    let (u, cos, v) = svd_sorted(&(a.frame().transpose() * b.frame()));
    let ya = a.frame() * &u;
    let yb = b.frame() * &v;
    let start_orientation = a.orientation() * u.determinant().signum();
    let end_orientation = b.orientation() * v.determinant().signum();
    let mut theta: Vec<f64> = cos.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect();
    let mut q = Matrix::zeros(a.n(), k);
    let mut idle = Vec::new();
    for j in 0..k {
        let s = theta[j].sin();
        if s > 1e-12 {
            let col = (yb.column(j) - ya.column(j) * cos[j]) / s;
            q.set_column(j, &col.normalize());
        } else {
            idle.push(j);
        }
    }
    if !idle.is_empty() {
        // Directions orthogonal to the frame and to the active rotation partners
        // stay available for an orientation flip.
        let active: Vec<usize> = (0..k).filter(|j| !idle.contains(j)).collect();
        let mut taken = ya.clone();
        for &j in &active {
            taken = super::linalg::stack(&taken, &q.columns(j, 1).into_owned());
        }
        let spare = complement(&qf(&taken));
        for (i, &j) in idle.iter().enumerate() {
            q.set_column(j, &spare.column(i.min(spare.ncols() - 1)));
        }
    }
    if start_orientation != end_orientation {
        // Largest principal angle is the last one (cosines sorted decreasing).
        theta[k - 1] -= std::f64::consts::PI;
    }
    let points = (0..=segments)
        .map(|i| {
            let t = i as f64 / segments as f64;
            let mut y = Matrix::zeros(a.n(), k);
            for j in 0..k {
                let col = ya.column(j) * (t * theta[j]).cos() + q.column(j) * (t * theta[j]).sin();
                y.set_column(j, &col);
            }
            GrassPoint::from_parts(qf(&y), start_orientation)
        })
        .collect();
    Ok(GrassCurve { points })
}

/// Rotation by `π` of the line `y = Y α` towards `z = C γ`, ending at the antipode of `a`.
pub fn half_turn_path(a: &GrassPoint, alpha: &Matrix, gamma: &Matrix, segments: usize) -> GrassCurve {
    let y = (a.frame() * alpha).normalize();
    let z = (a.complement_frame() * gamma).normalize();
    let n = a.n();
    let points = (0..=segments)
        .map(|i| {
            let th = std::f64::consts::PI * i as f64 / segments as f64;
            let rot = Matrix::identity(n, n) + (&y * y.transpose() + &z * z.transpose()) * (th.cos() - 1.0)
                + (&z * y.transpose() - &y * z.transpose()) * th.sin();
            GrassPoint::from_parts(qf(&(rot * a.frame())), a.orientation())
        })
        .collect();
    GrassCurve { points }
}

fn local_energy(beta: &OperatorNormSpec, prev: &GrassPoint, p: &GrassPoint, next: &GrassPoint) -> f64 {
    match (segment_length(beta, prev, p), segment_length(beta, p, next)) {
        (Ok(a), Ok(b)) => a + b,
        _ => f64::INFINITY,
    }
}

/// Coordinate descent on interior points with QR-retraction moves; returns the final length.
pub fn relax(beta: &OperatorNormSpec, curve: &mut GrassCurve, opts: &GrassDistanceOptions) -> Result<f64> {
    let mut total = polyline_length(beta, curve)?;
    let m = curve.points.len();
    if m < 3 {
        return Ok(total);
    }
    let (n, k) = (curve.points[0].n(), curve.points[0].k());
    for _ in 0..opts.max_sweeps {
        let before = total;
        for i in 1..m - 1 {
            let comp = curve.points[i].complement_frame();
            let spread = curve.points[i - 1].gap(&curve.points[i + 1]).max(1e-6);
            let h = 0.5 * spread;
            for r in 0..n - k {
                for c in 0..k {
                    let (prev, next) = (&curve.points[i - 1], &curve.points[i + 1]);
                    let centre = curve.points[i].clone();
                    let moved = |d: f64| {
                        let mut e = Matrix::zeros(n - k, k);
                        e[(r, c)] = d;
                        centre.retract_with(&comp, &e)
                    };
                    let current = local_energy(beta, prev, &centre, next);
                    let (d, val) = golden_section(|d| local_energy(beta, prev, &moved(d), next), -h, h, 1e-5 * h);
                    if val < current {
                        curve.points[i] = moved(d);
                    }
                }
            }
        }
        total = polyline_length(beta, curve)?;
        if before - total <= opts.rel_tol * total {
            break;
        }
    }
    Ok(total)
}

/// Inserts the chart midpoint of every segment.
pub fn subdivide(curve: &GrassCurve) -> GrassCurve {
    let mut points = Vec::with_capacity(2 * curve.points.len());
    for w in curve.points.windows(2) {
        points.push(w[0].clone());
        let b = aligned(w[0].frame(), &w[1]);
        points.push(GrassPoint::from_parts(qf(&(w[0].frame() + b.frame())), w[0].orientation()));
    }
    points.extend(curve.points.last().cloned());
    GrassCurve { points }
}

/// Relaxes from `coarse_segments` up to `segments`, doubling each level.
pub fn relax_multilevel(
    beta: &OperatorNormSpec,
    mut curve: GrassCurve,
    opts: &GrassDistanceOptions,
) -> Result<(f64, GrassCurve)> {
    let mut length = relax(beta, &mut curve, opts)?;
    while curve.points.len() - 1 < opts.segments {
        curve = subdivide(&curve);
        length = relax(beta, &mut curve, opts)?;
    }
    Ok((length, curve))
}

/// `φ_β` distance between oriented planes with a witnessing polyline.
pub fn grass_distance(
    beta: &OperatorNormSpec,
    a: &GrassPoint,
    b: &GrassPoint,
    opts: &GrassDistanceOptions,
) -> Result<(f64, GrassCurve)> {
    check_same_shape(a, b)?;
    if a.same_oriented(b, 1e-12) {
        return Ok((0.0, GrassCurve { points: vec![a.clone()] }));
    }
    let start = principal_path(a, b, opts.coarse_segments.max(2))?;
    relax_multilevel(beta, start, opts)
}

#[derive(Debug, Clone, Copy)]
pub struct GrassGirthOptions {
    pub starts: usize,
    /// Rotation planes tried per start (coordinate pairs first, then random).
    pub directions: usize,
    pub relax_best: usize,
    pub pattern_rounds: usize,
    pub seed: u64,
    pub distance: GrassDistanceOptions,
}

impl Default for GrassGirthOptions {
    fn default() -> Self {
        Self { starts: 12, directions: 6, relax_best: 3, pattern_rounds: 6, seed: 0x61e7, distance: Default::default() }
    }
}

#[derive(Debug, Clone)]
pub struct GrassGirth {
    pub length: f64,
    pub curve: GrassCurve,
}

#[derive(Clone)]
struct Candidate {
    length: f64,
    base: GrassPoint,
    alpha: Matrix,
    gamma: Matrix,
}

/// `2 · min_Λ dist(Λ, Λ̄)` over Haar-sampled starts, refined by pattern search on `Λ`.
pub fn grass_girth(n: usize, k: usize, beta: &OperatorNormSpec, opts: &GrassGirthOptions) -> Result<GrassGirth> {
    if k == 0 || k >= n || n > 5 {
        return Err(Error::InvalidInput(format!("girth needs 0 < k < n ≤ 5, got n={n}, k={k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut seeds = Vec::new();
    for _ in 0..opts.starts {
        let base = GrassPoint::haar(&mut rng, n, k)?;
        for d in 0..opts.directions {
            let (alpha, gamma) = if d < k * (n - k) {
                let mut a = Matrix::zeros(k, 1);
                a[d % k] = 1.0;
                let mut g = Matrix::zeros(n - k, 1);
                g[d / k] = 1.0;
                (a, g)
            } else {
                (gaussian_matrix(&mut rng, k, 1), gaussian_matrix(&mut rng, n - k, 1))
            };
            seeds.push((base.clone(), alpha, gamma));
        }
    }
    let coarse = opts.distance.coarse_segments.max(4);
    let mut cands: Vec<Candidate> = seeds
        .into_par_iter()
        .map(|(base, alpha, gamma)| {
            let path = half_turn_path(&base, &alpha, &gamma, coarse);
            let length = polyline_length(beta, &path).unwrap_or(f64::INFINITY);
            Candidate { length, base, alpha, gamma }
        })
        .collect();
    cands.sort_by(|a, b| a.length.total_cmp(&b.length));
    cands.truncate(opts.relax_best.max(1));

    let coarse_opts = GrassDistanceOptions { segments: 2 * coarse, ..opts.distance };
    let evaluate = |c: &Candidate, o: &GrassDistanceOptions| -> Result<(f64, GrassCurve)> {
        relax_multilevel(beta, half_turn_path(&c.base, &c.alpha, &c.gamma, o.coarse_segments.max(4)), o)
    };
    let relaxed: Vec<Result<(f64, Candidate)>> = cands
        .par_iter()
        .map(|c| Ok((evaluate(c, &coarse_opts)?.0, c.clone())))
        .collect();
    let mut best: Option<(f64, Candidate)> = None;
    for r in relaxed {
        let (len, c) = r?;
        if best.as_ref().is_none_or(|b| len < b.0) {
            best = Some((len, c));
        }
    }
    let (mut best_len, mut best) = best.expect("at least one candidate");

    // Pattern search over the base plane at coarse resolution.
    let mut step = 0.25;
    for _ in 0..opts.pattern_rounds {
        let mut improved = false;
        for r in 0..n - k {
            for c in 0..k {
                for sign in [1.0, -1.0] {
                    let mut e = Matrix::zeros(n - k, k);
                    e[(r, c)] = sign * step;
                    let moved = Candidate { base: best.base.retract(&e), ..best.clone() };
                    let (len, _) = evaluate(&moved, &coarse_opts)?;
                    if len < best_len - 1e-12 {
                        best_len = len;
                        best = moved;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    let (length, curve) = evaluate(&best, &opts.distance)?;
    Ok(GrassGirth { length: 2.0 * length, curve })
}

#[derive(Debug, Clone, Copy)]
pub struct TransposeReport {
    pub samples: usize,
    pub max_defect: f64,
    pub passed: bool,
}

/// Checks `β_π(Λ; f) = β̄_π(Λ^⊥; −fᵀ)` on random samples (relative tolerance `1e−5`).
/// With `numeric`, both sides go through the subgradient optimizer.
pub fn transpose_isometry_check(
    beta: &OperatorNormSpec,
    n: usize,
    k: usize,
    samples: usize,
    seed: u64,
    numeric: bool,
) -> Result<TransposeReport> {
    let bar = beta.transposed()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_defect: f64 = 0.0;
    let qopts = QuotientOptions::default();
    let eval = |b: &OperatorNormSpec, l: &GrassPoint, f: &Matrix| -> Result<f64> {
        if numeric {
            Ok(quotient_tangent_norm_numeric(b, l, f, &qopts)?.value)
        } else {
            quotient_tangent_norm(b, l, f)
        }
    };
    for _ in 0..samples {
        let lambda = GrassPoint::haar(&mut rng, n, k)?;
        let f = gaussian_matrix(&mut rng, n - k, k);
        let ann = lambda.annihilator();
        // Λ^⊥ has frame C; its complement basis D spans Λ. f* = −fᵀ maps C-coordinates to Y-coordinates.
        let d = ann.complement_frame();
        let fstar = -(d.transpose() * lambda.frame()) * f.transpose();
        let lhs = eval(beta, &lambda, &f)?;
        let rhs = eval(&bar, &ann, &fstar)?;
        max_defect = max_defect.max((lhs - rhs).abs() / lhs.max(1e-300));
    }
    Ok(TransposeReport { samples, max_defect, passed: max_defect <= 1e-5 })
}

/// Principal angles between two planes (orientation ignored).
pub fn grass_principal_angles(a: &GrassPoint, b: &GrassPoint) -> Vec<f64> {
    principal_angles(a.frame(), b.frame())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn plane_at_angles(t1: f64, t2: f64) -> (GrassPoint, GrassPoint) {
        let a = GrassPoint::coordinate(4, 2).unwrap();
        let mut y = Matrix::zeros(4, 2);
        y[(0, 0)] = t1.cos();
        y[(2, 0)] = t1.sin();
        y[(1, 1)] = t2.cos();
        y[(3, 1)] = t2.sin();
        (a, GrassPoint::new(y, 1.0).unwrap())
    }

    #[test]
    fn hs_distance_is_angle_norm() {
        let (a, b) = plane_at_angles(0.7, 0.3);
        let (d, curve) = grass_distance(&OperatorNormSpec::HilbertSchmidt, &a, &b, &Default::default()).unwrap();
        assert!((d - (0.49f64 + 0.09).sqrt()).abs() < 1e-3, "{d}");
        assert!(curve.points.last().unwrap().same_oriented(&b, 1e-9));
    }

    #[test]
    fn distance_to_self_is_zero() {
        let (a, _) = plane_at_angles(0.0, 0.0);
        assert_eq!(grass_distance(&OperatorNormSpec::Spectral, &a, &a, &Default::default()).unwrap().0, 0.0);
    }

    #[test]
    fn antipodal_distance_on_sphere() {
        let a = GrassPoint::coordinate(3, 1).unwrap();
        let (d, curve) =
            grass_distance(&OperatorNormSpec::HilbertSchmidt, &a, &a.antipode(), &Default::default()).unwrap();
        assert!((d - PI).abs() < 2e-3, "{d}");
        assert!(curve.points.last().unwrap().same_oriented(&a.antipode(), 1e-9));
    }

    #[test]
    fn girth_of_round_sphere() {
        let opts = GrassGirthOptions { starts: 3, ..Default::default() };
        let g = grass_girth(3, 1, &OperatorNormSpec::HilbertSchmidt, &opts).unwrap();
        assert!((g.length - 2.0 * PI).abs() < 2e-2, "{}", g.length);
    }

    #[test]
    fn transpose_isometry_for_trio() {
        for beta in [OperatorNormSpec::HilbertSchmidt, OperatorNormSpec::Spectral, OperatorNormSpec::Trace] {
            let r = transpose_isometry_check(&beta, 4, 2, 10, 1, false).unwrap();
            assert!(r.passed, "{} {}", beta.name(), r.max_defect);
        }
    }
}
