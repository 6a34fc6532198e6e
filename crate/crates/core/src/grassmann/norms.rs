//! Norms on `Hom(V,V)`, their trace duals, and the induced quotient norm on
//! tangent spaces `Hom(Λ, V/Λ)`.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linalg::{gaussian_matrix, svd_sorted, Matrix};
use super::point::GrassPoint;
use crate::bodies::{ConvexBody, Vector};
use crate::error::{Error, Result};

/// Boundary sample size standing in for the extreme points of a smooth `K`.
pub const OP_GAUGE_SAMPLES: usize = 2048;

/// Default weight of the non-smooth part in HS-regularized blends.
pub const DEFAULT_BLEND: f64 = 0.9;

/// `β(T) = max_{x ∈ ∂K} gauge_L(T x)`, maximized over vertices of `K` or a boundary sample.
#[derive(Debug, Clone)]
pub struct OpGauge {
    k: ConvexBody,
    l: ConvexBody,
    points: Vec<Vector>,
}

impl OpGauge {
    pub fn new(k: ConvexBody, l: ConvexBody) -> Result<Self> {
        if k.dim() != l.dim() {
            return Err(Error::DimensionMismatch { expected: k.dim(), got: l.dim() });
        }
        let points = k.extreme_points(OP_GAUGE_SAMPLES)?;
        Ok(Self { k, l, points })
    }

    pub fn k(&self) -> &ConvexBody {
        &self.k
    }

    pub fn l(&self) -> &ConvexBody {
        &self.l
    }

    fn argmax(&self, t: &Matrix) -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for (i, x) in self.points.iter().enumerate() {
            let v = self.l.gauge_unchecked(&(t * x));
            if v > best.0 {
                best = (v, i);
            }
        }
        best
    }

    /// When `K` has exactly `n` pairs of opposite vertices forming a basis `X`,
    /// the unit ball is `{T : T x_j ∈ L}` with independent constraints, and
    /// `β*(S) = Σ_j h_L(row_j(X⁻¹ S))`.
    fn cross_basis(&self) -> Option<Matrix> {
        let n = self.k.dim();
        let cross_polytope = matches!(self.k, ConvexBody::LpBall { p, .. } if p == 1.0);
        if !(self.k.is_polytope() || cross_polytope) || self.points.len() != 2 * n {
            return None;
        }
        let mut chosen: Vec<Vector> = Vec::new();
        for p in &self.points {
            if !chosen.iter().any(|c| (c + p).norm() < 1e-12 || (c - p).norm() < 1e-12) {
                chosen.push(p.clone());
            }
        }
        if chosen.len() != n {
            return None;
        }
        let x = Matrix::from_columns(&chosen);
        if x.determinant().abs() < 1e-12 {
            return None;
        }
        Some(x)
    }
}

/// The menu of norms `β` on `n×n` matrices.
#[derive(Debug, Clone)]
pub enum OperatorNormSpec {
    HilbertSchmidt,
    Spectral,
    Trace,
    OpGauge(Box<OpGauge>),
    /// `(1 − weight)·HS + weight·base`, used to smooth non-smooth norms for flows.
    Blend { weight: f64, base: Box<OperatorNormSpec> },
}

/// Symmetric gauges on singular values; the unitarily invariant part of the menu.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SvGauge {
    L2,
    Linf,
    L1,
    L2Linf(f64),
    L2L1(f64),
}

impl SvGauge {
    pub(crate) fn value(&self, s: &[f64]) -> f64 {
        let l2 = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        let linf = s.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let l1 = s.iter().map(|x| x.abs()).sum::<f64>();
        match *self {
            Self::L2 => l2,
            Self::Linf => linf,
            Self::L1 => l1,
            Self::L2Linf(w) => (1.0 - w) * l2 + w * linf,
            Self::L2L1(w) => (1.0 - w) * l2 + w * l1,
        }
    }

    /// A subgradient at `s` (sorted decreasing, nonnegative).
    fn subgradient(&self, s: &[f64]) -> Vec<f64> {
        let l2 = s.iter().map(|x| x * x).sum::<f64>().sqrt();
        let g2: Vec<f64> = s.iter().map(|x| if l2 > 0.0 { x / l2 } else { 0.0 }).collect();
        let ginf: Vec<f64> = (0..s.len()).map(|i| if i == 0 && l2 > 0.0 { 1.0 } else { 0.0 }).collect();
        let tiny = 1e-14 * s.first().copied().unwrap_or(0.0);
        let g1: Vec<f64> = s.iter().map(|&x| if x > tiny { 1.0 } else { 0.0 }).collect();
        let mix = |w: f64, a: &[f64]| g2.iter().zip(a).map(|(p, q)| (1.0 - w) * p + w * q).collect();
        match *self {
            Self::L2 => g2.clone(),
            Self::Linf => ginf,
            Self::L1 => g1,
            Self::L2Linf(w) => mix(w, &ginf),
            Self::L2L1(w) => mix(w, &g1),
        }
    }

    /// `max {⟨s, x⟩ : gauge(x) ≤ 1}` and its maximizer, for `s` sorted decreasing and nonnegative.
    pub(crate) fn dual_max(&self, s: &[f64]) -> (f64, Vec<f64>) {
        let m = s.len();
        if s.iter().all(|&x| x == 0.0) {
            return (0.0, vec![0.0; m]);
        }
        let x = match *self {
            Self::L2 => {
                let n = s.iter().map(|x| x * x).sum::<f64>().sqrt();
                s.iter().map(|x| x / n).collect()
            }
            Self::Linf => s.iter().map(|&x| if x > 0.0 { 1.0 } else { 0.0 }).collect(),
            Self::L1 => (0..m).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
            Self::L2Linf(w) => capped_maximizer(s, w),
            Self::L2L1(w) => shrunk_maximizer(s, w),
        };
        let scale = self.value(&x);
        let x: Vec<f64> = x.iter().map(|v| v / scale).collect();
        (s.iter().zip(&x).map(|(a, b)| a * b).sum(), x)
    }
}

/// Maximizer of `⟨s,x⟩` under `(1−w)|x|₂ + w·max x ≤ 1`: the top `c` entries are
/// capped at `t` and the rest are `a·s_i`; stationarity in `t` gives
/// `a = (c t + w ρ/(1−w)) / S_c` with `ρ = (1 − w t)/(1 − w)`, and the norm
/// constraint `c t² + a² Σ_{i>c} s_i² = ρ²` is a quadratic in `t`.
fn capped_maximizer(s: &[f64], w: f64) -> Vec<f64> {
    let m = s.iter().filter(|&&x| x > 0.0).count();
    let (r0, r1) = (1.0 / (1.0 - w), -w / (1.0 - w));
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |x: Vec<f64>| {
        let g = SvGauge::L2Linf(w).value(&x);
        if g <= 0.0 || !g.is_finite() {
            return;
        }
        let v: f64 = s.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / g;
        if best.as_ref().is_none_or(|b| v > b.0) {
            best = Some((v, x));
        }
    };
    for c in 1..=m {
        let sc: f64 = s[..c].iter().sum();
        let s2: f64 = s[c..m].iter().map(|x| x * x).sum();
        if c == m {
            let t = 1.0 / ((1.0 - w) * (c as f64).sqrt() + w);
            consider((0..s.len()).map(|i| if i < c { t } else { 0.0 }).collect());
            continue;
        }
        // a(t) = α0 + α1 t
        let alpha0 = w * r0 / ((1.0 - w) * sc);
        let alpha1 = (c as f64 + w * r1 / (1.0 - w)) / sc;
        let qa = c as f64 + s2 * alpha1 * alpha1 - r1 * r1;
        let qb = 2.0 * (s2 * alpha0 * alpha1 - r0 * r1);
        let qc = s2 * alpha0 * alpha0 - r0 * r0;
        for t in quadratic_roots(qa, qb, qc) {
            if !(t > 0.0 && t <= 1.0 + 1e-12) {
                continue;
            }
            let a = alpha0 + alpha1 * t;
            if a <= 0.0 {
                continue;
            }
            let tol = 1e-12 * t;
            if a * s[c - 1] < t - tol || a * s[c] > t + tol {
                continue;
            }
            consider(s.iter().enumerate().map(|(i, &si)| if i < c { t } else { (a * si).min(t) }).collect());
        }
    }
    best.map(|b| b.1).unwrap_or_else(|| s.iter().map(|&x| if x > 0.0 { 1.0 } else { 0.0 }).collect())
}

/// Maximizer of `⟨s,x⟩` under `(1−w)|x|₂ + w|x|₁ ≤ 1`: `x ∝ (s − τ)₊` with
/// `|(s − τ)₊|₂ = τ (1−w)/w`.
fn shrunk_maximizer(s: &[f64], w: f64) -> Vec<f64> {
    let m = s.iter().filter(|&&x| x > 0.0).count();
    let kappa = (1.0 - w) / w;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for c in 1..=m {
        let sc: f64 = s[..c].iter().sum();
        let qc: f64 = s[..c].iter().map(|x| x * x).sum();
        for tau in quadratic_roots(c as f64 - kappa * kappa, -2.0 * sc, qc) {
            let lo = if c < m { s[c] } else { 0.0 };
            if tau < lo - 1e-12 * s[0] || tau >= s[c - 1] {
                continue;
            }
            let x: Vec<f64> = s.iter().map(|&si| (si - tau).max(0.0)).collect();
            let g = SvGauge::L2L1(w).value(&x);
            let v: f64 = s.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / g;
            if best.as_ref().is_none_or(|b| v > b.0) {
                best = Some((v, x));
            }
        }
    }
    best.map(|b| b.1).unwrap_or_else(|| (0..s.len()).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect())
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-14 * (b.abs() + c.abs()) {
        return if b != 0.0 { vec![-c / b] } else { vec![] };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return if disc > -1e-12 * b * b { vec![-b / (2.0 * a)] } else { vec![] };
    }
    // Stable form avoiding cancellation.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut r = Vec::new();
    if q != 0.0 {
        r.push(c / q);
        r.push(q / a);
    } else {
        r.push(0.0);
    }
    r
}

impl OperatorNormSpec {
    pub fn op_gauge(k: ConvexBody, l: ConvexBody) -> Result<Self> {
        Ok(Self::OpGauge(Box::new(OpGauge::new(k, l)?)))
    }

    /// `(1 − weight)·HS + weight·self`.
    pub fn blended(self, weight: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&weight) {
            return Err(Error::InvalidInput(format!("blend weight must lie in [0,1), got {weight}")));
        }
        Ok(Self::Blend { weight, base: Box::new(self) })
    }

    pub fn name(&self) -> String {
        match self {
            Self::HilbertSchmidt => "hs".into(),
            Self::Spectral => "spectral".into(),
            Self::Trace => "trace".into(),
            Self::OpGauge(_) => "op_gauge".into(),
            Self::Blend { weight, base } => format!("blend({weight},{})", base.name()),
        }
    }

    pub(crate) fn sv_gauge(&self) -> Option<SvGauge> {
        match self {
            Self::HilbertSchmidt => Some(SvGauge::L2),
            Self::Spectral => Some(SvGauge::Linf),
            Self::Trace => Some(SvGauge::L1),
            Self::OpGauge(_) => None,
            Self::Blend { weight, base } => match base.sv_gauge()? {
                SvGauge::L2 => Some(SvGauge::L2),
                SvGauge::Linf => Some(SvGauge::L2Linf(*weight)),
                SvGauge::L1 => Some(SvGauge::L2L1(*weight)),
                _ => None,
            },
        }
    }

    /// Whether the norm is invariant under `T ↦ U T W` for orthogonal `U, W`.
    pub fn is_unitarily_invariant(&self) -> bool {
        self.sv_gauge().is_some()
    }

    /// Whether `β*` is differentiable away from 0 with a closed-form gradient,
    /// which is what the characteristic flow needs.
    pub fn has_smooth_dual(&self) -> bool {
        matches!(self.sv_gauge(), Some(SvGauge::L2 | SvGauge::L2Linf(_) | SvGauge::L2L1(_)))
    }

    fn check(&self, t: &Matrix) -> Result<()> {
        if t.nrows() != t.ncols() {
            return Err(Error::InvalidInput(format!("expected a square matrix, got {}×{}", t.nrows(), t.ncols())));
        }
        if let Self::OpGauge(g) = self {
            if g.k.dim() != t.nrows() {
                return Err(Error::DimensionMismatch { expected: g.k.dim(), got: t.nrows() });
            }
        }
        if let Self::Blend { base, .. } = self {
            base.check(t)?;
        }
        Ok(())
    }

    /// `β(T)`.
    pub fn norm(&self, t: &Matrix) -> Result<f64> {
        self.check(t)?;
        Ok(self.norm_unchecked(t))
    }

    pub(crate) fn norm_unchecked(&self, t: &Matrix) -> f64 {
        if let Some(g) = self.sv_gauge() {
            return g.value(&super::linalg::singular_values(t));
        }
        match self {
            Self::OpGauge(g) => g.argmax(t).0,
            Self::Blend { weight, base } => (1.0 - weight) * t.norm() + weight * base.norm_unchecked(t),
            _ => unreachable!("unitarily invariant norms handled above"),
        }
    }

    /// A Frobenius subgradient `G` with `⟨G, T⟩_F = β(T)`.
    pub(crate) fn subgradient(&self, t: &Matrix) -> Matrix {
        if let Some(g) = self.sv_gauge() {
            let (u, s, v) = svd_sorted(t);
            let d = g.subgradient(&s);
            return &u * Matrix::from_diagonal(&DVector::from_vec(d)) * v.transpose();
        }
        match self {
            Self::OpGauge(g) => {
                let (_, i) = g.argmax(t);
                let x = &g.points[i];
                let y = t * x;
                if y.norm() == 0.0 {
                    return Matrix::zeros(t.nrows(), t.ncols());
                }
                g.l.gauge_gradient(&y) * x.transpose()
            }
            Self::Blend { weight, base } => {
                let n = t.norm();
                let hs = if n > 0.0 { t / n } else { Matrix::zeros(t.nrows(), t.ncols()) };
                hs * (1.0 - weight) + base.subgradient(t) * *weight
            }
            _ => unreachable!(),
        }
    }

    /// `β̄(T) = β(Tᵀ)`.
    pub fn transposed(&self) -> Result<Self> {
        Ok(match self {
            Self::HilbertSchmidt | Self::Spectral | Self::Trace => self.clone(),
            Self::OpGauge(g) => Self::op_gauge(g.l.polar(), g.k.polar())?,
            Self::Blend { weight, base } => Self::Blend { weight: *weight, base: Box::new(base.transposed()?) },
        })
    }

    /// Whether `β*` has a closed form (unitarily invariant gauges, and operator
    /// gauges whose `K` is a cross-polytope).
    pub fn has_exact_dual(&self) -> bool {
        match self {
            Self::OpGauge(g) => g.cross_basis().is_some(),
            _ => self.sv_gauge().is_some(),
        }
    }

    /// `β*(S) = sup { tr(S T) : β(T) ≤ 1 }`.
    pub fn dual_norm(&self, s: &Matrix) -> Result<f64> {
        Ok(self.dual_with_maximizer(s)?.0)
    }

    /// `β*(S)` together with a maximizer `T` (`β(T) = 1`). For smooth `β*` the
    /// maximizer is the gradient of `β*` at `S` in the trace pairing.
    pub fn dual_with_maximizer(&self, s: &Matrix) -> Result<(f64, Matrix)> {
        self.check(s)?;
        if let Some(g) = self.sv_gauge() {
            let (u, sv, v) = svd_sorted(s);
            let (value, x) = g.dual_max(&sv);
            return Ok((value, &v * Matrix::from_diagonal(&DVector::from_vec(x)) * u.transpose()));
        }
        if let Self::OpGauge(g) = self {
            if let Some(x) = g.cross_basis() {
                let xi = x.clone().try_inverse().expect("checked invertible");
                let rows = &xi * s;
                let n = s.nrows();
                let mut value = 0.0;
                let mut images = Vec::with_capacity(n);
                for j in 0..n {
                    let r: Vector = rows.row(j).transpose();
                    value += g.l.support_unchecked(&r);
                    images.push(g.l.support_point(&r));
                }
                let t = Matrix::from_columns(&images) * xi;
                return Ok((value, t));
            }
        }
        self.dual_ascent(s, &DualAscentOptions::default())
    }

    /// Subgradient ascent on `tr(S T)/β(T)` with restarts, for norms without a closed-form dual.
    pub fn dual_ascent(&self, s: &Matrix, opts: &DualAscentOptions) -> Result<(f64, Matrix)> {
        self.check(s)?;
        let n = s.nrows();
        if s.norm() == 0.0 {
            return Ok((0.0, Matrix::zeros(n, n)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut finals = Vec::with_capacity(opts.restarts);
        let mut best = (f64::NEG_INFINITY, Matrix::zeros(n, n));
        for r in 0..opts.restarts {
            let mut t = if r == 0 { s.transpose() } else { gaussian_matrix(&mut rng, n, n) };
            t /= self.norm_unchecked(&t);
            let mut run_best = f64::NEG_INFINITY;
            for j in 1..=opts.iterations {
                let value = s.component_mul(&t.transpose()).sum();
                if value > run_best {
                    run_best = value;
                }
                if value > best.0 {
                    best = (value, t.clone());
                }
                let grad = s.transpose() - self.subgradient(&t) * value;
                let gn = grad.norm();
                if gn < 1e-15 {
                    break;
                }
                let step = opts.step / (j as f64).sqrt();
                t += grad * (step * t.norm() / gn);
                t /= self.norm_unchecked(&t);
            }
            finals.push(run_best);
        }
        finals.sort_by(|a, b| b.total_cmp(a));
        if finals.len() >= 2 && (finals[0] - finals[1]) > opts.agreement * finals[0].abs() {
            return Err(Error::NoConvergence {
                reason: format!("restarts disagree ({:.6} vs {:.6})", finals[0], finals[1]),
                best: best.0,
            });
        }
        Ok(best)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DualAscentOptions {
    pub restarts: usize,
    pub iterations: usize,
    pub step: f64,
    /// Relative agreement demanded of the two best restarts.
    pub agreement: f64,
    pub seed: u64,
}

impl Default for DualAscentOptions {
    fn default() -> Self {
        Self { restarts: 8, iterations: 3000, step: 0.2, agreement: 2e-3, seed: 0x5eed }
    }
}

pub fn op_norm(beta: &OperatorNormSpec, t: &Matrix) -> Result<f64> {
    beta.norm(t)
}

pub fn dual_norm(beta: &OperatorNormSpec, s: &Matrix) -> Result<f64> {
    beta.dual_norm(s)
}

#[derive(Debug, Clone, Copy)]
pub struct QuotientOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop once the level gap falls below this fraction of the best value.
    pub rel_tol: f64,
    pub seed: u64,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        Self { restarts: 8, max_iterations: 5000, rel_tol: 1e-12, seed: 0x9a55 }
    }
}

#[derive(Debug, Clone)]
pub struct QuotientSolution {
    pub value: f64,
    /// Lower bound from the dual pairing when `β*` has a closed form.
    pub lower: Option<f64>,
    pub iterations: usize,
    /// The best lift `F` found, in ambient coordinates.
    pub lift: Matrix,
}

fn check_tangent(lambda: &GrassPoint, f: &Matrix) -> Result<()> {
    let (n, k) = (lambda.n(), lambda.k());
    if f.nrows() != n - k || f.ncols() != k {
        return Err(Error::DimensionMismatch { expected: (n - k) * k, got: f.len() });
    }
    Ok(())
}

/// `β_π(f) = inf { β(F) : π ∘ F ∘ ι = f }` for `f ∈ Hom(Λ, V/Λ)` given as an
/// `(n−k)×k` matrix in the frame/complement bases.
///
/// Unitarily invariant norms are monotone under compression to a block, so
/// the infimum is attained at the lift with zero free blocks and equals the
/// norm of `f` itself. Other norms go through [`quotient_tangent_norm_numeric`].
pub fn quotient_tangent_norm(beta: &OperatorNormSpec, lambda: &GrassPoint, f: &Matrix) -> Result<f64> {
    check_tangent(lambda, f)?;
    if let Some(g) = beta.sv_gauge() {
        return Ok(g.value(&super::linalg::singular_values(f)));
    }
    beta.check(&Matrix::zeros(lambda.n(), lambda.n()))?;
    let sol = quotient_tangent_norm_numeric(beta, lambda, f, &QuotientOptions::default())?;
    Ok(sol.value)
}

/// Level-controlled Polyak subgradient descent over the free blocks of the
/// lift `F̃ = [[A, B], [f, D]]` (in the adapted basis), with random restarts.
pub fn quotient_tangent_norm_numeric(
    beta: &OperatorNormSpec,
    lambda: &GrassPoint,
    f: &Matrix,
    opts: &QuotientOptions,
) -> Result<QuotientSolution> {
    check_tangent(lambda, f)?;
    let (n, k) = (lambda.n(), lambda.k());
    beta.check(&Matrix::zeros(n, n))?;
    let w = lambda.adapted_basis();
    let embed = |ft: &Matrix| &w * ft * w.transpose();
    let objective = |ft: &Matrix| beta.norm_unchecked(&embed(ft));
    let free_grad = |ft: &Matrix| {
        let mut g = w.transpose() * beta.subgradient(&embed(ft)) * &w;
        g.view_mut((k, 0), (n - k, k)).fill(0.0);
        g
    };
    let mut base = Matrix::zeros(n, n);
    base.view_mut((k, 0), (n - k, k)).copy_from(f);
    if f.norm() == 0.0 {
        return Ok(QuotientSolution { value: 0.0, lower: Some(0.0), iterations: 0, lift: Matrix::zeros(n, n) });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best_x = base.clone();
    let mut best = objective(&base);
    let mut total_iters = 0;
    for r in 0..opts.restarts {
        let mut x = base.clone();
        if r > 0 {
            let mut noise = gaussian_matrix(&mut rng, n, n) * (f.norm() / n as f64);
            noise.view_mut((k, 0), (n - k, k)).fill(0.0);
            x += noise;
        }
        let mut fx = objective(&x);
        let (mut run_best, mut run_x) = (fx, x.clone());
        let mut delta = 0.5 * fx;
        let mut stall = 0;
        for _ in 0..opts.max_iterations {
            total_iters += 1;
            let g = free_grad(&x);
            let gg = g.norm_squared();
            if gg < 1e-30 {
                break;
            }
            let target = run_best - delta;
            x -= g * ((fx - target) / gg);
            fx = objective(&x);
            if fx < run_best - 0.5 * delta {
                run_best = fx;
                run_x = x.clone();
                stall = 0;
            } else {
                if fx < run_best {
                    run_best = fx;
                    run_x = x.clone();
                }
                stall += 1;
                if stall >= 25 {
                    delta *= 0.5;
                    stall = 0;
                    x = run_x.clone();
                    fx = run_best;
                }
            }
            if delta <= opts.rel_tol * run_best {
                break;
            }
        }
        if run_best < best {
            best = run_best;
            best_x = run_x;
        }
    }
    let lower = pairing_lower_bound(beta, lambda, &best_x, f);
    if let Some(lo) = lower {
        if best - lo > 1e-6 * best.max(1e-300) {
            return Err(Error::NoConvergence {
                reason: format!("duality gap {:.3e} after {total_iters} iterations", best - lo),
                best,
            });
        }
    }
    Ok(QuotientSolution { value: best, lower, iterations: total_iters, lift: embed(&best_x) })
}

/// Any cotangent `t` gives `β_π(f) ≥ tr(t f)/β*(t)`; the candidate is the
/// pairing block of a subgradient at the best lift.
fn pairing_lower_bound(beta: &OperatorNormSpec, lambda: &GrassPoint, ft: &Matrix, f: &Matrix) -> Option<f64> {
    let gauge = beta.sv_gauge()?;
    let (n, k) = (lambda.n(), lambda.k());
    let w = lambda.adapted_basis();
    let g = w.transpose() * beta.subgradient(&(&w * ft * w.transpose())) * &w;
    let t = g.view((k, 0), (n - k, k)).transpose();
    let pairing = (&t * f).trace();
    let (dual, _) = gauge.dual_max(&super::linalg::singular_values(&t));
    (dual > 0.0).then(|| pairing / dual)
}

/// `(β*)_i(T)` for a cotangent `T`: the dual norm evaluated on `T` itself.
pub fn cotangent_norm(beta: &OperatorNormSpec, c: &super::point::GrassCotangent) -> Result<f64> {
    c.validate()?;
    if let Some(g) = beta.sv_gauge() {
        // Singular values of T equal those of its block.
        return Ok(g.dual_max(&super::linalg::singular_values(&c.block())).0);
    }
    beta.dual_norm(&c.t)
}
