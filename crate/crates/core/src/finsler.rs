//! Finsler structures on the boundary of a convex body `K` induced by a norm
//! with unit ball `L`.
//!
//! The immersion structure restricts the norm to tangent vectors, `ψ_m(v) = ‖v‖_L`.
//! The quotient structure measures `v` in `V / ℝm`: `φ_m(v) = inf_t ‖v + t m‖_L`.
//! Its dual norm at `m` is the support function of `L` restricted to covectors
//! vanishing on `m`, which identifies the unit co-sphere bundle with
//! `{(q, p) ∈ ∂K × ∂L° : p(q) = 0}`.

use nalgebra::DMatrix;

use crate::bodies::{ConvexBody, Vector};
use crate::error::{Error, Result};
use crate::numeric::golden_section;

/// Tolerance for `m ∈ ∂K` and for the incidence `p(q) = 0`.
pub const SURFACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Quotient,
    Immersion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMetric {
    k: ConvexBody,
    l: ConvexBody,
    kind: MetricKind,
}

impl SurfaceMetric {
    pub fn new(k: ConvexBody, l: ConvexBody, kind: MetricKind) -> Result<Self> {
        if k.dim() != l.dim() {
            return Err(Error::DimensionMismatch { expected: k.dim(), got: l.dim() });
        }
        Ok(Self { k, l, kind })
    }

    pub fn quotient(k: ConvexBody, l: ConvexBody) -> Result<Self> {
        Self::new(k, l, MetricKind::Quotient)
    }

    pub fn immersion(k: ConvexBody, l: ConvexBody) -> Result<Self> {
        Self::new(k, l, MetricKind::Immersion)
    }

    pub fn k(&self) -> &ConvexBody {
        &self.k
    }

    pub fn l(&self) -> &ConvexBody {
        &self.l
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    /// The same kind of metric for the dual pair `(L°, K°)`.
    pub fn dual_pair(&self) -> Self {
        Self { k: self.l.polar(), l: self.k.polar(), kind: self.kind }
    }

    /// Norm of `v` at `m` according to the metric kind.
    pub fn norm(&self, m: &Vector, v: &Vector) -> Result<f64> {
        match self.kind {
            MetricKind::Quotient => quotient_norm(self, m, v),
            MetricKind::Immersion => immersion_norm(self, m, v),
        }
    }

    pub(crate) fn check_point(&self, m: &Vector) -> Result<()> {
        let g = self.k.gauge(m)?;
        if (g - 1.0).abs() > SURFACE_TOL {
            return Err(Error::InvalidInput(format!("point is off the surface: gauge = {g}")));
        }
        Ok(())
    }
}

/// Quarter-turn rotation `(x, y) ↦ (−y, x)`.
pub fn rot90(m: &Vector) -> Vector {
    Vector::from_vec(vec![-m[1], m[0]])
}

/// `inf_t ‖v + t m‖_L`, without checking that `m` lies on `∂K`.
///
/// In the plane this is `|det(m, v)| / h_L(Jm)`. In general the convex function
/// of `t` is minimized by golden section on `|t| <= 2‖v‖_L / ‖m‖_L`, which
/// contains every minimizer.
pub fn quotient_value(l: &ConvexBody, m: &Vector, v: &Vector) -> f64 {
    if m.len() == 2 {
        let det = m[0] * v[1] - m[1] * v[0];
        return det.abs() / l.support_unchecked(&rot90(m));
    }
    quotient_minimizer(l, m, v).1
}

/// `(t*, min_t ‖v + t m‖_L)`. Closed form for ellipsoids; otherwise golden
/// section, with a looser bracket tolerance for smooth bodies where the value
/// error is quadratic in the location error.
pub fn quotient_minimizer(l: &ConvexBody, m: &Vector, v: &Vector) -> (f64, f64) {
    let euclid = |a: &dyn Fn(&Vector) -> Vector, scale: f64| {
        let am = a(m);
        let t = -v.dot(&am) / m.dot(&am);
        let w = v + t * m;
        (t, w.dot(&a(&w)).max(0.0).sqrt() / scale)
    };
    match l {
        ConvexBody::Ellipsoid(e) => return euclid(&|x| e.form() * x, 1.0),
        ConvexBody::LpBall { p, scale, .. } if *p == 2.0 => return euclid(&|x| x.clone(), *scale),
        _ => {}
    }
    let gv = l.gauge_unchecked(v);
    if gv == 0.0 {
        return (0.0, 0.0);
    }
    let bound = 2.0 * gv / l.gauge_unchecked(m);
    let rel = if l.is_smooth() { 1e-9 } else { 1e-13 };
    let f = |t: f64| l.gauge_unchecked(&(v + t * m));
    let (t, val) = golden_section(f, -bound, bound, rel * bound);
    (t, val.min(gv))
}

pub fn quotient_norm(metric: &SurfaceMetric, m: &Vector, v: &Vector) -> Result<f64> {
    metric.check_point(m)?;
    if v.len() != metric.dim() {
        return Err(Error::DimensionMismatch { expected: metric.dim(), got: v.len() });
    }
    Ok(quotient_value(&metric.l, m, v))
}

/// Whether some supporting functional of `K` at `m` annihilates `v`.
pub fn is_tangent(k: &ConvexBody, m: &Vector, v: &Vector, tol: f64) -> bool {
    let scale = tol * v.norm().max(f64::MIN_POSITIVE) * k.gauge_gradient(m).norm();
    let up = k.gauge_directional(m, v);
    let down = -k.gauge_directional(m, &-v);
    down <= scale && up >= -scale
}

pub fn immersion_norm(metric: &SurfaceMetric, m: &Vector, v: &Vector) -> Result<f64> {
    metric.check_point(m)?;
    if !is_tangent(&metric.k, m, v, 1e-8) {
        return Err(Error::InvalidInput("vector is not tangent to the surface".into()));
    }
    metric.l.gauge(v)
}

/// Norm of a cotangent vector given as an ambient covector annihilating `m`.
pub fn dual_quotient_norm(metric: &SurfaceMetric, m: &Vector, xi: &Vector) -> Result<f64> {
    metric.check_point(m)?;
    let pairing = xi.dot(m);
    if pairing.abs() > SURFACE_TOL * xi.norm().max(1.0) * m.norm() {
        return Err(Error::InvalidInput(format!("covector does not annihilate the base point: <ξ, m> = {pairing}")));
    }
    metric.l.support(xi)
}

/// The covector vanishing on `m` that takes the values `coords` on the chart `basis`.
pub fn lift_covector(m: &Vector, basis: &[Vector], coords: &[f64]) -> Result<Vector> {
    let n = m.len();
    if basis.len() + 1 != n || coords.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: n - 1, got: basis.len() });
    }
    let mut a = DMatrix::zeros(n, n);
    let mut b = Vector::zeros(n);
    a.row_mut(0).copy_from(&m.transpose());
    for (i, e) in basis.iter().enumerate() {
        a.row_mut(i + 1).copy_from(&e.transpose());
        b[i + 1] = coords[i];
    }
    a.lu().solve(&b).ok_or_else(|| Error::Degenerate("chart basis is not transverse to the base point".into()))
}

/// Orthonormal basis of the tangent plane `ker ∇gauge_K(m)`.
pub fn tangent_basis(k: &ConvexBody, m: &Vector) -> Vec<Vector> {
    let g = k.gauge_gradient(m).normalize();
    let n = m.len();
    let mut out: Vec<Vector> = Vec::with_capacity(n - 1);
    for i in 0..n {
        let mut e = Vector::zeros(n);
        e[i] = 1.0;
        e -= e.dot(&g) * &g;
        for b in &out {
            e -= e.dot(b) * b;
        }
        if e.norm() > 1e-6 {
            out.push(e.normalize());
        }
        if out.len() == n - 1 {
            break;
        }
    }
    out
}

/// A point `(q, p)` of the unit co-sphere bundle: `q ∈ ∂K`, `p ∈ ∂L°`, `p(q) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoState {
    pub q: Vector,
    pub p: Vector,
}

impl CoState {
    pub fn new(k: &ConvexBody, l: &ConvexBody, q: Vector, p: Vector) -> Result<Self> {
        let s = Self { q, p };
        s.validate(k, l)?;
        Ok(s)
    }

    /// Checks incidence and both unit conditions at `SURFACE_TOL`.
    pub fn validate(&self, k: &ConvexBody, l: &ConvexBody) -> Result<()> {
        let gq = k.gauge(&self.q)?;
        let hp = l.support(&self.p)?;
        let inc = self.p.dot(&self.q);
        if (gq - 1.0).abs() > SURFACE_TOL || (hp - 1.0).abs() > SURFACE_TOL || inc.abs() > SURFACE_TOL {
            return Err(Error::InvariantViolation(format!(
                "co-state off the bundle: gauge_K(q) = {gq}, gauge_L°(p) = {hp}, p(q) = {inc}"
            )));
        }
        Ok(())
    }

    /// Incidence defect `|p(q)|`.
    pub fn incidence(&self) -> f64 {
        self.p.dot(&self.q).abs()
    }
}

/// `(q, p) ↦ (p, q)`: identifies the co-sphere bundle of `(K, L)` with that of `(L°, K°)`.
pub fn cosphere_swap(c: &CoState) -> CoState {
    CoState { q: c.p.clone(), p: c.q.clone() }
}

/// Result of the Legendre transform of the quotient structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Legendre {
    pub state: CoState,
    /// Set when the maximizing covector is not unique (a flat piece of the dual sphere).
    pub degenerate: bool,
}

/// The covector `p ∈ ∂L°` with `p(m) = 0` maximizing `<p, v>`; then `<p, v> = φ_m(v)`.
///
/// Planar case: the slice `{p ⟂ m} ∩ ∂L°` is two points, so `p = ±Jm / h_L(Jm)`.
/// Spatial case: for a polytope `L` the slice of `L°` is a polygon whose vertices
/// are the crossings of the edges of `L°` with `m^⊥`; for smooth `L` the
/// maximizer is the gauge gradient at the quotient minimizer `v + t* m`.
pub fn legendre(metric: &SurfaceMetric, m: &Vector, v: &Vector) -> Result<Legendre> {
    if metric.kind != MetricKind::Quotient {
        return Err(Error::InvalidInput("Legendre map is defined for the quotient structure".into()));
    }
    metric.check_point(m)?;
    let l = &metric.l;
    if m.len() == 2 {
        let jm = rot90(m);
        let det = jm.dot(v);
        let p = jm * (det.signum() / l.support_unchecked(&rot90(m)));
        let degenerate = det.abs() <= 1e-14 * v.norm() * m.norm();
        return Ok(Legendre { state: CoState { q: m.clone(), p }, degenerate });
    }
    match l.as_polytope() {
        Some(poly) => {
            let dual = poly.polar();
            let verts = dual.vertices();
            let mut cands: Vec<Vector> = Vec::new();
            for (i, j) in dual.edges() {
                let (a, b) = (verts[i].dot(m), verts[j].dot(m));
                if a == 0.0 {
                    cands.push(verts[i].clone());
                }
                if (a < 0.0) != (b < 0.0) && b != 0.0 {
                    let s = a / (a - b);
                    cands.push(&verts[i] * (1.0 - s) + &verts[j] * s);
                }
            }
            let best = cands.iter().map(|c| c.dot(v)).fold(f64::NEG_INFINITY, f64::max);
            let tie = 1e-10 * best.abs().max(v.norm());
            let winners: Vec<&Vector> = cands.iter().filter(|c| c.dot(v) >= best - tie).collect();
            let p = winners[0].clone();
            let degenerate = winners.iter().any(|w| (*w - &p).norm() > 1e-9);
            Ok(Legendre { state: CoState { q: m.clone(), p }, degenerate })
        }
        None => {
            let (t, _) = quotient_minimizer(l, m, v);
            let mut p = l.gauge_gradient(&(v + t * m));
            // remove the residual m-component left by the finite minimization tolerance
            p -= (p.dot(m) / m.norm_squared()) * m;
            p /= l.support_unchecked(&p);
            Ok(Legendre { state: CoState { q: m.clone(), p }, degenerate: false })
        }
    }
}

/// Whether `<∇gauge_K(q), ∇h_L(p)> = 0`, i.e. `(q, p)` lies on the
/// degeneracy locus of the double fibration.
pub fn double_fibration_check(k: &ConvexBody, l: &ConvexBody, q: &Vector, p: &Vector, tol: f64) -> bool {
    double_fibration_defect(k, l, q, p).abs() <= tol
}

/// `<∇gauge_K(q), ∇h_L(p)>`.
pub fn double_fibration_defect(k: &ConvexBody, l: &ConvexBody, q: &Vector, p: &Vector) -> f64 {
    k.gauge_gradient(q).dot(&l.support_point(p))
}

/// A differentiable stand-in for a gauge or support function.
///
/// Smooth bodies are used as they are. Polytopes are rounded:
/// `(Σ_i max(<a_i, x>, 0)^P)^{1/P}` over the facet covectors (for a gauge) or
/// vertices (for a support function), which overestimates by at most a factor
/// `N^{1/P}`.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothGauge {
    Body(ConvexBody),
    Rounded { rows: Vec<Vector>, power: f64 },
}

/// Default rounding exponent for polytopes.
pub const ROUNDING_POWER: f64 = 64.0;

impl SmoothGauge {
    /// Smoothed gauge of `body`.
    pub fn gauge_of(body: &ConvexBody, power: f64) -> Self {
        match body.as_polytope() {
            Some(p) => Self::Rounded { rows: p.facets().to_vec(), power },
            None => Self::Body(body.clone()),
        }
    }

    /// Smoothed support function of `body` (the gauge of its polar).
    pub fn support_of(body: &ConvexBody, power: f64) -> Self {
        Self::gauge_of(&body.polar(), power)
    }

    pub fn value(&self, x: &Vector) -> f64 {
        match self {
            Self::Body(b) => b.gauge_unchecked(x),
            Self::Rounded { rows, power } => {
                let s: Vec<f64> = rows.iter().map(|a| a.dot(x).max(0.0)).collect();
                let mx = s.iter().copied().fold(0.0, f64::max);
                if mx == 0.0 {
                    return 0.0;
                }
                mx * s.iter().map(|v| (v / mx).powf(*power)).sum::<f64>().powf(1.0 / power)
            }
        }
    }

    pub fn gradient(&self, x: &Vector) -> Vector {
        match self {
            Self::Body(b) => b.gauge_gradient(x),
            Self::Rounded { rows, power } => {
                let g = self.value(x);
                let mut out = Vector::zeros(x.len());
                for a in rows {
                    let s = a.dot(x);
                    if s > 0.0 {
                        out += a * (s / g).powf(power - 1.0);
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn euclidean_orthogonal_vector() {
        let b = ConvexBody::euclidean_ball(3);
        let met = SurfaceMetric::quotient(b.clone(), b).unwrap();
        let q = quotient_norm(&met, &v(&[0., 0., 1.]), &v(&[0.3, 0.4, 0.])).unwrap();
        assert!((q - 0.5).abs() < 1e-10);
    }

    #[test]
    fn square_quotient_example() {
        let met = SurfaceMetric::quotient(ConvexBody::square(), ConvexBody::square()).unwrap();
        let q = quotient_norm(&met, &v(&[1., 0.]), &v(&[0., 1.])).unwrap();
        assert!((q - 1.0).abs() < 1e-15);
    }

    #[test]
    fn l1_quotient_matches_grid_oracle() {
        let l1 = ConvexBody::lp_ball(1.0, 2, 1.0).unwrap();
        let met = SurfaceMetric::quotient(l1.clone(), l1.clone()).unwrap();
        let (m, w) = (v(&[1., 0.]), v(&[0., 1.]));
        let grid = (0..=40000)
            .map(|i| -2.0 + 4.0 * i as f64 / 40000.0)
            .map(|t| l1.gauge(&(&w + t * &m)).unwrap())
            .fold(f64::INFINITY, f64::min);
        let q = quotient_norm(&met, &m, &w).unwrap();
        assert!((q - grid).abs() < 1e-9, "{q} vs {grid}");
    }

    #[test]
    fn planar_closed_form_matches_golden_section() {
        let k = ConvexBody::lp_ball(3.0, 2, 1.0).unwrap();
        let l = ConvexBody::regular_polygon(5, 1.2).unwrap();
        for i in 0..50 {
            let a = 0.37 * i as f64;
            let m = k.to_boundary(&v(&[a.cos(), a.sin()]));
            let w = v(&[(1.3 * a).sin(), (0.7 * a).cos() + 0.2]);
            let closed = quotient_value(&l, &m, &w);
            let (_, golden) = quotient_minimizer(&l, &m, &w);
            assert!((closed - golden).abs() < 1e-10, "{closed} vs {golden}");
        }
    }

    #[test]
    fn immersion_requires_tangency() {
        let sq = ConvexBody::square();
        let met = SurfaceMetric::immersion(sq.clone(), sq).unwrap();
        assert!((immersion_norm(&met, &v(&[1., 0.]), &v(&[0., 1.])).unwrap() - 1.0).abs() < 1e-15);
        // at a corner every direction between the two edges is tangent
        assert!(immersion_norm(&met, &v(&[1., 1.]), &v(&[1., -0.5])).is_ok());
        assert!(immersion_norm(&met, &v(&[1., 0.]), &v(&[1., 0.3])).is_err());
    }

    #[test]
    fn off_surface_point_rejected() {
        let sq = ConvexBody::square();
        let met = SurfaceMetric::quotient(sq.clone(), sq).unwrap();
        assert!(quotient_norm(&met, &v(&[0.5, 0.]), &v(&[0., 1.])).is_err());
    }

    #[test]
    fn dual_norm_examples() {
        let sq = ConvexBody::square();
        let met = SurfaceMetric::quotient(sq.clone(), sq).unwrap();
        assert!((dual_quotient_norm(&met, &v(&[1., 0.]), &v(&[0., 1.])).unwrap() - 1.0).abs() < 1e-15);
        assert!(dual_quotient_norm(&met, &v(&[1., 0.]), &v(&[1., 1.])).is_err());
        let b = ConvexBody::euclidean_ball(3);
        let met = SurfaceMetric::quotient(b.clone(), b).unwrap();
        let xi = lift_covector(&v(&[0., 0., 1.]), &[v(&[1., 0., 0.]), v(&[0., 1., 0.])], &[0.6, 0.8]).unwrap();
        assert!((dual_quotient_norm(&met, &v(&[0., 0., 1.]), &xi).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn legendre_euclidean() {
        let b = ConvexBody::euclidean_ball(3);
        let met = SurfaceMetric::quotient(b.clone(), b).unwrap();
        let w = v(&[0.3, -0.4, 0.]);
        let leg = legendre(&met, &v(&[0., 0., 1.]), &w).unwrap();
        assert!((leg.state.p - &w / w.norm()).amax() < 1e-10);
        assert!(!leg.degenerate);
    }

    fn fd_gradient(l: &ConvexBody, m: &Vector, w: &Vector) -> Vector {
        let h = 1e-6;
        Vector::from_iterator(
            w.len(),
            (0..w.len()).map(|i| {
                let mut e = Vector::zeros(w.len());
                e[i] = h;
                (quotient_value(l, m, &(w + &e)) - quotient_value(l, m, &(w - &e))) / (2.0 * h)
            }),
        )
    }

    #[test]
    fn legendre_is_gradient_of_quotient_norm() {
        let l = ConvexBody::lp_ball(3.0, 3, 1.0).unwrap();
        let k = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[1.0, 2.0, 0.5]))).unwrap();
        let met = SurfaceMetric::quotient(k.clone(), l.clone()).unwrap();
        let m = k.to_boundary(&v(&[0.3, -0.5, 0.8]));
        for w in [v(&[1.0, 0.2, 0.1]), v(&[-0.3, 0.7, 0.4])] {
            let leg = legendre(&met, &m, &w).unwrap();
            let fd = fd_gradient(&l, &m, &w);
            // the finite-difference gradient is defined up to the m-direction, which the quotient kills
            let diff = &leg.state.p - &fd;
            assert!(diff.dot(&w).abs() < 1e-6 && (diff.clone() - diff.dot(&m) / m.norm_squared() * &m).norm() < 1e-5);
            assert!((leg.state.p.dot(&w) - quotient_norm(&met, &m, &w).unwrap()).abs() < 1e-8);
            leg.state.validate(&k, &l).unwrap();
        }
    }

    #[test]
    fn legendre_polytope_slice() {
        let cube = ConvexBody::polytope_h(
            &[[1., 0., 0.], [0., 1., 0.], [0., 0., 1.], [-1., 0., 0.], [0., -1., 0.], [0., 0., -1.]].map(|r| v(&r)),
            &[1.0; 6],
        )
        .unwrap();
        let k = ConvexBody::euclidean_ball(3);
        let met = SurfaceMetric::quotient(k.clone(), cube.clone()).unwrap();
        let m = v(&[0.6, 0.0, 0.8]);
        let w = v(&[0.8, 0.3, -0.6]);
        let leg = legendre(&met, &m, &w).unwrap();
        let q = quotient_norm(&met, &m, &w).unwrap();
        assert!((leg.state.p.dot(&w) - q).abs() < 1e-9);
        leg.state.validate(&k, &cube).unwrap();
    }

    #[test]
    fn swap_is_involutive_and_valid_for_dual_pair() {
        let k = ConvexBody::regular_polygon(3, 1.0).unwrap();
        let l = ConvexBody::square();
        let met = SurfaceMetric::quotient(k.clone(), l.clone()).unwrap();
        let m = k.to_boundary(&v(&[0.4, 0.9]));
        let c = legendre(&met, &m, &v(&[-0.9, 0.4])).unwrap().state;
        let s = cosphere_swap(&c);
        s.validate(&l.polar(), &k.polar()).unwrap();
        assert_eq!(cosphere_swap(&s), c);
    }

    #[test]
    fn double_fibration_examples() {
        let b = ConvexBody::euclidean_ball(3);
        assert!(double_fibration_check(&b, &b, &v(&[1., 0., 0.]), &v(&[0., 1., 0.]), 1e-12));
        assert!(!double_fibration_check(&b, &b, &v(&[1., 0., 0.]), &v(&[0.6, 0.8, 0.]), 1e-6));
    }

    #[test]
    fn rounded_gauge_gradient_matches_fd() {
        let sg = SmoothGauge::gauge_of(&ConvexBody::square(), ROUNDING_POWER);
        let x = v(&[0.7, 0.65]);
        let g = sg.gradient(&x);
        for i in 0..2 {
            let mut e = Vector::zeros(2);
            e[i] = 1e-6;
            let fd = (sg.value(&(&x + &e)) - sg.value(&(&x - &e))) / 2e-6;
            assert!((fd - g[i]).abs() < 1e-6);
        }
        assert!((g.dot(&x) - sg.value(&x)).abs() < 1e-12);
    }
}
