//! Symmetric convex bodies with exact gauge, support function and polarity.
//!
//! Four classes are supported: `ℓp` balls, ellipsoids `{x : xᵀAx <= 1}` and
//! polytopes given by vertices or by halfspaces. Each class is closed under
//! polarity, so `polar` is exact.

mod fit;
mod polytope;
mod sample;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

pub use fit::{john_ellipse, khachiyan, loewner_ellipse, mahler_volume, volume_ratio, EllipseFit, FitKind, FitOptions};
pub use polytope::Polytope;
pub use sample::{boundary_sample, hausdorff_distance, SphereMesh};

pub type Vector = DVector<f64>;

/// Ellipsoid `{x : xᵀ A x <= 1}` with `A` positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    form: DMatrix<f64>,
    inverse: DMatrix<f64>,
}

impl Ellipsoid {
    pub fn new(form: DMatrix<f64>) -> Result<Self> {
        if !form.is_square() || form.nrows() < 2 {
            return Err(Error::InvalidBody("shape form must be square, dimension >= 2".into()));
        }
        let sym = (&form - form.transpose()).amax();
        if sym > 1e-12 * form.amax().max(1.0) {
            return Err(Error::InvalidBody("shape form must be symmetric".into()));
        }
        let form = 0.5 * (&form + form.transpose());
        let eig = form.clone().symmetric_eigen();
        if eig.eigenvalues.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidBody("shape form must be positive definite".into()));
        }
        let inverse = form.clone().try_inverse().ok_or_else(|| Error::InvalidBody("singular shape form".into()))?;
        let inverse = 0.5 * (&inverse + inverse.transpose());
        Ok(Self { form, inverse })
    }

    pub fn form(&self) -> &DMatrix<f64> {
        &self.form
    }

    pub fn inverse_form(&self) -> &DMatrix<f64> {
        &self.inverse
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody {
    /// `{x : ‖x‖_p <= scale}`.
    LpBall { p: f64, dim: usize, scale: f64 },
    Ellipsoid(Ellipsoid),
    /// Polytope specified by its vertices.
    PolytopeV(Polytope),
    /// Polytope specified by its facets.
    PolytopeH(Polytope),
}

impl ConvexBody {
    pub fn lp_ball(p: f64, dim: usize, scale: f64) -> Result<Self> {
        if !(p >= 1.0) || p.is_nan() {
            return Err(Error::InvalidBody(format!("exponent p = {p} must be in [1, ∞]")));
        }
        if dim < 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidBody("scale must be positive".into()));
        }
        Ok(Self::LpBall { p, dim, scale })
    }

    pub fn euclidean_ball(dim: usize) -> Self {
        Self::LpBall { p: 2.0, dim, scale: 1.0 }
    }

    pub fn ellipsoid(form: DMatrix<f64>) -> Result<Self> {
        Ok(Self::Ellipsoid(Ellipsoid::new(form)?))
    }

    pub fn polytope_v(vertices: Vec<Vector>) -> Result<Self> {
        Ok(Self::PolytopeV(Polytope::from_vertices(vertices)?))
    }

    pub fn polytope_h(normals: &[Vector], offsets: &[f64]) -> Result<Self> {
        Ok(Self::PolytopeH(Polytope::from_halfspaces(normals, offsets)?))
    }

    /// Convex hull of the given points and their negatives.
    pub fn symmetric_hull(points: Vec<Vector>) -> Result<Self> {
        Ok(Self::PolytopeV(Polytope::hull(points)?))
    }

    /// The square `[-1, 1]²` given by its vertices.
    pub fn square() -> Self {
        let v = |x: f64, y: f64| Vector::from_vec(vec![x, y]);
        Self::polytope_v(vec![v(1., 1.), v(-1., 1.), v(-1., -1.), v(1., -1.)]).expect("square is valid")
    }

    /// Regular polygon with `2m` vertices on the circle of radius `r`, one vertex at angle 0.
    pub fn regular_polygon(half_count: usize, r: f64) -> Result<Self> {
        if half_count < 2 {
            return Err(Error::InvalidBody("need at least 4 vertices".into()));
        }
        let n = 2 * half_count;
        let verts = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Vector::from_vec(vec![r * t.cos(), r * t.sin()])
            })
            .collect();
        Self::polytope_v(verts)
    }

    /// Random origin-symmetric polygon: `half_count` random directions with radii in `[0.5, 1.5]`, symmetrized and hulled.
    pub fn random_symmetric_polygon<R: rand::Rng + ?Sized>(rng: &mut R, half_count: usize) -> Result<Self> {
        loop {
            let pts: Vec<Vector> = (0..half_count)
                .map(|_| {
                    let t: f64 = rng.random_range(0.0..std::f64::consts::PI);
                    let r: f64 = rng.random_range(0.5..1.5);
                    Vector::from_vec(vec![r * t.cos(), r * t.sin()])
                })
                .collect();
            if let Ok(b) = Self::symmetric_hull(pts) {
                return Ok(b);
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::LpBall { dim, .. } => *dim,
            Self::Ellipsoid(e) => e.form.nrows(),
            Self::PolytopeV(p) | Self::PolytopeH(p) => p.dim(),
        }
    }

    pub fn is_polytope(&self) -> bool {
        matches!(self, Self::PolytopeV(_) | Self::PolytopeH(_))
    }

    /// Bodies whose gauge is differentiable away from the origin.
    pub fn is_smooth(&self) -> bool {
        match self {
            Self::LpBall { p, .. } => *p > 1.0 && p.is_finite(),
            Self::Ellipsoid(_) => true,
            _ => false,
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            Self::PolytopeV(p) | Self::PolytopeH(p) => Some(p),
            _ => None,
        }
    }

    /// Exact polytope form of the `ℓ1` and `ℓ∞` balls in the plane; other bodies pass through.
    pub fn polygonal_form(&self) -> ConvexBody {
        match self {
            Self::LpBall { p, dim: 2, scale } if *p == 1.0 || p.is_infinite() => {
                let s = *scale;
                let v = |x: f64, y: f64| Vector::from_vec(vec![x * s, y * s]);
                let verts = if *p == 1.0 {
                    vec![v(1., 0.), v(0., 1.), v(-1., 0.), v(0., -1.)]
                } else {
                    vec![v(1., 1.), v(-1., 1.), v(-1., -1.), v(1., -1.)]
                };
                Self::polytope_v(verts).expect("valid")
            }
            other => other.clone(),
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    /// Minkowski functional of the body.
    pub fn gauge(&self, x: &Vector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(self.gauge_unchecked(x))
    }

    pub(crate) fn gauge_unchecked(&self, x: &Vector) -> f64 {
        match self {
            Self::LpBall { p, scale, .. } => lp_norm(x, *p) / scale,
            Self::Ellipsoid(e) => x.dot(&(&e.form * x)).max(0.0).sqrt(),
            Self::PolytopeV(p) | Self::PolytopeH(p) => p.gauge(x),
        }
    }

    /// Support function `max_{x in body} <ξ, x>`.
    pub fn support(&self, xi: &Vector) -> Result<f64> {
        self.check_dim(xi)?;
        Ok(self.support_unchecked(xi))
    }

    pub(crate) fn support_unchecked(&self, xi: &Vector) -> f64 {
        match self {
            Self::LpBall { p, scale, .. } => lp_norm(xi, conjugate_exponent(*p)) * scale,
            Self::Ellipsoid(e) => xi.dot(&(&e.inverse * xi)).max(0.0).sqrt(),
            Self::PolytopeV(p) | Self::PolytopeH(p) => p.support(xi),
        }
    }

    /// The polar body `{ξ : <ξ, x> <= 1 for all x in body}`, class to class.
    pub fn polar(&self) -> ConvexBody {
        match self {
            Self::LpBall { p, dim, scale } => Self::LpBall { p: conjugate_exponent(*p), dim: *dim, scale: 1.0 / scale },
            Self::Ellipsoid(e) => Self::Ellipsoid(Ellipsoid { form: e.inverse.clone(), inverse: e.form.clone() }),
            Self::PolytopeV(p) => Self::PolytopeH(p.polar()),
            Self::PolytopeH(p) => Self::PolytopeV(p.polar()),
        }
    }

    /// A subgradient of the gauge at `x != 0`; the gradient for smooth bodies.
    /// Satisfies `<g, x> = gauge(x)` and `support(g) = 1`.
    pub fn gauge_gradient(&self, x: &Vector) -> Vector {
        match self {
            Self::LpBall { p, scale, .. } => lp_gradient(x, *p) / *scale,
            Self::Ellipsoid(e) => {
                let ax = &e.form * x;
                let g = x.dot(&ax).sqrt();
                ax / g
            }
            Self::PolytopeV(p) | Self::PolytopeH(p) => p.gauge_subgradient(x),
        }
    }

    /// A maximizer of `<ξ, ·>` over the body (the gradient of the support function when unique).
    pub fn support_point(&self, xi: &Vector) -> Vector {
        match self {
            Self::LpBall { p, scale, .. } => lp_gradient(xi, conjugate_exponent(*p)) * *scale,
            Self::Ellipsoid(e) => {
                let ax = &e.inverse * xi;
                let h = xi.dot(&ax).sqrt();
                ax / h
            }
            Self::PolytopeV(p) | Self::PolytopeH(p) => p.support_point(xi),
        }
    }

    /// One-sided directional derivative `lim (gauge(x + h v) − gauge(x)) / h` as `h ↓ 0`.
    pub fn gauge_directional(&self, x: &Vector, v: &Vector) -> f64 {
        match self {
            Self::LpBall { p, scale, .. } if *p == 1.0 => {
                let m = x.amax();
                let s: f64 = x
                    .iter()
                    .zip(v.iter())
                    .map(|(xi, vi)| if xi.abs() > 1e-12 * m { xi.signum() * vi } else { vi.abs() })
                    .sum();
                s / scale
            }
            Self::LpBall { p, scale, .. } if p.is_infinite() => {
                let m = x.amax();
                x.iter()
                    .zip(v.iter())
                    .filter(|(xi, _)| xi.abs() >= m * (1.0 - 1e-12))
                    .map(|(xi, vi)| xi.signum() * vi)
                    .fold(f64::NEG_INFINITY, f64::max)
                    / scale
            }
            Self::PolytopeV(p) | Self::PolytopeH(p) => p.gauge_directional(x, v),
            _ => self.gauge_gradient(x).dot(v),
        }
    }

    /// Area of a planar body. Polygons and ellipses are exact; `ℓp` balls use
    /// adaptive quadrature of `½∫ r(θ)² dθ` (relative error below 1e-10).
    pub fn area(&self) -> Result<f64> {
        if self.dim() != 2 {
            return Err(Error::UnsupportedDimension(self.dim()));
        }
        Ok(match self {
            Self::Ellipsoid(e) => std::f64::consts::PI / e.form.determinant().sqrt(),
            Self::PolytopeV(p) | Self::PolytopeH(p) => p.area(),
            Self::LpBall { p, scale, .. } if *p == 1.0 => 2.0 * scale * scale,
            Self::LpBall { p, scale, .. } if p.is_infinite() => 4.0 * scale * scale,
            Self::LpBall { .. } => {
                let f = |t: f64| {
                    let u = Vector::from_vec(vec![t.cos(), t.sin()]);
                    0.5 / self.gauge_unchecked(&u).powi(2)
                };
                let quarter = numeric::integrate(f, 0.0, std::f64::consts::FRAC_PI_2, 1e-14);
                4.0 * quarter.value
            }
        })
    }

    /// `λ · body`.
    pub fn scaled(&self, lambda: f64) -> Result<ConvexBody> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidInput("scale factor must be positive".into()));
        }
        Ok(match self {
            Self::LpBall { p, dim, scale } => Self::LpBall { p: *p, dim: *dim, scale: scale * lambda },
            Self::Ellipsoid(e) => Self::Ellipsoid(Ellipsoid {
                form: &e.form / (lambda * lambda),
                inverse: &e.inverse * (lambda * lambda),
            }),
            Self::PolytopeV(p) => Self::PolytopeV(p.scaled(lambda)),
            Self::PolytopeH(p) => Self::PolytopeH(p.scaled(lambda)),
        })
    }

    /// Image of the body under an invertible linear map. `ℓp` balls only
    /// support scaled signed permutations (which map them to themselves up to scale).
    pub fn linear_image(&self, m: &DMatrix<f64>) -> Result<ConvexBody> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: m.nrows() });
        }
        match self {
            Self::LpBall { p, dim, scale } => {
                let c = m.column(0).amax();
                let signed_perm = m.column_iter().all(|col| {
                    col.iter().filter(|x| x.abs() > 1e-14).count() == 1 && (col.amax() - c).abs() < 1e-12 * c
                }) && m.row_iter().all(|row| row.iter().filter(|x| x.abs() > 1e-14).count() == 1);
                if !signed_perm {
                    return Err(Error::InvalidInput("ℓp balls only support scaled signed permutations".into()));
                }
                Ok(Self::LpBall { p: *p, dim: *dim, scale: scale * c })
            }
            Self::Ellipsoid(e) => {
                let inv = m.clone().try_inverse().ok_or_else(|| Error::InvalidInput("singular map".into()))?;
                Self::ellipsoid(inv.transpose() * &e.form * &inv)
            }
            Self::PolytopeV(p) => Ok(Self::PolytopeV(p.linear_image(m)?)),
            Self::PolytopeH(p) => Ok(Self::PolytopeH(p.linear_image(m)?)),
        }
    }

    /// Rotation by a quarter turn (planar bodies).
    pub fn rotate_quarter_turn(&self) -> Result<ConvexBody> {
        if self.dim() != 2 {
            return Err(Error::UnsupportedDimension(self.dim()));
        }
        self.linear_image(&DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]))
    }

    /// Vertices for polytopes and `ℓ₁`/`ℓ∞` balls, otherwise a boundary sample of
    /// `count` points (seeded Gaussian directions above dimension 3).
    pub fn extreme_points(&self, count: usize) -> Result<Vec<Vector>> {
        match self {
            Self::PolytopeV(p) | Self::PolytopeH(p) => Ok(p.vertices().to_vec()),
            Self::LpBall { p, dim, scale } if *p == 1.0 => Ok((0..2 * dim)
                .map(|i| {
                    let mut v = Vector::zeros(*dim);
                    v[i / 2] = if i % 2 == 0 { *scale } else { -scale };
                    v
                })
                .collect()),
            Self::LpBall { p, dim, scale } if p.is_infinite() && *dim <= 12 => Ok((0..1usize << dim)
                .map(|bits| Vector::from_fn(*dim, |i, _| if bits >> i & 1 == 1 { *scale } else { -scale }))
                .collect()),
            _ if self.dim() <= 3 => boundary_sample(self, count),
            _ => {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
                Ok((0..count)
                    .map(|_| {
                        let g = Vector::from_fn(self.dim(), |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
                        self.to_boundary(&g)
                    })
                    .collect())
            }
        }
    }

    /// Scales `x` onto the boundary.
    pub fn to_boundary(&self, x: &Vector) -> Vector {
        x / self.gauge_unchecked(x)
    }
}

/// `q` with `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

pub(crate) fn lp_norm(x: &Vector, p: f64) -> f64 {
    if p.is_infinite() {
        return x.amax();
    }
    if p == 1.0 {
        return x.iter().map(|c| c.abs()).sum();
    }
    if p == 2.0 {
        return x.norm();
    }
    let m = x.amax();
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|c| (c.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn lp_gradient(x: &Vector, p: f64) -> Vector {
    if p.is_infinite() {
        let m = x.amax();
        let i = x.iter().position(|c| c.abs() == m).unwrap_or(0);
        let mut g = Vector::zeros(x.len());
        g[i] = x[i].signum();
        return g;
    }
    if p == 1.0 {
        return x.map(|c| if c == 0.0 { 0.0 } else { c.signum() });
    }
    let n = lp_norm(x, p);
    x.map(|c| c.signum() * (c.abs() / n).powf(p - 1.0))
}

/// Serializable body description used by experiment configs.
///
/// ```json
/// {"type": "lp", "p": 3.0, "dim": 2, "scale": 1.0}
/// {"type": "ellipsoid", "form": [[4, 0], [0, 1]]}
/// {"type": "polytope_v", "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]}
/// {"type": "polytope_h", "normals": [[1, 0], [0, 1], [-1, 0], [0, -1]], "offsets": [1, 1, 1, 1]}
/// ```
/// `p` may be the string `"inf"`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodySpec {
    Lp {
        #[serde(with = "exponent")]
        p: f64,
        dim: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    Ellipsoid {
        form: Vec<Vec<f64>>,
    },
    PolytopeV {
        vertices: Vec<Vec<f64>>,
    },
    PolytopeH {
        normals: Vec<Vec<f64>>,
        offsets: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

mod exponent {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(p: &f64, s: S) -> Result<S::Ok, S::Error> {
        if p.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*p)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Text(t) if t == "inf" || t == "infinity" => Ok(f64::INFINITY),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad exponent {t:?}"))),
        }
    }
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody> {
        let vecs = |rows: &[Vec<f64>]| rows.iter().map(|r| Vector::from_vec(r.clone())).collect::<Vec<_>>();
        match self {
            Self::Lp { p, dim, scale } => ConvexBody::lp_ball(*p, *dim, *scale),
            Self::Ellipsoid { form } => {
                let n = form.len();
                if form.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidBody("shape form must be square".into()));
                }
                ConvexBody::ellipsoid(DMatrix::from_row_iterator(n, n, form.iter().flatten().copied()))
            }
            Self::PolytopeV { vertices } => ConvexBody::polytope_v(vecs(vertices)),
            Self::PolytopeH { normals, offsets } => ConvexBody::polytope_h(&vecs(normals), offsets),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn gauge_examples() {
        assert!((ConvexBody::square().gauge(&v(&[1., 1.])).unwrap() - 1.0).abs() < 1e-15);
        assert!((ConvexBody::euclidean_ball(2).gauge(&v(&[3., 4.])).unwrap() - 5.0).abs() < 1e-15);
        let l1 = ConvexBody::lp_ball(1.0, 2, 1.0).unwrap();
        assert!((l1.gauge(&v(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauge_dimension_mismatch() {
        let e = ConvexBody::square().gauge(&v(&[1., 1., 1.])).unwrap_err();
        assert_eq!(e, Error::DimensionMismatch { expected: 2, got: 3 });
    }

    #[test]
    fn support_examples() {
        assert!((ConvexBody::square().support(&v(&[1., 0.])).unwrap() - 1.0).abs() < 1e-15);
        let l1 = ConvexBody::lp_ball(1.0, 2, 1.0).unwrap();
        assert!((l1.support(&v(&[1., 1.])).unwrap() - 1.0).abs() < 1e-15);
        // semi-axis 2 along x: form diag(1/4, 1)
        let e = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[0.25, 1.0]))).unwrap();
        assert!((e.support(&v(&[1., 0.])).unwrap() - 2.0).abs() < 1e-15);
        let e = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[4.0, 1.0]))).unwrap();
        assert!((e.support(&v(&[1., 0.])).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn polar_examples() {
        let cross = ConvexBody::square().polar();
        assert!(matches!(cross, ConvexBody::PolytopeH(_)));
        assert_eq!(cross.as_polytope().unwrap().facets().len(), 4);
        for f in cross.as_polytope().unwrap().facets() {
            assert!((f[0].abs() - 1.0).abs() < 1e-15 && (f[1].abs() - 1.0).abs() < 1e-15);
        }
        match ConvexBody::lp_ball(1.5, 2, 1.0).unwrap().polar() {
            ConvexBody::LpBall { p, .. } => assert!((p - 3.0).abs() < 1e-14),
            _ => unreachable!(),
        }
        let e = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[4.0, 1.0]))).unwrap().polar();
        match e {
            ConvexBody::Ellipsoid(e) => assert!((e.form() - DMatrix::from_diagonal(&v(&[0.25, 1.0]))).amax() < 1e-15),
            _ => unreachable!(),
        }
    }

    #[test]
    fn validation_rejects_degenerate() {
        assert!(ConvexBody::lp_ball(0.5, 2, 1.0).is_err());
        assert!(ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[1.0, 0.0]))).is_err());
        assert!(ConvexBody::ellipsoid(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0])).is_err());
        assert!(ConvexBody::polytope_h(&[v(&[1., 0.]), v(&[-1., 0.])], &[1., 1.]).is_err());
    }

    #[test]
    fn lp_area_matches_gamma_formula() {
        use statrs::function::gamma::gamma;
        for p in [1.5, 3.0, 7.0] {
            let b = ConvexBody::lp_ball(p, 2, 1.0).unwrap();
            let exact = 4.0 * gamma(1.0 + 1.0 / p).powi(2) / gamma(1.0 + 2.0 / p);
            assert!((b.area().unwrap() - exact).abs() < 1e-10 * exact, "p = {p}");
        }
        assert!((ConvexBody::euclidean_ball(2).area().unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn directional_derivative_polytope_vertex() {
        let sq = ConvexBody::square();
        let x = v(&[1., 1.]);
        assert!((sq.gauge_directional(&x, &v(&[0., 1.])) - 1.0).abs() < 1e-15);
        assert!((sq.gauge_directional(&x, &v(&[-1., -0.5])) - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn body_spec_roundtrip() {
        let json = r#"[{"type":"lp","p":"inf","dim":3},
                       {"type":"ellipsoid","form":[[4,0],[0,1]]},
                       {"type":"polytope_v","vertices":[[1,1],[-1,1],[-1,-1],[1,-1]]},
                       {"type":"polytope_h","normals":[[1,0],[0,1],[-1,0],[0,-1]],"offsets":[1,1,1,1]}]"#;
        let specs: Vec<BodySpec> = serde_json::from_str(json).unwrap();
        let bodies: Vec<ConvexBody> = specs.iter().map(|s| s.build().unwrap()).collect();
        assert_eq!(bodies[0].dim(), 3);
        assert!((bodies[3].area().unwrap() - 4.0).abs() < 1e-12);
        let back = serde_json::to_string(&specs).unwrap();
        assert_eq!(serde_json::from_str::<Vec<BodySpec>>(&back).unwrap(), specs);
    }

    #[test]
    fn quarter_turn_of_polar_square_is_cross() {
        let iso = ConvexBody::square().polar().rotate_quarter_turn().unwrap();
        assert!((iso.gauge(&v(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-14);
        assert!((iso.area().unwrap() - 2.0).abs() < 1e-14);
    }
}
