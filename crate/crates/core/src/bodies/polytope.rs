//! Origin-symmetric polytopes in dimension 2 and 3, stored with both the
//! vertex list and the facet covectors `a` (facet `{x : <a, x> = 1}`).
//! Polarity swaps the two lists.

use nalgebra::{DVector, Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    /// Extreme points; counterclockwise in 2D.
    vertices: Vec<Vector>,
    /// Facet covectors; facet `i` is `{x : <a_i, x> = 1}`. Counterclockwise in 2D.
    facets: Vec<Vector>,
}

impl Polytope {
    /// Builds from a vertex list that must already be exactly the set of
    /// extreme points, closed under negation. 2D lists must be strictly
    /// counterclockwise with no three consecutive vertices collinear.
    pub fn from_vertices(vertices: Vec<Vector>) -> Result<Self> {
        let dim = check_points(&vertices)?;
        check_symmetric(&vertices)?;
        match dim {
            2 => {
                let n = vertices.len();
                for i in 0..n {
                    let a = &vertices[i];
                    let b = &vertices[(i + 1) % n];
                    let c = &vertices[(i + 2) % n];
                    if cross2(&(b - a), &(c - b)) <= TOL {
                        return Err(Error::InvalidBody(
                            "2D vertices must be strictly counterclockwise with no three collinear".into(),
                        ));
                    }
                }
                let facets = edge_covectors(&vertices)?;
                Ok(Self { dim, vertices, facets })
            }
            _ => {
                let facets = hull_facets_3d(&vertices)?;
                for v in &vertices {
                    let on = facets.iter().filter(|a| (a.dot(v) - 1.0).abs() < 1e-8).count();
                    if on < 3 {
                        return Err(Error::InvalidBody("vertex list contains a non-extreme point".into()));
                    }
                }
                Ok(Self { dim, vertices, facets })
            }
        }
    }

    /// Builds `{x : <n_i, x> <= h_i}`. Redundant halfspaces are dropped.
    pub fn from_halfspaces(normals: &[Vector], offsets: &[f64]) -> Result<Self> {
        if normals.len() != offsets.len() {
            return Err(Error::InvalidBody("normals and offsets differ in length".into()));
        }
        if offsets.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::InvalidBody("offsets must be positive (origin strictly interior)".into()));
        }
        let covectors: Vec<Vector> = normals.iter().zip(offsets).map(|(n, h)| n / *h).collect();
        check_points(&covectors)?;
        check_symmetric(&covectors)?;
        // the H-polytope is the polar of conv(covectors)
        Ok(Self::hull(covectors)?.polar())
    }

    /// Convex hull of a point cloud, symmetrized by adding the negatives.
    pub fn hull(points: Vec<Vector>) -> Result<Self> {
        let dim = check_points(&points)?;
        let mut all = points.clone();
        all.extend(points.iter().map(|p| -p));
        match dim {
            2 => {
                let vertices = hull_2d(&all);
                if vertices.len() < 4 {
                    return Err(Error::InvalidBody("flat polygon".into()));
                }
                let facets = edge_covectors(&vertices)?;
                Ok(Self { dim, vertices, facets })
            }
            _ => {
                let facets = hull_facets_3d(&all)?;
                let mut vertices: Vec<Vector> = Vec::new();
                for p in &all {
                    let on = facets.iter().filter(|a| (a.dot(p) - 1.0).abs() < 1e-8).count();
                    if on >= 3 && !vertices.iter().any(|v| (v - p).norm() < 1e-9) {
                        vertices.push(p.clone());
                    }
                }
                Ok(Self { dim, vertices, facets })
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vector] {
        &self.facets
    }

    /// The polar polytope: vertices and facets trade places.
    pub fn polar(&self) -> Self {
        Self { dim: self.dim, vertices: self.facets.clone(), facets: self.vertices.clone() }
    }

    pub fn gauge(&self, x: &Vector) -> f64 {
        self.facets.iter().map(|a| a.dot(x)).fold(0.0, f64::max)
    }

    pub fn support(&self, xi: &Vector) -> f64 {
        self.vertices.iter().map(|v| v.dot(xi)).fold(0.0, f64::max)
    }

    /// A facet covector attaining the gauge at `x`.
    pub fn gauge_subgradient(&self, x: &Vector) -> Vector {
        argmax_by(&self.facets, x).clone()
    }

    /// A vertex attaining the support at `xi`.
    pub fn support_point(&self, xi: &Vector) -> Vector {
        argmax_by(&self.vertices, xi).clone()
    }

    /// Largest `<a, v>` over facets active at `x` (one-sided directional derivative of the gauge).
    pub fn gauge_directional(&self, x: &Vector, v: &Vector) -> f64 {
        let g = self.gauge(x);
        self.facets
            .iter()
            .filter(|a| a.dot(x) >= g - TOL * g.max(1.0))
            .map(|a| a.dot(v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index pairs of vertices joined by an edge.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        if self.dim == 2 {
            return (0..n).map(|i| (i, (i + 1) % n)).collect();
        }
        let active: Vec<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| (0..self.facets.len()).filter(|&j| (self.facets[j].dot(v) - 1.0).abs() < 1e-9).collect())
            .collect();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let shared = active[i].iter().filter(|f| active[j].contains(f)).count();
                if shared >= 2 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Area of a 2D polygon (shoelace).
    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v * s).collect(),
            facets: self.facets.iter().map(|a| a / s).collect(),
        }
    }

    /// Image under an invertible linear map `m`.
    pub fn linear_image(&self, m: &nalgebra::DMatrix<f64>) -> Result<Self> {
        let inv = m
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("linear map is singular".into()))?;
        let det = m.determinant();
        let mut vertices: Vec<Vector> = self.vertices.iter().map(|v| m * v).collect();
        let mut facets: Vec<Vector> = self.facets.iter().map(|a| inv.transpose() * a).collect();
        if self.dim == 2 && det < 0.0 {
            vertices.reverse();
            facets.reverse();
        }
        if self.dim == 2 {
            // keep the facet list aligned with edges (v_i, v_{i+1})
            facets = edge_covectors(&vertices)?;
        }
        Ok(Self { dim: self.dim, vertices, facets })
    }
}

fn argmax_by<'a>(items: &'a [Vector], x: &Vector) -> &'a Vector {
    let mut best = &items[0];
    let mut bv = f64::NEG_INFINITY;
    for it in items {
        let v = it.dot(x);
        if v > bv {
            bv = v;
            best = it;
        }
    }
    best
}

pub(crate) fn cross2(a: &Vector, b: &Vector) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn shoelace(vertices: &[Vector]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        s += cross2(&vertices[i], &vertices[(i + 1) % n]);
    }
    0.5 * s.abs()
}

fn check_points(points: &[Vector]) -> Result<usize> {
    let dim = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::InvalidBody("empty point list".into()))?;
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidBody("non-finite coordinate".into()));
        }
    }
    Ok(dim)
}

fn check_symmetric(points: &[Vector]) -> Result<()> {
    for p in points {
        if !points.iter().any(|q| (q + p).norm() <= 1e-9 * (1.0 + p.norm())) {
            return Err(Error::InvalidBody("point list is not closed under negation".into()));
        }
    }
    Ok(())
}

/// Covectors of the edges `(v_i, v_{i+1})` of a counterclockwise polygon.
fn edge_covectors(vertices: &[Vector]) -> Result<Vec<Vector>> {
    let n = vertices.len();
    (0..n)
        .map(|i| {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let det = cross2(a, b);
            if det <= TOL {
                return Err(Error::InvalidBody("origin is not strictly interior".into()));
            }
            // solve <c, a> = <c, b> = 1
            Ok(Vector::from_vec(vec![(b[1] - a[1]) / det, (a[0] - b[0]) / det]))
        })
        .collect()
}

/// Andrew's monotone chain; returns the strictly convex hull counterclockwise,
/// starting from the vertex of smallest angle in `[0, 2π)`.
fn hull_2d(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = points.to_vec();
    pts.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap().then(a[1].partial_cmp(&b[1]).unwrap()));
    pts.dedup_by(|a, b| (&*a - &*b).norm() < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &Vector, a: &Vector, b: &Vector| cross2(&(a - o), &(b - o));
    let mut lower: Vec<Vector> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 1e-12 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vector> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 1e-12 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let start = (0..lower.len())
        .min_by(|&i, &j| angle(&lower[i]).partial_cmp(&angle(&lower[j])).unwrap())
        .unwrap_or(0);
    lower.rotate_left(start);
    lower
}

fn angle(v: &Vector) -> f64 {
    v[1].atan2(v[0]).rem_euclid(std::f64::consts::TAU)
}

/// Facet covectors of the convex hull of a symmetric 3D point cloud whose
/// hull contains the origin in its interior. Brute force over point triples.
fn hull_facets_3d(points: &[Vector]) -> Result<Vec<Vector>> {
    let p: Vec<Vector3<f64>> = points.iter().map(|v| Vector3::new(v[0], v[1], v[2])).collect();
    let n = p.len();
    let mut facets: Vec<Vector3<f64>> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let m = Matrix3::from_rows(&[p[i].transpose(), p[j].transpose(), p[k].transpose()]);
                if m.determinant().abs() < 1e-12 {
                    continue;
                }
                let Some(a) = m.lu().solve(&Vector3::new(1.0, 1.0, 1.0)) else { continue };
                if p.iter().all(|q| a.dot(q) <= 1.0 + 1e-9) && !facets.iter().any(|f| (f - a).norm() < 1e-8) {
                    facets.push(a);
                }
            }
        }
    }
    if facets.len() < 4 {
        return Err(Error::InvalidBody("degenerate 3D point set (origin not interior)".into()));
    }
    // the origin must be interior: every direction has a finite gauge
    for d in [Vector3::x(), Vector3::y(), Vector3::z(), -Vector3::x(), -Vector3::y(), -Vector3::z()] {
        if facets.iter().map(|a| a.dot(&d)).fold(0.0, f64::max) <= 1e-12 {
            return Err(Error::InvalidBody("origin is not strictly interior".into()));
        }
    }
    Ok(facets.into_iter().map(|a| Vector::from_column_slice(a.as_slice())).collect())
}
