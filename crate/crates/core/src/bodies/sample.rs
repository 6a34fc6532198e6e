//! Boundary sampling, spherical meshes and Hausdorff distance.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use super::{ConvexBody, Vector};
use crate::error::{Error, Result};
use crate::numeric::golden_section;

/// Triangulated unit sphere with an antipodally closed vertex set.
#[derive(Debug, Clone)]
pub struct SphereMesh {
    pub vertices: Vec<Vector>,
    pub triangles: Vec<[usize; 3]>,
}

impl SphereMesh {
    /// Geodesic icosahedron of frequency `freq`: `10 freq² + 2` vertices, `20 freq²` triangles.
    pub fn icosahedral(freq: usize) -> Self {
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let raw = [
            [-1.0, t, 0.0],
            [1.0, t, 0.0],
            [-1.0, -t, 0.0],
            [1.0, -t, 0.0],
            [0.0, -1.0, t],
            [0.0, 1.0, t],
            [0.0, -1.0, -t],
            [0.0, 1.0, -t],
            [t, 0.0, -1.0],
            [t, 0.0, 1.0],
            [-t, 0.0, -1.0],
            [-t, 0.0, 1.0],
        ];
        let faces = [
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        Self::subdivide(&raw, &faces, freq)
    }

    /// Subdivided octahedron of frequency `freq`: `4 freq² + 2` vertices, `8 freq²` triangles.
    pub fn octahedral(freq: usize) -> Self {
        let raw = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ];
        let faces = [[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4], [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]];
        Self::subdivide(&raw, &faces, freq)
    }

    fn subdivide(raw: &[[f64; 3]], faces: &[[usize; 3]], freq: usize) -> Self {
        let freq = freq.max(1);
        let base: Vec<Vector> = raw.iter().map(|r| Vector::from_column_slice(r).normalize()).collect();
        let mut index: HashMap<[i64; 3], usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut triangles = Vec::new();
        let mut vid = |p: Vector| -> usize {
            let key = [0, 1, 2].map(|i| (p[i] * 1e9).round() as i64);
            *index.entry(key).or_insert_with(|| {
                vertices.push(p);
                vertices.len() - 1
            })
        };
        let f = freq as f64;
        for face in faces {
            let (a, b, c) = (&base[face[0]], &base[face[1]], &base[face[2]]);
            let mut grid = vec![vec![0usize; freq + 1]; freq + 1];
            for i in 0..=freq {
                for j in 0..=freq - i {
                    let k = freq - i - j;
                    let p = (a * i as f64 + b * j as f64 + c * k as f64) / f;
                    grid[i][j] = vid(p.normalize());
                }
            }
            for i in 0..freq {
                for j in 0..freq - i {
                    triangles.push([grid[i][j], grid[i + 1][j], grid[i][j + 1]]);
                    if i + j + 1 < freq {
                        triangles.push([grid[i + 1][j], grid[i + 1][j + 1], grid[i][j + 1]]);
                    }
                }
            }
        }
        Self { vertices, triangles }
    }

    /// Smallest icosahedral frequency giving at least `count` vertices.
    pub fn icosahedral_frequency_for(count: usize) -> usize {
        let mut nu = 1;
        while 10 * nu * nu + 2 < count {
            nu += 1;
        }
        nu
    }
}

/// Points on the boundary of a 2D or 3D body, closed under `x ↦ −x`.
///
/// In the plane `count` (rounded up to even) equally spaced directions from
/// angle 0 are scaled by `1/gauge`; in space the directions are the vertices
/// of the smallest geodesic icosahedron with at least `count` vertices.
pub fn boundary_sample(body: &ConvexBody, count: usize) -> Result<Vec<Vector>> {
    if count < 8 {
        return Err(Error::InvalidInput(format!("sample count {count} < 8")));
    }
    let dirs: Vec<Vector> = match body.dim() {
        2 => {
            let n = count + count % 2;
            (0..n)
                .map(|i| {
                    let t = TAU * i as f64 / n as f64;
                    Vector::from_vec(vec![t.cos(), t.sin()])
                })
                .collect()
        }
        3 => SphereMesh::icosahedral(SphereMesh::icosahedral_frequency_for(count)).vertices,
        d => return Err(Error::UnsupportedDimension(d)),
    };
    Ok(dirs.iter().map(|u| body.to_boundary(u)).collect())
}

/// Hausdorff distance between two symmetric bodies: the largest support
/// function difference over unit directions (dense grid, then local refinement).
pub fn hausdorff_distance(b1: &ConvexBody, b2: &ConvexBody) -> Result<f64> {
    if b1.dim() != b2.dim() {
        return Err(Error::DimensionMismatch { expected: b1.dim(), got: b2.dim() });
    }
    let diff = |u: &Vector| (b1.support_unchecked(u) - b2.support_unchecked(u)).abs();
    match b1.dim() {
        2 => {
            let n = 4096;
            let at = |t: f64| diff(&Vector::from_vec(vec![t.cos(), t.sin()]));
            let h = PI / n as f64;
            let (mut best_t, mut best) = (0.0, 0.0);
            for i in 0..n {
                let t = i as f64 * h;
                let d = at(t);
                if d > best {
                    best = d;
                    best_t = t;
                }
            }
            let (_, neg) = golden_section(|t| -at(t), best_t - h, best_t + h, 1e-13);
            Ok(best.max(-neg))
        }
        3 => {
            let dirs = SphereMesh::icosahedral(24).vertices;
            let mut best = 0.0f64;
            let mut arg = dirs[0].clone();
            for u in &dirs {
                let d = diff(u);
                if d > best {
                    best = d;
                    arg = u.clone();
                }
            }
            // pattern search on the sphere around the best grid direction
            let mut step = 0.05;
            while step > 1e-10 {
                let mut improved = false;
                for axis in 0..3 {
                    for s in [-step, step] {
                        let mut u = arg.clone();
                        u[axis] += s;
                        let u = u.normalize();
                        let d = diff(&u);
                        if d > best {
                            best = d;
                            arg = u;
                            improved = true;
                        }
                    }
                }
                if !improved {
                    step *= 0.5;
                }
            }
            Ok(best)
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_counts() {
        let m = SphereMesh::icosahedral(8);
        assert_eq!(m.vertices.len(), 642);
        assert_eq!(m.triangles.len(), 1280);
        let o = SphereMesh::octahedral(5);
        assert_eq!(o.vertices.len(), 102);
        assert_eq!(o.triangles.len(), 200);
    }

    #[test]
    fn mesh_is_antipodal() {
        let m = SphereMesh::icosahedral(5);
        for p in &m.vertices {
            assert!(m.vertices.iter().any(|q| (q + p).amax() < 1e-9));
        }
    }

    #[test]
    fn mesh_triangles_cover_sphere() {
        // flat-triangle area converges to 4π from below
        for m in [SphereMesh::icosahedral(16), SphereMesh::octahedral(24)] {
            let area: f64 = m
                .triangles
                .iter()
                .map(|t| {
                    let (a, b, c) = (&m.vertices[t[0]], &m.vertices[t[1]], &m.vertices[t[2]]);
                    let e1 = nalgebra::Vector3::new(b[0] - a[0], b[1] - a[1], b[2] - a[2]);
                    let e2 = nalgebra::Vector3::new(c[0] - a[0], c[1] - a[1], c[2] - a[2]);
                    0.5 * e1.cross(&e2).norm()
                })
                .sum();
            assert!(area < 4.0 * PI && area > 4.0 * PI * 0.99, "{area}");
        }
    }

    #[test]
    fn square_sample_of_eight() {
        let s = boundary_sample(&ConvexBody::square(), 8).unwrap();
        let expect = [[1., 0.], [1., 1.], [0., 1.], [-1., 1.], [-1., 0.], [-1., -1.], [0., -1.], [1., -1.]];
        for (p, e) in s.iter().zip(expect) {
            assert!((p[0] - e[0]).abs() < 1e-15 && (p[1] - e[1]).abs() < 1e-15);
        }
    }

    #[test]
    fn disk_sample_is_roots_of_unity() {
        let s = boundary_sample(&ConvexBody::euclidean_ball(2), 12).unwrap();
        for (k, p) in s.iter().enumerate() {
            let t = TAU * k as f64 / 12.0;
            assert!((p[0] - t.cos()).abs() < 1e-15 && (p[1] - t.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn lp3_sample_on_boundary() {
        let b = ConvexBody::lp_ball(3.0, 3, 1.0).unwrap();
        let s = boundary_sample(&b, 642).unwrap();
        assert_eq!(s.len(), 642);
        for p in &s {
            assert!((b.gauge(p).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn hausdorff_examples() {
        let sq = ConvexBody::square();
        assert_eq!(hausdorff_distance(&sq, &sq).unwrap(), 0.0);
        let eps = 1e-3;
        let d = hausdorff_distance(&sq, &sq.scaled(1.0 + eps).unwrap()).unwrap();
        assert!((d - eps * 2f64.sqrt()).abs() < 1e-12);
        let d = hausdorff_distance(&ConvexBody::euclidean_ball(2), &sq).unwrap();
        assert!((d - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        let cube = ConvexBody::lp_ball(f64::INFINITY, 3, 1.0).unwrap();
        let d = hausdorff_distance(&ConvexBody::euclidean_ball(3), &cube).unwrap();
        assert!((d - (3f64.sqrt() - 1.0)).abs() < 1e-10);
    }
}
