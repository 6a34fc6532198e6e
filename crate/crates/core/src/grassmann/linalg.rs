//! Small dense helpers: sorted SVD, QR with positive diagonal, orthogonal
//! complements and principal angles.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub type Matrix = DMatrix<f64>;

/// Thin SVD with singular values sorted in decreasing order: `m = U diag(s) Vᵀ`.
///
/// One-sided Jacobi: small matrices only, but accurate on rank-deficient input
/// where the bidiagonal QR iteration was seen to return a wrong factorization.
pub fn svd_sorted(m: &Matrix) -> (Matrix, Vec<f64>, Matrix) {
    if m.nrows() < m.ncols() {
        let (u, s, v) = svd_sorted(&m.transpose());
        return (v, s, u);
    }
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut v = Matrix::identity(cols, cols);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dot(&a.column(q));
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for (mat, n) in [(&mut a, rows), (&mut v, cols)] {
                    for i in 0..n {
                        let (xp, xq) = (mat[(i, p)], mat[(i, q)]);
                        mat[(i, p)] = c * xp - s * xq;
                        mat[(i, q)] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sig: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    let mut idx: Vec<usize> = (0..cols).collect();
    idx.sort_by(|&x, &y| sig[y].total_cmp(&sig[x]));
    let smax = sig.iter().fold(0.0f64, |m, &x| m.max(x));
    let mut u = Matrix::zeros(rows, cols);
    let mut filled: Vec<nalgebra::DVector<f64>> = Vec::new();
    let mut empty = Vec::new();
    for (j, &i) in idx.iter().enumerate() {
        if sig[i] > 1e-300 && sig[i] > 1e-15 * smax {
            let col = a.column(i) / sig[i];
            u.set_column(j, &col);
            filled.push(col);
        } else {
            empty.push(j);
        }
    }
    // Complete U with orthonormal directions for the null singular values.
    for j in empty {
        let mut best: Option<nalgebra::DVector<f64>> = None;
        for e in 0..rows {
            let mut x = nalgebra::DVector::zeros(rows);
            x[e] = 1.0;
            for _ in 0..2 {
                for f in &filled {
                    let c = f.dot(&x);
                    x -= f * c;
                }
            }
            if best.as_ref().is_none_or(|b| x.norm() > b.norm()) {
                best = Some(x);
            }
        }
        let col = best.expect("rows > 0").normalize();
        u.set_column(j, &col);
        filled.push(col);
    }
    let vs = Matrix::from_fn(cols, cols, |i, j| v[(i, idx[j])]);
    (u, idx.iter().map(|&i| sig[i]).collect(), vs)
}

pub fn singular_values(m: &Matrix) -> Vec<f64> {
    svd_sorted(m).1
}

/// Q factor of a thin QR with the diagonal of R made positive, so the columns
/// of `m` and of the result span the same flag with the same orientation.
pub fn qf(m: &Matrix) -> Matrix {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m.ncols() {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Orthonormal basis of the orthogonal complement of the column span of the
/// orthonormal `y`, ordered so that `det [y, c] = +1`.
pub fn complement(y: &Matrix) -> Matrix {
    let (n, k) = (y.nrows(), y.ncols());
    let mut basis: Vec<nalgebra::DVector<f64>> = (0..k).map(|j| y.column(j).into_owned()).collect();
    let mut out = Vec::with_capacity(n - k);
    // Greedy Gram–Schmidt over the standard basis, taking the largest residual each time.
    while out.len() < n - k {
        let mut best: Option<nalgebra::DVector<f64>> = None;
        for i in 0..n {
            let mut e = nalgebra::DVector::zeros(n);
            e[i] = 1.0;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&e);
                    e -= b * c;
                }
            }
            if best.as_ref().is_none_or(|b| e.norm() > b.norm()) {
                best = Some(e);
            }
        }
        let v = best.expect("n > 0").normalize();
        basis.push(v.clone());
        out.push(v);
    }
    let mut c = Matrix::from_columns(&out);
    if n > k {
        let full = stack(y, &c);
        if full.determinant() < 0.0 {
            c.column_mut(n - k - 1).neg_mut();
        }
    }
    c
}

/// `[a, b]` side by side.
pub fn stack(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}

/// Principal angles between the spans of orthonormal `a` and `b` (same column count), increasing.
pub fn principal_angles(a: &Matrix, b: &Matrix) -> Vec<f64> {
    let mut s = singular_values(&(a.transpose() * b));
    s.reverse();
    s.iter().map(|c| c.clamp(-1.0, 1.0).acos()).collect()
}

/// Sine of the largest principal angle between two spans of equal dimension;
/// zero-dimensional spans are at distance zero.
pub fn subspace_gap(a: &Matrix, b: &Matrix) -> f64 {
    if a.ncols() == 0 {
        return 0.0;
    }
    let p = a * a.transpose() - b * b.transpose();
    singular_values(&p).first().copied().unwrap_or(0.0)
}

/// Orthonormal basis of the column span of `m`, keeping singular directions above `rel_tol · σ_max`.
pub fn range(m: &Matrix, rel_tol: f64) -> Matrix {
    let (u, s, _) = svd_sorted(m);
    let smax = s.first().copied().unwrap_or(0.0);
    let r = s.iter().filter(|&&x| x > rel_tol * smax && smax > 0.0).count();
    u.columns(0, r).into_owned()
}

/// Orthonormal basis of the kernel of `m` (right singular vectors below `rel_tol · σ_max`).
pub fn kernel(m: &Matrix, rel_tol: f64) -> Matrix {
    let n = m.ncols();
    // Pad to square so the SVD exposes the full right singular basis.
    let mut sq = Matrix::zeros(n.max(m.nrows()), n);
    sq.rows_mut(0, m.nrows()).copy_from(m);
    let (_, s, v) = svd_sorted(&sq);
    let smax = s.first().copied().unwrap_or(0.0);
    let r = s.iter().filter(|&&x| x > rel_tol * smax && smax > 0.0).count();
    v.columns(r, n - r).into_owned()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn rank(m: &Matrix, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let smax = s.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * smax).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complement_is_oriented() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 1..4 {
            let y = qf(&gaussian_matrix(&mut rng, 4, k));
            let c = complement(&y);
            assert!((y.transpose() * &c).norm() < 1e-12);
            assert!((c.transpose() * &c - Matrix::identity(4 - k, 4 - k)).norm() < 1e-12);
            assert!((stack(&y, &c).determinant() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sorted_svd_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = gaussian_matrix(&mut rng, 3, 2);
        let (u, s, v) = svd_sorted(&m);
        assert!(s[0] >= s[1]);
        let back = &u * Matrix::from_diagonal(&nalgebra::DVector::from_vec(s)) * v.transpose();
        assert!((back - m).norm() < 1e-12);
    }

    #[test]
    fn rank_one_svd_is_accurate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let a = gaussian_matrix(&mut rng, 4, 1);
            let b = gaussian_matrix(&mut rng, 1, 4);
            let m = &a * &b + gaussian_matrix(&mut rng, 4, 4) * 1e-16;
            let (u, s, v) = svd_sorted(&m);
            let back = &u * Matrix::from_diagonal(&nalgebra::DVector::from_vec(s.clone())) * v.transpose();
            assert!((back - &m).norm() < 1e-13 * m.norm());
            assert!((u.transpose() * &u - Matrix::identity(4, 4)).norm() < 1e-12);
            assert!((s[0] - a.norm() * b.norm()).abs() < 1e-12 * s[0]);
        }
    }

    #[test]
    fn kernel_and_range() {
        let m = Matrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(kernel(&m, 1e-9).ncols(), 2);
        assert_eq!(range(&m, 1e-9).ncols(), 1);
        assert_eq!(rank(&m, 1e-9), 1);
    }
}
