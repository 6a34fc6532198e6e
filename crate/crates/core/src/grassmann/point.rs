use rand::Rng;

use super::linalg::{complement, gaussian_matrix, qf, stack, subspace_gap, Matrix};
use crate::error::{Error, Result};

const FRAME_TOL: f64 = 1e-10;
const COTANGENT_TOL: f64 = 1e-9;

/// An oriented `k`-plane in `ℝⁿ`, stored as an orthonormal frame plus the sign
/// of the orientation relative to the frame's column order.
///
/// The orthonormality is coordinate scaffolding only: no norm is ever read off
/// the reference inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassPoint {
    frame: Matrix,
    orientation: f64,
}

impl GrassPoint {
    pub fn new(frame: Matrix, orientation: f64) -> Result<Self> {
        let k = frame.ncols();
        if k == 0 || k >= frame.nrows() {
            return Err(Error::InvalidInput(format!("need 0 < k < n, got k={k}, n={}", frame.nrows())));
        }
        let defect = (frame.transpose() * &frame - Matrix::identity(k, k)).norm();
        if defect > FRAME_TOL {
            return Err(Error::InvalidInput(format!("frame is not orthonormal (defect {defect:.2e})")));
        }
        if orientation != 1.0 && orientation != -1.0 {
            return Err(Error::InvalidInput("orientation must be ±1".into()));
        }
        Ok(Self { frame, orientation })
    }

    /// The plane spanned by the columns of `basis`, oriented by their order.
    pub fn from_basis(basis: &Matrix) -> Result<Self> {
        let k = basis.ncols();
        if crate::grassmann::linalg::rank(basis, 1e-12) < k {
            return Err(Error::Degenerate("basis is rank deficient".into()));
        }
        Self::new(qf(basis), 1.0)
    }

    /// Uniformly random oriented plane (QR of a Gaussian matrix).
    pub fn haar<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Self> {
        Self::new(qf(&gaussian_matrix(rng, n, k)), if rng.random::<bool>() { 1.0 } else { -1.0 })
    }

    /// Span of the first `k` standard basis vectors, standard orientation.
    pub fn coordinate(n: usize, k: usize) -> Result<Self> {
        Self::new(Matrix::identity(n, k), 1.0)
    }

    pub(crate) fn from_parts(frame: Matrix, orientation: f64) -> Self {
        Self { frame, orientation }
    }

    pub fn n(&self) -> usize {
        self.frame.nrows()
    }

    pub fn k(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// A frame whose column order carries the orientation.
    pub fn oriented_frame(&self) -> Matrix {
        let mut y = self.frame.clone();
        if self.orientation < 0.0 {
            y.column_mut(0).neg_mut();
        }
        y
    }

    /// Same plane, opposite orientation.
    pub fn antipode(&self) -> Self {
        Self { frame: self.frame.clone(), orientation: -self.orientation }
    }

    pub fn complement_frame(&self) -> Matrix {
        complement(&self.frame)
    }

    pub fn projector(&self) -> Matrix {
        &self.frame * self.frame.transpose()
    }

    /// The annihilator `Λ^⊥ ⊂ V*`, identified with a subspace of `V` by the
    /// reference inner product and oriented so that `Λ ⊕ Λ^⊥` is positive.
    pub fn annihilator(&self) -> Self {
        let c = complement(&self.oriented_frame());
        Self { frame: c, orientation: 1.0 }
    }

    /// Sine of the largest principal angle to `other`, ignoring orientation.
    pub fn gap(&self, other: &Self) -> f64 {
        subspace_gap(&self.frame, &other.frame)
    }

    /// For two representations of the same plane, `+1` when the orientations
    /// agree and `-1` otherwise.
    pub fn relative_orientation(&self, other: &Self) -> f64 {
        let d = (self.frame.transpose() * &other.frame).determinant();
        d.signum() * self.orientation * other.orientation
    }

    /// Whether `other` is the same oriented plane within `tol` (subspace gap).
    pub fn same_oriented(&self, other: &Self, tol: f64) -> bool {
        self.gap(other) <= tol && self.relative_orientation(other) > 0.0
    }

    /// `[frame, complement]`, an orthogonal matrix with determinant +1.
    pub fn adapted_basis(&self) -> Matrix {
        stack(&self.frame, &self.complement_frame())
    }

    /// Moves along the tangent `f` ((n−k)×k in the frame/complement bases) by a QR retraction.
    pub fn retract(&self, f: &Matrix) -> Self {
        self.retract_with(&self.complement_frame(), f)
    }

    pub(crate) fn retract_with(&self, comp: &Matrix, f: &Matrix) -> Self {
        Self { frame: qf(&(&self.frame + comp * f)), orientation: self.orientation }
    }
}

/// A covector at `base`: an operator `T` with `Im T ⊆ Λ ⊆ Ker T`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassCotangent {
    pub base: GrassPoint,
    pub t: Matrix,
}

impl GrassCotangent {
    pub fn new(base: GrassPoint, t: Matrix) -> Result<Self> {
        let c = Self { base, t };
        c.validate()?;
        Ok(c)
    }

    /// Builds `T = Y t Cᵀ` from the `k×(n−k)` block `t` in the frame/complement bases.
    pub fn from_block(base: GrassPoint, block: &Matrix) -> Result<Self> {
        let (n, k) = (base.n(), base.k());
        if block.nrows() != k || block.ncols() != n - k {
            return Err(Error::DimensionMismatch { expected: k * (n - k), got: block.len() });
        }
        let t = base.frame() * block * base.complement_frame().transpose();
        Self::new(base, t)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.base.n();
        if self.t.nrows() != n || self.t.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.t.nrows() });
        }
        let p = self.base.projector();
        let scale = self.t.norm().max(1.0);
        let image = (&p * &self.t - &self.t).norm() / scale;
        let kernel = (&self.t * &p).norm() / scale;
        let square = (&self.t * &self.t).norm() / (scale * scale);
        if image > COTANGENT_TOL || kernel > COTANGENT_TOL || square > COTANGENT_TOL {
            return Err(Error::InvariantViolation(format!(
                "cotangent needs Im T ⊆ Λ ⊆ Ker T (image {image:.1e}, kernel {kernel:.1e}, T² {square:.1e})"
            )));
        }
        Ok(())
    }

    /// The `k×(n−k)` block `Yᵀ T C`.
    pub fn block(&self) -> Matrix {
        self.base.frame().transpose() * &self.t * self.base.complement_frame()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn antipode_flips_orientation_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = GrassPoint::haar(&mut rng, 4, 2).unwrap();
        let a = p.antipode();
        assert_eq!(a.frame(), p.frame());
        assert_eq!(a.relative_orientation(&p), -1.0);
        assert!(!a.same_oriented(&p, 1e-9));
    }

    #[test]
    fn from_basis_tracks_orientation() {
        let b = Matrix::from_column_slice(3, 2, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        let p = GrassPoint::from_basis(&b).unwrap();
        let q = GrassPoint::coordinate(3, 2).unwrap();
        assert!(p.gap(&q) < 1e-12);
        assert_eq!(p.relative_orientation(&q), -1.0);
    }

    #[test]
    fn cotangent_containment() {
        let base = GrassPoint::coordinate(3, 1).unwrap();
        let mut t = Matrix::zeros(3, 3);
        t[(0, 1)] = 1.0;
        assert!(GrassCotangent::new(base.clone(), t.clone()).is_ok());
        assert!(GrassCotangent::new(base, t.transpose()).is_err());
    }

    #[test]
    fn annihilator_orientation_is_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = GrassPoint::haar(&mut rng, 4, 1).unwrap();
        let a = p.annihilator();
        let full = stack(&p.oriented_frame(), &a.oriented_frame());
        assert!(full.determinant() > 0.0);
    }
}
