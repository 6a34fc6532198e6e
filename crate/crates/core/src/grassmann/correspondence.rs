//! The invariant complement of an invariant subspace and the map from closed
//! geodesics of `G̃(V,k)` to closed geodesics of `G̃(V,n−k)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::distance::{polyline_length, GrassCurve};
use super::flow::{geodesic_rank, grass_characteristic_flow, GrassFlowOptions, GrassTrajectory, RANK_TOL};
use super::linalg::{complement, gaussian_matrix, kernel, qf, range, singular_values, stack, subspace_gap, Matrix};
use super::norms::OperatorNormSpec;
use super::point::{GrassCotangent, GrassPoint};
use crate::error::{Error, Result};

const COMPLEMENT_DRAWS: usize = 16;

/// For invertible `T` with `T(Λ) = Λ`, a `T`-invariant complement `Ω` with
/// `det T|_Λ · det T|_Ω = det T`.
///
/// `T` and `Tᵀ` are conjugate: any invertible `U` with `U T = Tᵀ U` makes `T`
/// self-adjoint for the form `⟨x, U y⟩`, so the form-orthogonal complement
/// `Ω = U⁻¹(Λ^⊥)` is invariant. `U` is a random combination of a null-space
/// basis, the best of 16 draws by conditioning of `U` and of `Λ ⊕ Ω`.
pub fn invariant_complement(t: &Matrix, lambda: &GrassPoint, seed: u64) -> Result<GrassPoint> {
    let n = lambda.n();
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: t.nrows() });
    }
    let sv = singular_values(t);
    if sv[n - 1] <= 1e-12 * sv[0] {
        return Err(Error::Degenerate("T is not invertible".into()));
    }
    let y = lambda.frame();
    let leak = ((Matrix::identity(n, n) - lambda.projector()) * t * y).norm() / sv[0];
    if leak > 1e-9 {
        return Err(Error::InvalidInput(format!("Λ is not T-invariant (leak {leak:.2e})")));
    }
    // Columns: vec(E_j T − Tᵀ E_j) for the standard basis E_j of n×n matrices.
    let mut op = Matrix::zeros(n * n, n * n);
    for j in 0..n * n {
        let mut e = Matrix::zeros(n, n);
        e[(j % n, j / n)] = 1.0;
        let img = &e * t - t.transpose() * &e;
        op.set_column(j, &nalgebra::DVector::from_column_slice(img.as_slice()));
    }
    let null = kernel(&op, 1e-10);
    if null.ncols() == 0 {
        return Err(Error::Degenerate("no intertwiner between T and its transpose".into()));
    }
    let ann = complement(y);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Matrix)> = None;
    for _ in 0..COMPLEMENT_DRAWS {
        let c = gaussian_matrix(&mut rng, null.ncols(), 1);
        let u = Matrix::from_column_slice(n, n, (&null * c).as_slice());
        let us = singular_values(&u);
        if us[n - 1] <= 1e-12 * us[0] {
            continue;
        }
        let z = qf(&(u.clone().try_inverse().expect("checked invertible") * &ann));
        let transversal = singular_values(&stack(y, &z))[n - 1];
        let score = (us[n - 1] / us[0]).min(transversal);
        if best.as_ref().is_none_or(|b| score > b.0) {
            best = Some((score, z));
        }
    }
    let (_, z) = best.ok_or_else(|| Error::Degenerate("no invertible intertwiner among the draws".into()))?;
    let omega = GrassPoint::new(z, 1.0)?;
    let leak = ((Matrix::identity(n, n) - omega.projector()) * t * omega.frame()).norm() / sv[0];
    if leak > 1e-8 {
        return Err(Error::InvariantViolation(format!("Ω is not T-invariant (leak {leak:.2e})")));
    }
    let defect = det_identity_defect(t, lambda, &omega);
    if defect > 1e-6 {
        return Err(Error::InvariantViolation(format!("det T|Λ · det T|Ω ≠ det T (relative {defect:.2e})")));
    }
    Ok(omega)
}

/// `|det T|_Λ · det T|_Ω − det T| / |det T|` for invariant `Λ`, `Ω`.
pub fn det_identity_defect(t: &Matrix, lambda: &GrassPoint, omega: &GrassPoint) -> f64 {
    let restricted = |p: &GrassPoint| (p.frame().transpose() * t * p.frame()).determinant();
    let d = t.determinant();
    (restricted(lambda) * restricted(omega) - d).abs() / d.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureKind {
    /// `Λ_L = Λ_0`.
    Closed,
    /// `Λ_L = Λ̄_0`, half of a symmetric closed geodesic.
    Symmetric,
}

/// Closure type of a trajectory at its final time, or an error when it does not close.
pub fn closure_kind(traj: &GrassTrajectory, tol: f64) -> Result<ClosureKind> {
    let (a, b) = (traj.first(), traj.last());
    let gap = a.point.gap(&b.point);
    let tdiff = (&a.t - &b.t).norm() / a.t.norm().max(1e-300);
    if gap > tol || tdiff > tol {
        return Err(Error::InvalidInput(format!(
            "trajectory does not close (plane gap {gap:.2e}, covector change {tdiff:.2e})"
        )));
    }
    Ok(if a.point.relative_orientation(&b.point) > 0.0 { ClosureKind::Closed } else { ClosureKind::Symmetric })
}

/// `φ_β` length of the base curve of a trajectory, sampled at about `segments` points.
pub fn trajectory_length(beta: &OperatorNormSpec, traj: &GrassTrajectory, segments: usize) -> Result<f64> {
    let stride = (traj.states.len() / segments.max(1)).max(1);
    let mut points: Vec<GrassPoint> = traj.states.iter().step_by(stride).map(|s| s.point.clone()).collect();
    if (traj.states.len() - 1) % stride != 0 {
        points.push(traj.last().point.clone());
    }
    polyline_length(beta, &GrassCurve { points })
}

#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    pub rank: (usize, usize),
    pub kind: (ClosureKind, ClosureKind),
    pub length: (f64, f64),
    /// Largest gap between `Ω_t` and `B_t Ω_0`.
    pub transport_gap: f64,
    pub passed: bool,
    pub image: GrassTrajectory,
}

/// Builds `Ω_0` from a closed (or half-symmetric) characteristic trajectory on
/// `G̃(V,k)`, flows `(Ω_0, T_0)` on `G̃(V,n−k)` and compares length (`1e−3`),
/// rank, closure type, and `Ω_t = B_t Ω_0` (`1e−4`).
///
/// `Ω_0` is the preimage, under `K_0 → K_0/I_0`, of a `B̃_L`-invariant
/// complement of `Λ_0/I_0`, where `I_0 = Im T_0`, `K_0 = Ker T_0` and `B̃_L`
/// is the transport over one period induced on `K_0/I_0`.
pub fn geodesic_correspondence_check(
    beta: &OperatorNormSpec,
    traj: &GrassTrajectory,
    seed: u64,
) -> Result<CorrespondenceReport> {
    let kind_in = closure_kind(traj, 1e-5)?;
    let r = geodesic_rank(traj)?;
    let s0 = traj.first();
    let (n, k) = (s0.point.n(), s0.point.k());
    if r == 0 {
        return Err(Error::Degenerate("zero covector".into()));
    }
    let i0 = range(&s0.t, RANK_TOL);
    let k0 = kernel(&s0.t, RANK_TOL);
    // Orthonormal Q spanning K_0 ⊖ I_0, a model of K_0/I_0.
    let q = if n - 2 * r > 0 { &k0 * complement(&(k0.transpose() * &i0)) } else { Matrix::zeros(n, 0) };
    let b_l = &traj.last().transport;
    let reduced = q.transpose() * b_l * &q;
    let lambda_red = range(&(q.transpose() * s0.point.frame()), 1e-9);
    if lambda_red.ncols() != k - r {
        return Err(Error::InvariantViolation(format!("Λ_0/I_0 has dimension {} ≠ k − r", lambda_red.ncols())));
    }
    let omega_red = if k == r {
        Matrix::identity(n - 2 * r, n - 2 * r)
    } else if n - k == r {
        Matrix::zeros(n - 2 * r, 0)
    } else {
        invariant_complement(&reduced, &GrassPoint::new(lambda_red, 1.0)?, seed)?.frame().clone()
    };
    let omega0 = GrassPoint::new(qf(&stack(&i0, &(&q * omega_red))), 1.0)?;
    let start = GrassCotangent::new(omega0.clone(), s0.t.clone())?;
    let image =
        grass_characteristic_flow(beta, &start, traj.duration(), traj.step, &GrassFlowOptions::default())?;
    let kind_out = closure_kind(&image, 1e-5)?;
    let rank_out = geodesic_rank(&image)?;
    let mut transport_gap: f64 = 0.0;
    for (a, b) in traj.states.iter().zip(&image.states) {
        transport_gap = transport_gap.max(subspace_gap(&qf(&(&a.transport * omega0.frame())), b.point.frame()));
    }
    let segments = 256;
    let length_in = trajectory_length(beta, traj, segments)?;
    let length_out = trajectory_length(beta, &image, segments)?;
    let passed = (length_in - length_out).abs() <= 1e-3 && r == rank_out && kind_in == kind_out && transport_gap <= 1e-4;
    Ok(CorrespondenceReport {
        rank: (r, rank_out),
        kind: (kind_in, kind_out),
        length: (length_in, length_out),
        transport_gap,
        passed,
        image,
    })
}

/// A closed HS geodesic given by its starting covector and period.
#[derive(Debug, Clone)]
pub struct ConstructedGeodesic {
    pub name: &'static str,
    pub start: GrassCotangent,
    pub period: f64,
}

/// Three closed HS geodesics with known periods: a rank-1 half turn in
/// `G̃(4,1)`, a rank-2 double rotation in `G̃(4,2)`, and a rank-1 half turn in `G̃(4,2)`.
pub fn constructed_geodesics() -> Result<Vec<ConstructedGeodesic>> {
    use std::f64::consts::PI;
    let unit = |n: usize, pairs: &[(usize, usize)], scale: f64| {
        let mut t = Matrix::zeros(n, n);
        for &(i, j) in pairs {
            t[(i, j)] = scale;
        }
        t
    };
    Ok(vec![
        ConstructedGeodesic {
            name: "g41_rank1_half_turn",
            start: GrassCotangent::new(GrassPoint::coordinate(4, 1)?, unit(4, &[(0, 1)], 1.0))?,
            period: PI,
        },
        ConstructedGeodesic {
            name: "g42_rank2_double_rotation",
            start: GrassCotangent::new(
                GrassPoint::coordinate(4, 2)?,
                unit(4, &[(0, 2), (1, 3)], std::f64::consts::FRAC_1_SQRT_2),
            )?,
            period: PI * 2f64.sqrt(),
        },
        ConstructedGeodesic {
            name: "g42_rank1_half_turn",
            start: GrassCotangent::new(GrassPoint::coordinate(4, 2)?, unit(4, &[(0, 2)], 1.0))?,
            period: PI,
        },
    ])
}

/// A random invertible `T` with a random invariant `k`-plane, built as
/// `T = P · blockdiag(A, D) · P⁻¹` (optionally with an upper coupling block).
pub fn random_invariant_instance<R: rand::Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<(Matrix, GrassPoint)> {
    loop {
        let p = gaussian_matrix(rng, n, n);
        let mut core = gaussian_matrix(rng, n, n);
        core.view_mut((k, 0), (n - k, k)).fill(0.0);
        let sp = singular_values(&p);
        let sc = singular_values(&core);
        if sp[n - 1] < 1e-2 * sp[0] || sc[n - 1] < 1e-2 * sc[0] {
            continue;
        }
        let t = &p * core * p.clone().try_inverse().expect("well conditioned");
        let lambda = GrassPoint::new(qf(&p.columns(0, k).into_owned()), 1.0)?;
        return Ok((t, lambda));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_case() {
        let t = Matrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0]));
        let lambda = GrassPoint::coordinate(3, 1).unwrap();
        let omega = invariant_complement(&t, &lambda, 1).unwrap();
        let target = Matrix::from_column_slice(3, 2, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(subspace_gap(omega.frame(), &target) < 1e-8);
        assert!(det_identity_defect(&t, &lambda, &omega) < 1e-12);
    }

    #[test]
    fn jordan_block_case() {
        let t = Matrix::from_row_slice(
            4,
            4,
            &[2.0, 1.0, 0.5, -1.0, 0.0, 2.0, 0.3, 0.7, 0.0, 0.0, 3.0, 1.0, 0.0, 0.0, 0.0, -1.5],
        );
        let lambda = GrassPoint::coordinate(4, 2).unwrap();
        let omega = invariant_complement(&t, &lambda, 2).unwrap();
        assert!(det_identity_defect(&t, &lambda, &omega) < 1e-6);
    }

    #[test]
    fn random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for i in 0..30 {
            let (n, k) = [(3, 1), (4, 2), (5, 2), (4, 3)][i % 4];
            let (t, lambda) = random_invariant_instance(&mut rng, n, k).unwrap();
            let omega = invariant_complement(&t, &lambda, i as u64).unwrap();
            assert!(det_identity_defect(&t, &lambda, &omega) < 1e-6);
        }
    }

    #[test]
    fn constructed_geodesics_correspond() {
        let beta = OperatorNormSpec::HilbertSchmidt;
        let expected =
            [(1, ClosureKind::Symmetric), (2, ClosureKind::Closed), (1, ClosureKind::Symmetric)];
        for (g, (rank, kind)) in constructed_geodesics().unwrap().iter().zip(expected) {
            let steps = 400.0;
            let traj =
                grass_characteristic_flow(&beta, &g.start, g.period, g.period / steps, &Default::default()).unwrap();
            let rep = geodesic_correspondence_check(&beta, &traj, 7).unwrap();
            assert!(rep.passed, "{}: {rep:?}", g.name);
            assert_eq!(rep.rank, (rank, rank));
            assert_eq!(rep.kind, (kind, kind));
            assert!((rep.length.0 - g.period).abs() < 1e-3, "{} {}", g.name, rep.length.0);
        }
    }

    #[test]
    fn open_trajectory_is_rejected() {
        let g = &constructed_geodesics().unwrap()[0];
        let beta = OperatorNormSpec::HilbertSchmidt;
        let traj = grass_characteristic_flow(&beta, &g.start, 1.0, 0.01, &Default::default()).unwrap();
        assert!(geodesic_correspondence_check(&beta, &traj, 1).is_err());
    }
}
