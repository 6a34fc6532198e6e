//! Characteristic flow of `H = ½ β*(T)²` on `T*G̃(V,k)`, with the transport
//! `Ḃ = S B` and the rank/transport diagnostics built on it.

use super::linalg::{kernel, qf, range, rank, subspace_gap, Matrix};
use super::norms::OperatorNormSpec;
use super::point::{GrassCotangent, GrassPoint};
use crate::error::{Error, Result};

/// Default numerical rank threshold relative to `σ_max`.
pub const RANK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy)]
pub struct GrassFlowOptions {
    /// Allowed `|ΔH|` per unit time before the step is halved.
    pub drift_rate: f64,
    pub max_halvings: usize,
}

impl Default for GrassFlowOptions {
    fn default() -> Self {
        Self { drift_rate: 1e-5, max_halvings: 12 }
    }
}

#[derive(Debug, Clone)]
pub struct GrassFlowState {
    pub time: f64,
    pub point: GrassPoint,
    /// The covector `T` with `Im T ⊆ Λ ⊆ Ker T`.
    pub t: Matrix,
    /// Transport `B_t` solving `Ḃ = S_t B`, `B_0 = I`.
    pub transport: Matrix,
}

#[derive(Debug, Clone)]
pub struct GrassTrajectory {
    pub states: Vec<GrassFlowState>,
    pub step: f64,
    pub energy: f64,
    pub drift_max: f64,
    pub halvings: usize,
}

impl GrassTrajectory {
    pub fn first(&self) -> &GrassFlowState {
        &self.states[0]
    }

    pub fn last(&self) -> &GrassFlowState {
        self.states.last().expect("trajectories are never empty")
    }

    pub fn duration(&self) -> f64 {
        self.last().time - self.first().time
    }

    /// State nearest to time `t`.
    pub fn at(&self, t: f64) -> &GrassFlowState {
        let i = ((t - self.first().time) / self.step).round().clamp(0.0, (self.states.len() - 1) as f64) as usize;
        &self.states[i]
    }
}

/// `∇H(T) = β*(T) · 𝓛(T)`, the gradient of `½β*²` in the trace pairing.
pub fn hamiltonian_gradient(beta: &OperatorNormSpec, t: &Matrix) -> Result<Matrix> {
    let (value, s) = beta.dual_with_maximizer(t)?;
    Ok(s * value)
}

pub fn hamiltonian(beta: &OperatorNormSpec, t: &Matrix) -> Result<f64> {
    let v = beta.dual_norm(t)?;
    Ok(0.5 * v * v)
}

struct Field<'a> {
    beta: &'a OperatorNormSpec,
}

type Triple = (Matrix, Matrix, Matrix);

impl Field<'_> {
    fn rhs(&self, y: &Matrix, t: &Matrix, b: &Matrix) -> Result<Triple> {
        let s = hamiltonian_gradient(self.beta, t)?;
        let n = y.nrows();
        let p = y * y.transpose();
        let dy = (Matrix::identity(n, n) - p) * &s * y;
        let dt = &s * t - t * &s;
        let db = &s * b;
        Ok((dy, dt, db))
    }

    fn rk4(&self, y: &Matrix, t: &Matrix, b: &Matrix, h: f64) -> Result<Triple> {
        let (k1y, k1t, k1b) = self.rhs(y, t, b)?;
        let (k2y, k2t, k2b) = self.rhs(&(y + &k1y * (h / 2.0)), &(t + &k1t * (h / 2.0)), &(b + &k1b * (h / 2.0)))?;
        let (k3y, k3t, k3b) = self.rhs(&(y + &k2y * (h / 2.0)), &(t + &k2t * (h / 2.0)), &(b + &k2b * (h / 2.0)))?;
        let (k4y, k4t, k4b) = self.rhs(&(y + &k3y * h), &(t + &k3t * h), &(b + &k3b * h))?;
        let comb = |a: &Matrix, b2: &Matrix, c: &Matrix, d: &Matrix| (a + b2 * 2.0 + c * 2.0 + d) * (h / 6.0);
        Ok((y + comb(&k1y, &k2y, &k3y, &k4y), t + comb(&k1t, &k2t, &k3t, &k4t), b + comb(&k1b, &k2b, &k3b, &k4b)))
    }
}

fn integrate(
    beta: &OperatorNormSpec,
    start: &GrassCotangent,
    duration: f64,
    step: f64,
) -> Result<(Vec<GrassFlowState>, f64, f64)> {
    let field = Field { beta };
    let n = start.base.n();
    let steps = (duration.abs() / step).ceil().max(1.0) as usize;
    let h = duration / steps as f64;
    let h0 = hamiltonian(beta, &start.t)?;
    let orientation = start.base.orientation();
    let mut y = start.base.frame().clone();
    let mut t = start.t.clone();
    let mut b = Matrix::identity(n, n);
    let mut states = Vec::with_capacity(steps + 1);
    states.push(GrassFlowState { time: 0.0, point: start.base.clone(), t: t.clone(), transport: b.clone() });
    let mut drift: f64 = 0.0;
    for i in 1..=steps {
        let (y1, t1, b1) = field.rk4(&y, &t, &b, h)?;
        // Back onto {frame orthonormal, Im T ⊆ Λ ⊆ Ker T}.
        y = qf(&y1);
        let p = &y * y.transpose();
        t = &p * t1 * (Matrix::identity(n, n) - &p);
        b = b1;
        drift = drift.max((hamiltonian(beta, &t)? - h0).abs());
        states.push(GrassFlowState {
            time: i as f64 * h,
            point: GrassPoint::from_parts(y.clone(), orientation),
            t: t.clone(),
            transport: b.clone(),
        });
    }
    Ok((states, h, drift))
}

/// Integrates the characteristic flow from `start` by RK4 in the chart
/// `(frame, T)`, re-projecting after every step. The equations are
/// `Ẏ = (I − YYᵀ) S Y`, `Ṫ = S T − T S` with `S = ∇H(T)`; the step is
/// halved until `|ΔH|` stays below `drift_rate · duration`.
pub fn grass_characteristic_flow(
    beta: &OperatorNormSpec,
    start: &GrassCotangent,
    duration: f64,
    step: f64,
    opts: &GrassFlowOptions,
) -> Result<GrassTrajectory> {
    start.validate()?;
    if !beta.has_smooth_dual() {
        return Err(Error::InvalidInput(format!(
            "the flow needs a smooth dual norm; use an HS blend of {}",
            beta.name()
        )));
    }
    if step <= 0.0 || !duration.is_finite() {
        return Err(Error::InvalidInput("step must be positive and duration finite".into()));
    }
    let energy = hamiltonian(beta, &start.t)?;
    let budget = opts.drift_rate * duration.abs().max(1.0);
    let mut h = step;
    let mut last_drift = f64::INFINITY;
    for halvings in 0..=opts.max_halvings {
        let (states, used, drift) = integrate(beta, start, duration, h)?;
        if drift <= budget {
            return Ok(GrassTrajectory { states, step: used, energy, drift_max: drift, halvings });
        }
        last_drift = drift;
        h *= 0.5;
    }
    Err(Error::NoConvergence { reason: format!("energy drift {last_drift:.2e} exceeds {budget:.2e}"), best: last_drift })
}

/// The constant numerical rank of `T_t` along the trajectory.
pub fn geodesic_rank(traj: &GrassTrajectory) -> Result<usize> {
    geodesic_rank_with(traj, RANK_TOL)
}

pub fn geodesic_rank_with(traj: &GrassTrajectory, rel_tol: f64) -> Result<usize> {
    let r0 = rank(&traj.first().t, rel_tol);
    for s in &traj.states {
        let r = rank(&s.t, rel_tol);
        if r != r0 {
            return Err(Error::InvariantViolation(format!("rank changed from {r0} to {r} at t = {:.4}", s.time)));
        }
    }
    Ok(r0)
}

#[derive(Debug, Clone, Copy)]
pub struct TransportReport {
    pub plane: f64,
    pub image: f64,
    pub kernel: f64,
    pub passed: bool,
}

/// Largest subspace gaps between `B_t Λ_0` and `Λ_t`, `B_t Im T_0` and `Im T_t`,
/// `B_t Ker T_0` and `Ker T_t`; passes at `1e−4`.
pub fn transport_check(traj: &GrassTrajectory) -> TransportReport {
    let s0 = traj.first();
    let im0 = range(&s0.t, RANK_TOL);
    let ker0 = kernel(&s0.t, RANK_TOL);
    let (mut plane, mut image, mut kern): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for s in &traj.states {
        let b = &s.transport;
        plane = plane.max(subspace_gap(&qf(&(b * s0.point.frame())), s.point.frame()));
        if im0.ncols() > 0 {
            image = image.max(subspace_gap(&qf(&(b * &im0)), &range(&s.t, RANK_TOL)));
            kern = kern.max(subspace_gap(&qf(&(b * &ker0)), &kernel(&s.t, RANK_TOL)));
        }
    }
    TransportReport { plane, image, kernel: kern, passed: plane.max(image).max(kern) <= 1e-4 }
}

/// Re-bases the trajectory at `(Im T_0, T_0)` in `G̃(V,r)`, flows it, and
/// returns the largest discrepancy in `T` (relative) and in `Im T_t` versus the
/// flowed plane.
pub fn mu_consistency_defect(beta: &OperatorNormSpec, traj: &GrassTrajectory) -> Result<f64> {
    let s0 = traj.first();
    let im0 = range(&s0.t, RANK_TOL);
    if im0.ncols() == 0 {
        return Err(Error::Degenerate("zero covector has no image plane".into()));
    }
    let base = GrassPoint::new(im0, 1.0)?;
    let start = GrassCotangent::new(base, s0.t.clone())?;
    let (states, _, _) = integrate(beta, &start, traj.duration(), traj.step)?;
    let scale = s0.t.norm();
    let mut worst: f64 = 0.0;
    for (a, b) in traj.states.iter().zip(&states) {
        worst = worst.max((&a.t - &b.t).norm() / scale);
        worst = worst.max(subspace_gap(&range(&a.t, RANK_TOL), b.point.frame()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::linalg::gaussian_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rotation_start(n: usize, k: usize) -> GrassCotangent {
        let base = GrassPoint::coordinate(n, k).unwrap();
        let mut t = Matrix::zeros(n, n);
        t[(0, k)] = 1.0;
        GrassCotangent::new(base, t).unwrap()
    }

    #[test]
    fn hs_rank_one_is_a_planar_rotation() {
        let start = rotation_start(3, 1);
        let beta = OperatorNormSpec::HilbertSchmidt;
        let traj = grass_characteristic_flow(&beta, &start, 2.0 * PI, 2.0 * PI / 600.0, &Default::default()).unwrap();
        let half = traj.at(PI);
        assert!(half.point.same_oriented(&start.base.antipode(), 1e-6));
        assert!(traj.last().point.same_oriented(&start.base, 1e-6));
        for s in traj.states.iter().step_by(50) {
            let y = s.point.frame();
            assert!((y[(0, 0)] - s.time.cos()).abs() < 1e-6 && (y[(1, 0)] - s.time.sin()).abs() < 1e-6);
        }
        assert_eq!(geodesic_rank(&traj).unwrap(), 1);
        assert!(transport_check(&traj).passed);
    }

    #[test]
    fn energy_is_conserved_for_blends() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let base = GrassPoint::haar(&mut rng, 4, 2).unwrap();
        let start = GrassCotangent::from_block(base, &gaussian_matrix(&mut rng, 2, 2)).unwrap();
        for beta in [OperatorNormSpec::Spectral.blended(0.9).unwrap(), OperatorNormSpec::Trace.blended(0.9).unwrap()] {
            let traj = grass_characteristic_flow(&beta, &start, 10.0, 0.01, &Default::default()).unwrap();
            assert!(traj.drift_max < 1e-6, "{} drift {}", beta.name(), traj.drift_max);
            assert_eq!(geodesic_rank(&traj).unwrap(), 2);
            let tr = transport_check(&traj);
            assert!(tr.passed, "{tr:?}");
        }
    }

    #[test]
    fn non_smooth_norms_are_rejected() {
        let start = rotation_start(3, 1);
        assert!(grass_characteristic_flow(&OperatorNormSpec::Spectral, &start, 1.0, 0.1, &Default::default()).is_err());
    }

    #[test]
    fn zero_covector_is_stationary() {
        let base = GrassPoint::coordinate(4, 2).unwrap();
        let start = GrassCotangent::new(base.clone(), Matrix::zeros(4, 4)).unwrap();
        let traj = grass_characteristic_flow(&OperatorNormSpec::HilbertSchmidt, &start, 1.0, 0.1, &Default::default())
            .unwrap();
        assert_eq!(geodesic_rank(&traj).unwrap(), 0);
        assert!(traj.last().point.same_oriented(&base, 1e-12));
    }

    #[test]
    fn image_plane_flow_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let base = GrassPoint::haar(&mut rng, 4, 2).unwrap();
        let mut block = gaussian_matrix(&mut rng, 2, 1) * gaussian_matrix(&mut rng, 1, 2);
        block /= block.norm();
        let start = GrassCotangent::from_block(base, &block).unwrap();
        let beta = OperatorNormSpec::Spectral.blended(0.9).unwrap();
        let traj = grass_characteristic_flow(&beta, &start, 3.0, 0.01, &Default::default()).unwrap();
        assert!(mu_consistency_defect(&beta, &traj).unwrap() < 1e-4);
    }
}
