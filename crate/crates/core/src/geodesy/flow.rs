//! Characteristic (Reeb) flow on the unit co-sphere bundle
//! `{(q, p) : G(q) = 1, H(p) = 1, p(q) = 0}` with `G` the gauge of `K` and
//! `H` the support function of `L`.
//!
//! With `a = <∇G(q), ∇H(p)>` the flow is
//! `q' = ∇H(p) − a q`, `p' = −∇G(q) + a p`; all three constraints are first
//! integrals and the base curve has unit quotient speed.

use super::curve::PolyCurve;
use crate::bodies::Vector;
use crate::error::{Error, Result};
use crate::finsler::{legendre, CoState, MetricKind, SmoothGauge, SurfaceMetric, ROUNDING_POWER};

#[derive(Debug, Clone, Copy)]
pub struct FlowOptions {
    /// Re-project onto the constraint set after every step.
    pub project: bool,
    /// Largest tolerated energy drift per unit time before the step is halved.
    pub drift_rate: f64,
    pub max_halvings: usize,
    /// Rounding exponent used for polytopes.
    pub rounding_power: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { project: true, drift_rate: 1e-4, max_halvings: 20, rounding_power: ROUNDING_POWER }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub state: CoState,
    pub t: f64,
    pub step: f64,
    /// `½ H(p)²` before re-projection.
    pub energy: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<FlowState>,
    /// Sum over steps of `|½H(p)² − ½|` before re-projection.
    pub drift_total: f64,
    pub drift_max: f64,
    pub halvings: usize,
}

impl Trajectory {
    pub fn base_curve(&self) -> PolyCurve {
        PolyCurve::open(self.states.iter().map(|s| s.state.q.clone()).collect())
    }
}

/// Differentiable gauge of `K` and support function of `L`.
#[derive(Debug, Clone)]
pub struct FlowField {
    pub g: SmoothGauge,
    pub h: SmoothGauge,
}

impl FlowField {
    pub fn new(metric: &SurfaceMetric, rounding_power: f64) -> Result<Self> {
        if metric.kind() != MetricKind::Quotient {
            return Err(Error::InvalidInput("characteristic flow is defined for the quotient structure".into()));
        }
        Ok(Self {
            g: SmoothGauge::gauge_of(metric.k(), rounding_power),
            h: SmoothGauge::support_of(metric.l(), rounding_power),
        })
    }

    pub fn rhs(&self, q: &Vector, p: &Vector) -> (Vector, Vector) {
        let gq = self.g.gradient(q);
        let hp = self.h.gradient(p);
        let a = gq.dot(&hp);
        (hp - a * q, -gq + a * p)
    }

    /// Nearest point of the constraint set reached by rescaling `q`, removing
    /// the `q`-component of `p` and rescaling `p`.
    pub fn project(&self, q: &Vector, p: &Vector) -> (Vector, Vector) {
        let q = q / self.g.value(q);
        let p = p - (p.dot(&q) / q.norm_squared()) * &q;
        let p = &p / self.h.value(&p);
        (q, p)
    }

    fn rk4(&self, q: &Vector, p: &Vector, h: f64) -> (Vector, Vector) {
        let (k1q, k1p) = self.rhs(q, p);
        let (k2q, k2p) = self.rhs(&(q + 0.5 * h * &k1q), &(p + 0.5 * h * &k1p));
        let (k3q, k3p) = self.rhs(&(q + 0.5 * h * &k2q), &(p + 0.5 * h * &k2p));
        let (k4q, k4p) = self.rhs(&(q + h * &k3q), &(p + h * &k3p));
        (
            q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
            p + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        )
    }
}

/// Integrates the characteristic flow for `|duration|` time units; a negative
/// duration runs the flow backward. The start state is projected onto the
/// constraint set of the (possibly smoothed) bodies.
pub fn characteristic_flow(
    metric: &SurfaceMetric,
    start: &CoState,
    duration: f64,
    step: f64,
    opts: &FlowOptions,
) -> Result<Trajectory> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput("step must be positive".into()));
    }
    let field = FlowField::new(metric, opts.rounding_power)?;
    let dir = duration.signum();
    let (mut q, mut p) = field.project(&start.q, &start.p);
    let mut t = 0.0;
    let mut h = step;
    let mut halvings = 0;
    let mut drift_total = 0.0;
    let mut drift_max: f64 = 0.0;
    let mut carried = 0.0;
    let mut states = vec![FlowState { state: CoState { q: q.clone(), p: p.clone() }, t, step: h, energy: 0.5 }];
    let end = duration.abs();
    while t < end - 1e-12 * end.max(1.0) {
        let hh = h.min(end - t);
        let (nq, np) = field.rk4(&q, &p, dir * hh);
        let hv = field.h.value(&np);
        let energy = 0.5 * hv * hv;
        let drift = (energy - 0.5).abs() + (field.g.value(&nq) - 1.0).abs() + np.dot(&nq).abs();
        // only the drift added by this step counts; without projection the old drift carries over
        if drift - carried > opts.drift_rate * hh {
            halvings += 1;
            if halvings > opts.max_halvings {
                return Err(Error::NoConvergence { reason: "energy drift persists after step halving".into(), best: drift });
            }
            h *= 0.5;
            continue;
        }
        drift_total += (energy - 0.5).abs();
        drift_max = drift_max.max((energy - 0.5).abs());
        (q, p) = if opts.project { field.project(&nq, &np) } else { (nq, np) };
        if !opts.project {
            carried = drift;
        }
        t += hh;
        states.push(FlowState { state: CoState { q: q.clone(), p: p.clone() }, t: dir * t, step: hh, energy });
    }
    Ok(Trajectory { states, drift_total, drift_max, halvings })
}

/// Sup-norm residual of the flow equations along the Legendre lift of a curve
/// on `∂K` (smooth bodies), reparametrized by quotient arc length. Derivatives
/// are central differences over `stride` points on either side.
pub fn flow_lift_defect(metric: &SurfaceMetric, curve: &PolyCurve, stride: usize) -> Result<f64> {
    let field = FlowField::new(metric, ROUNDING_POWER)?;
    let pts = &curve.points;
    let n = pts.len();
    if n < 4 * stride + 1 {
        return Err(Error::InvalidInput("curve too short for the requested stride".into()));
    }
    let mut s = vec![0.0; n];
    for i in 1..n {
        s[i] = s[i - 1] + super::graph::segment_length(metric, &pts[i - 1], &pts[i]);
    }
    let centered = |x: &[Vector], i: usize| (&x[i + stride] - &x[i - stride]) / (s[i + stride] - s[i - stride]);
    let mut ps = vec![Vector::zeros(pts[0].len()); n];
    for i in stride..n - stride {
        ps[i] = legendre(metric, &pts[i], &centered(pts, i))?.state.p;
    }
    let mut worst: f64 = 0.0;
    for i in 2 * stride..n - 2 * stride {
        let (fq, fp) = field.rhs(&pts[i], &ps[i]);
        worst = worst.max((centered(pts, i) - fq).amax()).max((centered(&ps, i) - fp).amax());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::ConvexBody;
    use crate::finsler::cosphere_swap;
    use nalgebra::DMatrix;
    use std::f64::consts::TAU;

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn great_circle_period() {
        let b = ConvexBody::euclidean_ball(3);
        let met = SurfaceMetric::quotient(b.clone(), b.clone()).unwrap();
        let c = CoState::new(&b, &b, v(&[1., 0., 0.]), v(&[0., 1., 0.])).unwrap();
        let tr = characteristic_flow(&met, &c, TAU, 1e-3, &FlowOptions::default()).unwrap();
        let last = &tr.states.last().unwrap().state;
        assert!((&last.q - &c.q).amax() < 1e-4 && (&last.p - &c.p).amax() < 1e-4);
        let half = tr.states.iter().min_by(|a, b| (a.t - TAU / 4.0).abs().total_cmp(&(b.t - TAU / 4.0).abs())).unwrap();
        assert!((&half.state.q - v(&[0., 1., 0.])).amax() < 1e-3);
    }

    #[test]
    fn energy_drift_on_ellipsoids() {
        let k = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[1.0, 2.0, 3.0]))).unwrap();
        let l = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[2.0, 1.0, 0.5]))).unwrap();
        let met = SurfaceMetric::quotient(k.clone(), l.clone()).unwrap();
        let q = k.to_boundary(&v(&[0.3, 0.5, 0.7]));
        let leg = legendre(&met, &q, &v(&[1.0, -0.4, 0.1])).unwrap();
        let opts = FlowOptions { project: false, ..Default::default() };
        let tr = characteristic_flow(&met, &leg.state, 10.0, 1e-3, &opts).unwrap();
        let last = tr.states.last().unwrap();
        assert!((last.energy - 0.5).abs() < 1e-6);
        assert!((k.gauge(&last.state.q).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn dual_flow_is_the_swap_run_backward() {
        let k = ConvexBody::lp_ball(3.0, 3, 1.0).unwrap();
        let l = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[1.0, 2.0, 0.5]))).unwrap();
        let met = SurfaceMetric::quotient(k.clone(), l.clone()).unwrap();
        let q = k.to_boundary(&v(&[0.2, -0.6, 0.7]));
        let c = legendre(&met, &q, &v(&[0.5, 0.4, 0.2])).unwrap().state;
        let o = FlowOptions::default();
        let fwd = characteristic_flow(&met, &c, 2.0, 1e-3, &o).unwrap();
        let bwd = characteristic_flow(&met.dual_pair(), &cosphere_swap(&c), -2.0, 1e-3, &o).unwrap();
        assert_eq!(fwd.states.len(), bwd.states.len());
        for (a, b) in fwd.states.iter().zip(&bwd.states) {
            let s = cosphere_swap(&a.state);
            assert!((&s.q - &b.state.q).amax() < 1e-9 && (&s.p - &b.state.p).amax() < 1e-9);
        }
    }

    #[test]
    fn flow_base_curve_has_unit_speed() {
        let k = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[1.0, 2.0, 3.0]))).unwrap();
        let l = ConvexBody::lp_ball(1.5, 3, 1.0).unwrap();
        let met = SurfaceMetric::quotient(k.clone(), l).unwrap();
        let q = k.to_boundary(&v(&[0.3, 0.5, 0.7]));
        let c = legendre(&met, &q, &v(&[1.0, -0.4, 0.1])).unwrap().state;
        let tr = characteristic_flow(&met, &c, 1.0, 1e-3, &FlowOptions::default()).unwrap();
        let len = super::super::curve::polyline_length(&tr.base_curve(), &met);
        assert!((len - 1.0).abs() < 1e-5, "{len}");
    }

    #[test]
    fn flow_trajectory_has_small_lift_defect() {
        let k = ConvexBody::ellipsoid(DMatrix::from_diagonal(&v(&[1.0, 2.0, 3.0]))).unwrap();
        let met = SurfaceMetric::quotient(k.clone(), ConvexBody::euclidean_ball(3)).unwrap();
        let q = k.to_boundary(&v(&[0.3, 0.5, 0.7]));
        let c = legendre(&met, &q, &v(&[1.0, -0.4, 0.1])).unwrap().state;
        let tr = characteristic_flow(&met, &c, 2.0, 1e-3, &FlowOptions::default()).unwrap();
        assert!(flow_lift_defect(&met, &tr.base_curve(), 4).unwrap() < 1e-4);
    }
}
