use crate::bodies::{ConvexBody, Vector};
use crate::error::{Error, Result};
use crate::finsler::{quotient_value, SurfaceMetric, SURFACE_TOL};

/// Polyline on the boundary of `K`, parametrized uniformly in the index.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    pub points: Vec<Vector>,
    pub closed: bool,
}

impl PolyCurve {
    pub fn open(points: Vec<Vector>) -> Self {
        Self { points, closed: false }
    }

    pub fn closed(points: Vec<Vector>) -> Self {
        Self { points, closed: true }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Consecutive point pairs, including the closing one.
    pub fn segments(&self) -> impl Iterator<Item = (&Vector, &Vector)> {
        let n = self.points.len();
        let extra = if self.closed && n > 1 { 1 } else { 0 };
        (0..n.saturating_sub(1) + extra).map(move |i| (&self.points[i], &self.points[(i + 1) % n]))
    }

    /// Largest `|gauge_K(x) − 1|` over the points.
    pub fn surface_defect(&self, k: &ConvexBody) -> f64 {
        self.points.iter().map(|p| (k.gauge_unchecked(p) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Inserts the radially projected midpoint of every segment.
    pub fn refined(&self, k: &ConvexBody) -> Self {
        let mut points = Vec::with_capacity(2 * self.points.len());
        for (a, b) in self.segments() {
            points.push(a.clone());
            points.push(k.to_boundary(&((a + b) * 0.5)));
        }
        if !self.closed {
            if let Some(last) = self.points.last() {
                points.push(last.clone());
            }
        }
        Self { points, closed: self.closed }
    }

    /// The curve with every point negated.
    pub fn antipodal(&self) -> Self {
        Self { points: self.points.iter().map(|p| -p).collect(), closed: self.closed }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LengthOptions {
    /// Relative change between successive refinements at which to stop.
    pub rel_tol: f64,
    /// Maximum number of midpoint refinements.
    pub max_refinements: usize,
}

impl Default for LengthOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-6, max_refinements: 8 }
    }
}

/// Length of the polyline with no refinement: each chord is measured by the
/// quotient norm at the projected chord midpoint.
pub fn polyline_length(curve: &PolyCurve, metric: &SurfaceMetric) -> f64 {
    let k = metric.k();
    curve
        .segments()
        .map(|(a, b)| quotient_value(metric.l(), &k.to_boundary(&((a + b) * 0.5)), &(b - a)))
        .sum()
}

/// Length of a curve on `∂K`, refined by midpoint insertion until successive
/// values agree to `rel_tol`.
pub fn curve_length(curve: &PolyCurve, metric: &SurfaceMetric, opts: &LengthOptions) -> Result<f64> {
    let defect = curve.surface_defect(metric.k());
    if defect > SURFACE_TOL {
        return Err(Error::InvariantViolation(format!("curve leaves the surface by {defect:e}")));
    }
    let mut c = curve.clone();
    let mut len = polyline_length(&c, metric);
    for _ in 0..opts.max_refinements {
        c = c.refined(metric.k());
        let next = polyline_length(&c, metric);
        let change = (next - len).abs();
        len = next;
        if change <= opts.rel_tol * len {
            break;
        }
    }
    Ok(len)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{LN_2, TAU};

    fn v(x: &[f64]) -> Vector {
        Vector::from_column_slice(x)
    }

    #[test]
    fn equator_of_round_sphere() {
        let b = ConvexBody::euclidean_ball(3);
        let met = SurfaceMetric::quotient(b.clone(), b).unwrap();
        let pts = (0..4096).map(|i| TAU * i as f64 / 4096.0).map(|t| v(&[t.cos(), t.sin(), 0.0])).collect();
        let len = curve_length(&PolyCurve::closed(pts), &met, &LengthOptions::default()).unwrap();
        assert!((len - TAU).abs() < 1e-6);
    }

    #[test]
    fn square_boundary() {
        let sq = ConvexBody::square();
        let met = SurfaceMetric::quotient(sq.clone(), sq).unwrap();
        let corners = vec![v(&[1., 1.]), v(&[-1., 1.]), v(&[-1., -1.]), v(&[1., -1.])];
        let len = curve_length(&PolyCurve::closed(corners), &met, &LengthOptions { rel_tol: 1e-9, max_refinements: 14 })
            .unwrap();
        assert!((len - 8.0 * LN_2).abs() < 1e-4, "{len}");
    }

    #[test]
    fn off_surface_curve_is_rejected() {
        let sq = ConvexBody::square();
        let met = SurfaceMetric::quotient(sq.clone(), sq).unwrap();
        let c = PolyCurve::open(vec![v(&[1., 0.]), v(&[0.5, 0.5])]);
        assert!(matches!(curve_length(&c, &met, &LengthOptions::default()), Err(Error::InvariantViolation(_))));
    }
}
