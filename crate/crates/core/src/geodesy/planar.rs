//! Planar girth: exact piecewise integration for polygons, the tangency
//! parametrization for a single smooth body, and generic arc integration.

use std::f64::consts::{PI, TAU};

use super::curve::PolyCurve;
use crate::bodies::{mahler_volume, volume_ratio, ConvexBody, FitOptions, Vector};
use crate::error::{Error, Result};
use crate::finsler::{quotient_norm, rot90, SurfaceMetric};
use crate::numeric::{integrate, integrate_with_breaks, wrap_angle};

fn unit(t: f64) -> Vector {
    Vector::from_vec(vec![t.cos(), t.sin()])
}

fn angle_of(v: &Vector) -> f64 {
    wrap_angle(v[1].atan2(v[0]))
}

fn check_planar(k: &ConvexBody, l: &ConvexBody) -> Result<()> {
    if k.dim() != 2 {
        return Err(Error::UnsupportedDimension(k.dim()));
    }
    if l.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: l.dim() });
    }
    Ok(())
}

/// Quotient speed of the radial parametrization `θ ↦ u(θ)/gauge_K(u(θ))`:
/// `1 / (gauge_K(u) · h_L(Ju))`.
pub fn girth_integrand(k: &ConvexBody, l: &ConvexBody, theta: f64) -> f64 {
    let u = unit(theta);
    1.0 / (k.gauge_unchecked(&u) * l.support_unchecked(&rot90(&u)))
}

/// Angles in `[0, 2π)` where the girth integrand is not smooth: directions of
/// vertices of `K` and directions `u` with `Ju` normal to an edge of `L`.
fn kink_angles(k: &ConvexBody, l: &ConvexBody) -> Vec<f64> {
    let mut out = Vec::new();
    if let Some(p) = k.as_polytope() {
        out.extend(p.vertices().iter().map(angle_of));
    }
    if let Some(p) = l.as_polytope() {
        // Ju = c  ⇔  u = −J c
        out.extend(p.facets().iter().map(|c| angle_of(&-rot90(c))));
    }
    out
}

fn breakpoints(kinks: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut b = vec![lo, hi];
    for &t in kinks {
        for shift in [-TAU, 0.0, TAU] {
            let s = t + shift;
            if s > lo && s < hi {
                b.push(s);
            }
        }
    }
    b.sort_by(f64::total_cmp);
    b.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    b
}

/// Girth of `(∂K, φ_L)` in the plane.
///
/// In the plane every antipodal pair splits `∂K` into two arcs of equal
/// length, so the girth is the total quotient length of the boundary.
/// Polygons are integrated exactly; `K = L` smooth uses the tangency
/// parametrization; other pairs use adaptive Gauss–Kronrod with kinks as breakpoints.
pub fn girth_2d_closed_form(k: &ConvexBody, l: &ConvexBody) -> Result<f64> {
    check_planar(k, l)?;
    let (k, l) = (k.polygonal_form(), l.polygonal_form());
    if let (Some(pk), Some(pl)) = (k.as_polytope(), l.as_polytope()) {
        return Ok(polygon_girth(pk.facets(), pl.vertices(), &kink_angles(&k, &l)));
    }
    if k == l {
        return Ok(tangency_girth(&k));
    }
    let b = breakpoints(&kink_angles(&k, &l), 0.0, TAU);
    Ok(integrate_with_breaks(|t| girth_integrand(&k, &l, t), &b, 1e-11).value)
}

fn argmax<'a>(items: &'a [Vector], x: &Vector) -> &'a Vector {
    items.iter().max_by(|a, b| a.dot(x).total_cmp(&b.dot(x))).expect("nonempty")
}

/// On each interval between kinks the integrand is `1 / ((a·u)(b·u))` with
/// `a` the active facet covector of `K` and `b = (v_y, −v_x)` for the active
/// vertex `v` of `L`; its antiderivative is `ln((b·u)/(a·u)) / det(a, b)`.
fn polygon_girth(k_facets: &[Vector], l_vertices: &[Vector], kinks: &[f64]) -> f64 {
    let b = breakpoints(kinks, 0.0, TAU);
    let mut total = 0.0;
    for w in b.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let mid = unit(0.5 * (t0 + t1));
        let a = argmax(k_facets, &mid).clone();
        let v = argmax(l_vertices, &rot90(&mid));
        let bb = Vector::from_vec(vec![v[1], -v[0]]);
        let det = a[0] * bb[1] - a[1] * bb[0];
        let (u0, u1) = (unit(t0), unit(t1));
        if det.abs() > 1e-6 * a.norm() * bb.norm() {
            let f = |u: &Vector| (bb.dot(u) / a.dot(u)).ln();
            total += (f(&u1) - f(&u0)) / det;
        } else {
            total += integrate(|t| { let u = unit(t); 1.0 / (a.dot(&u) * bb.dot(&u)) }, t0, t1, 1e-15).value;
        }
    }
    total
}

/// `s(α) = det(γ(α), γ'(α)) / det(γ(α), γ(β(α)))` where `γ(β)` is the boundary
/// point whose tangent is positively parallel to `−γ(α)`.
fn tangency_girth(b: &ConvexBody) -> f64 {
    let s = |alpha: f64| {
        let u = unit(alpha);
        let g = b.gauge_unchecked(&u);
        let gamma = &u / g;
        let beta = tangency_angle(b, alpha);
        let other = b.to_boundary(&unit(beta));
        // det(γ, γ') = det(u, u') / g² = 1 / g²
        (1.0 / (g * g)) / (gamma[0] * other[1] - gamma[1] * other[0])
    };
    integrate(s, 0.0, TAU, 1e-11).value
}

/// Bisection for the angle `β ∈ (α, α + π)` whose outward normal points along `J u(α)`.
fn tangency_angle(b: &ConvexBody, alpha: f64) -> f64 {
    let target = rot90(&unit(alpha));
    let side = |beta: f64| {
        let n = b.gauge_gradient(&unit(beta));
        target[0] * n[1] - target[1] * n[0]
    };
    let (mut lo, mut hi) = (alpha, alpha + PI);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if side(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Quotient length of the counterclockwise boundary arc from angle `t0` to `t1 >= t0`,
/// integrating `φ_γ(γ')` along the radial parametrization.
pub fn arc_length(metric: &SurfaceMetric, t0: f64, t1: f64) -> Result<f64> {
    let k = metric.k();
    let kinks = kink_angles(&k.polygonal_form(), &metric.l().polygonal_form());
    let b = breakpoints(&kinks, t0, t1);
    let mut failure = None;
    let q = integrate_with_breaks(
        |t| {
            let u = unit(t);
            let m = k.to_boundary(&u);
            // γ' = u'/g − (…)u and the quotient ignores the radial part
            let tangent = rot90(&u) / k.gauge_unchecked(&u);
            quotient_norm(metric, &m, &tangent).unwrap_or_else(|e| {
                failure = Some(e);
                0.0
            })
        },
        &b,
        1e-11,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(q.value),
    }
}

fn arc_curve(k: &ConvexBody, t0: f64, t1: f64, n: usize) -> Vec<Vector> {
    (0..=n).map(|i| k.to_boundary(&unit(t0 + (t1 - t0) * i as f64 / n as f64))).collect()
}

/// Shortest of the two boundary arcs joining `a` and `b`, with a witness polyline of `n + 1` points.
pub fn geodesic_distance_2d(metric: &SurfaceMetric, a: &Vector, b: &Vector, n: usize) -> Result<(f64, PolyCurve)> {
    metric.check_point(a)?;
    metric.check_point(b)?;
    let ta = angle_of(a);
    let mut tb = angle_of(b);
    if tb < ta {
        tb += TAU;
    }
    let ccw = arc_length(metric, ta, tb)?;
    let cw = arc_length(metric, tb, ta + TAU)?;
    let k = metric.k();
    Ok(if ccw <= cw {
        (ccw, PolyCurve::open(arc_curve(k, ta, tb, n)))
    } else {
        let mut pts = arc_curve(k, tb, ta + TAU, n);
        pts.reverse();
        (cw, PolyCurve::open(pts))
    })
}

/// `(2/π) · M(B) / vr(B°)²`.
pub fn girth_lower_bound(b: &ConvexBody, opts: &FitOptions) -> Result<f64> {
    let vr = volume_ratio(&b.polar(), opts)?;
    Ok(2.0 / PI * mahler_volume(b)? / (vr * vr))
}

/// Outcome of comparing the girths for two norming bodies `L1 ⊂ L2 ⊂ (1+ε)L1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub g1: f64,
    pub g2: f64,
    pub lower: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Checks `(1+ε)^{-1} g₁ <= g₂ <= (1+ε) g₁` for `g_i = g(∂K, φ_{L_i})`.
/// The caller guarantees `L1 ⊂ L2 ⊂ (1+ε)L1`; a relative slack of `1e-10` absorbs rounding.
pub fn girth_sandwich(k: &ConvexBody, l1: &ConvexBody, l2: &ConvexBody, eps: f64) -> Result<Sandwich> {
    let g1 = girth_2d_closed_form(k, l1)?;
    let g2 = girth_2d_closed_form(k, l2)?;
    let (lower, upper) = (g1 / (1.0 + eps), g1 * (1.0 + eps));
    let slack = 1e-10 * g1;
    Ok(Sandwich { g1, g2, lower, upper, holds: g2 >= lower - slack && g2 <= upper + slack })
}

/// [`girth_sandwich`] for `L2 = (1+ε) L`.
pub fn girth_continuity_check(k: &ConvexBody, l: &ConvexBody, eps: f64) -> Result<Sandwich> {
    girth_sandwich(k, l, &l.scaled(1.0 + eps)?, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn square_closed_form() {
        let sq = ConvexBody::square();
        let g = girth_2d_closed_form(&sq, &sq).unwrap();
        assert!((g - 8.0 * LN_2).abs() < 1e-12, "{g}");
    }

    #[test]
    fn square_octant_integrand() {
        // on [0, π/4] the integrand is 1 / (cos α (sin α + cos α))
        let sq = ConvexBody::square();
        for i in 1..10 {
            let a = i as f64 * PI / 40.0;
            let want = 1.0 / (a.cos() * (a.sin() + a.cos()));
            assert!((girth_integrand(&sq, &sq, a) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn disk_closed_form_both_routes() {
        let d = ConvexBody::euclidean_ball(2);
        assert!((girth_2d_closed_form(&d, &d).unwrap() - TAU).abs() < 1e-10);
        let e = ConvexBody::ellipsoid(nalgebra::DMatrix::from_diagonal(&Vector::from_vec(vec![2.0, 0.5]))).unwrap();
        // homothetic ellipses are linear images of the disk: girth 2π
        assert!((girth_2d_closed_form(&e, &e).unwrap() - TAU).abs() < 1e-9);
        assert!((girth_2d_closed_form(&e, &e.scaled(2.0).unwrap()).unwrap() - PI).abs() < 1e-9);
    }

    #[test]
    fn tangency_route_matches_integrand_route() {
        let b = ConvexBody::lp_ball(3.0, 2, 1.0).unwrap();
        let s = tangency_girth(&b);
        let direct = integrate(|t| girth_integrand(&b, &b, t), 0.0, TAU, 1e-12).value;
        assert!((s - direct).abs() < 1e-8, "{s} vs {direct}");
    }

    #[test]
    fn polygon_pair_matches_quadrature() {
        let k = ConvexBody::regular_polygon(3, 1.0).unwrap();
        let l = ConvexBody::regular_polygon(4, 0.8).unwrap();
        let exact = girth_2d_closed_form(&k, &l).unwrap();
        let b = breakpoints(&kink_angles(&k, &l), 0.0, TAU);
        let quad = integrate_with_breaks(|t| girth_integrand(&k, &l, t), &b, 1e-13).value;
        assert!((exact - quad).abs() < 1e-10);
    }

    #[test]
    fn square_half_boundary_distance() {
        let sq = ConvexBody::square();
        let met = SurfaceMetric::quotient(sq.clone(), sq).unwrap();
        let (d, c) = geodesic_distance_2d(&met, &Vector::from_vec(vec![1., 0.]), &Vector::from_vec(vec![-1., 0.]), 64)
            .unwrap();
        assert!((d - 4.0 * LN_2).abs() < 1e-9);
        assert_eq!(c.len(), 65);
    }

    #[test]
    fn lower_bound_examples() {
        let o = FitOptions::default();
        assert!((girth_lower_bound(&ConvexBody::square(), &o).unwrap() - 4.0).abs() < 1e-7);
        assert!((girth_lower_bound(&ConvexBody::euclidean_ball(2), &o).unwrap() - TAU).abs() < 1e-5);
    }

    #[test]
    fn continuity_examples() {
        let sq = ConvexBody::square();
        let c = girth_continuity_check(&sq, &sq, 0.0).unwrap();
        assert!(c.holds && (c.g1 - c.g2).abs() < 1e-12);
        assert!(girth_continuity_check(&sq, &sq, 0.1).unwrap().holds);
    }
}
