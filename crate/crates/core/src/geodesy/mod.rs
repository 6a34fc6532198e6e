//! Lengths, geodesic distances, girth and the characteristic flow.

mod curve;
mod flow;
mod graph;
mod planar;

use std::f64::consts::TAU;

use rayon::prelude::*;

pub use curve::{curve_length, polyline_length, LengthOptions, PolyCurve};
pub use flow::{characteristic_flow, flow_lift_defect, FlowField, FlowOptions, FlowState, Trajectory};
pub use graph::{geodesic_distance_3d, multilevel_relax, relax, segment_length, GraphGeodesic, GraphOptions, SurfaceGraph};
pub use planar::{
    arc_length, geodesic_distance_2d, girth_2d_closed_form, girth_continuity_check, girth_integrand, girth_lower_bound,
    girth_sandwich, Sandwich,
};

use crate::bodies::{boundary_sample, SphereMesh, Vector};
use crate::error::{Error, Result};
use crate::finsler::SurfaceMetric;

#[derive(Debug, Clone, Copy)]
pub struct GirthOptions {
    /// Antipodal base-point candidates.
    pub candidates: usize,
    /// Halvings of the pattern-search step.
    pub shrink_rounds: usize,
    /// Points per half of the returned planar witness curve.
    pub curve_points: usize,
    /// Candidates (ranked by graph distance) that get relaxed in space.
    pub relaxed_candidates: usize,
    pub graph: GraphOptions,
}

impl Default for GirthOptions {
    fn default() -> Self {
        Self { candidates: 64, shrink_rounds: 10, curve_points: 256, relaxed_candidates: 3, graph: GraphOptions::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Girth {
    pub length: f64,
    /// Closed antipodally symmetric witness curve.
    pub curve: PolyCurve,
    /// Base point `p` of the minimizing pair `(p, −p)`.
    pub base: Vector,
}

/// Geodesic distance between two points of `∂K` with a witness curve.
pub fn geodesic_distance(metric: &SurfaceMetric, a: &Vector, b: &Vector, opts: &GirthOptions) -> Result<(f64, PolyCurve)> {
    match metric.dim() {
        2 => geodesic_distance_2d(metric, a, b, opts.curve_points),
        3 => {
            let g = SurfaceGraph::build(metric, &opts.graph)?;
            let r = geodesic_distance_3d(metric, &g, a, b, &opts.graph)?;
            Ok((r.length, r.curve))
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn symmetric_closure(half: PolyCurve) -> PolyCurve {
    let mut pts = half.points.clone();
    let n = pts.len();
    pts.extend(half.points[1..n - 1].iter().map(|p| -p));
    PolyCurve::closed(pts)
}

/// `2 · min_p dist(p, −p)` over sampled base points with pattern-search refinement.
pub fn girth(metric: &SurfaceMetric, opts: &GirthOptions) -> Result<Girth> {
    match metric.dim() {
        2 => girth_planar(metric, opts),
        3 => girth_spatial(metric, opts),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn girth_planar(metric: &SurfaceMetric, opts: &GirthOptions) -> Result<Girth> {
    let k = metric.k();
    let at = |t: f64| k.to_boundary(&Vector::from_vec(vec![t.cos(), t.sin()]));
    let half_dist = |t: f64| -> Result<f64> {
        let p = at(t);
        Ok(geodesic_distance_2d(metric, &p, &-&p, 1)?.0)
    };
    let n = opts.candidates.max(2);
    // dist(p, −p) = dist(−p, p): half the circle of base points suffices
    let values: Vec<Result<f64>> = (0..n).into_par_iter().map(|i| half_dist(TAU * 0.5 * i as f64 / n as f64)).collect();
    let mut best_t = 0.0;
    let mut best = f64::INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        let v = v?;
        if v < best {
            best = v;
            best_t = TAU * 0.5 * i as f64 / n as f64;
        }
    }
    let mut step = TAU * 0.5 / n as f64;
    for _ in 0..opts.shrink_rounds {
        let mut moved = true;
        while moved {
            moved = false;
            for t in [best_t - step, best_t + step] {
                let v = half_dist(t)?;
                if v < best {
                    best = v;
                    best_t = t;
                    moved = true;
                }
            }
        }
        step *= 0.5;
    }
    let p = at(best_t);
    let (d, half) = geodesic_distance_2d(metric, &p, &-&p, opts.curve_points)?;
    Ok(Girth { length: 2.0 * d, curve: symmetric_closure(half), base: p })
}

fn girth_spatial(metric: &SurfaceMetric, opts: &GirthOptions) -> Result<Girth> {
    let graph = SurfaceGraph::build(metric, &opts.graph)?;
    let k = metric.k();
    let freq = SphereMesh::icosahedral_frequency_for(opts.candidates);
    let seeds = boundary_sample(k, 10 * freq * freq + 2)?;
    let mut sources: Vec<usize> = seeds
        .iter()
        .map(|s| {
            (0..graph.len())
                .min_by(|&i, &j| (&graph.points[i] - s).norm().total_cmp(&(&graph.points[j] - s).norm()))
                .unwrap_or(0)
        })
        .collect();
    sources.sort_unstable();
    sources.dedup();
    let mut ranked: Vec<(f64, usize, Vec<usize>)> = sources
        .par_iter()
        .map(|&s| {
            let (d, pred) = graph.dijkstra(s);
            (d[graph.antipode[s]], s, pred)
        })
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    ranked.truncate(opts.relaxed_candidates.max(1));
    let relaxed: Vec<Result<(GraphGeodesic, usize)>> = ranked
        .par_iter()
        .map(|(_, s, pred)| {
            let raw = graph.path(pred, *s, graph.antipode[*s])?;
            Ok((graph::finish(metric, raw, &opts.graph)?, *s))
        })
        .collect();
    let mut best: Option<(GraphGeodesic, Vector)> = None;
    for r in relaxed {
        let (g, s) = r?;
        if best.as_ref().is_none_or(|(b, _)| g.length < b.length) {
            best = Some((g, graph.points[s].clone()));
        }
    }
    let (mut best_geo, mut base) = best.ok_or_else(|| Error::Degenerate("no girth candidates".into()))?;

    let spacing = graph.adjacency[0].iter().map(|&(j, _)| (&graph.points[j] - &graph.points[0]).norm()).sum::<f64>()
        / graph.adjacency[0].len() as f64;
    let mut step = spacing;
    let eval = |p: &Vector| geodesic_distance_3d(metric, &graph, p, &-p, &opts.graph);
    for _ in 0..opts.shrink_rounds {
        let r = base.normalize();
        let i = r.iamin();
        let mut e = Vector::zeros(3);
        e[i] = 1.0;
        let e1 = (&e - e.dot(&r) * &r).normalize();
        let e2 = r.cross(&e1);
        let trials: Vec<Vector> = [&e1 * step, -&e1 * step, &e2 * step, -&e2 * step]
            .iter()
            .map(|d| k.to_boundary(&(&base + d)))
            .collect();
        let results: Vec<Result<GraphGeodesic>> = trials.par_iter().map(eval).collect();
        let mut improved = false;
        for (p, r) in trials.into_iter().zip(results) {
            let g = r?;
            if g.length < best_geo.length {
                best_geo = g;
                base = p;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(Girth { length: 2.0 * best_geo.length, curve: symmetric_closure(best_geo.curve), base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::ConvexBody;
    use std::f64::consts::LN_2;

    #[test]
    fn square_generic_girth() {
        let sq = ConvexBody::square();
        let met = SurfaceMetric::quotient(sq.clone(), sq).unwrap();
        let g = girth(&met, &GirthOptions::default()).unwrap();
        assert!((g.length - 8.0 * LN_2).abs() < 1e-6, "{}", g.length);
        assert!(g.curve.closed);
    }

    #[test]
    fn disk_generic_girth() {
        let d = ConvexBody::euclidean_ball(2);
        let met = SurfaceMetric::quotient(d.clone(), d).unwrap();
        let g = girth(&met, &GirthOptions::default()).unwrap();
        assert!((g.length - TAU).abs() < 1e-6);
    }
}
