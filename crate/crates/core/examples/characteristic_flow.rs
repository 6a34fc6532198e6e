//! Geodesics as projections of the characteristic flow on the co-sphere bundle.
use nalgebra::DMatrix;
use qfinsler::finsler::{cosphere_swap, legendre, SurfaceMetric};
use qfinsler::geodesy::{characteristic_flow, polyline_length, FlowOptions};
use qfinsler::{ConvexBody, Vector};

fn main() -> qfinsler::Result<()> {
    let k = ConvexBody::ellipsoid(DMatrix::from_diagonal(&Vector::from_vec(vec![1.0, 2.0, 3.0])))?;
    let l = ConvexBody::ellipsoid(DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.0, 0.5, 1.0, 0.2, 0.0, 0.2, 1.5]))?;
    let met = SurfaceMetric::quotient(k.clone(), l)?;
    let q = k.to_boundary(&Vector::from_vec(vec![0.3, 0.5, 0.7]));
    let start = legendre(&met, &q, &Vector::from_vec(vec![1.0, -0.4, 0.1]))?.state;

    let free = FlowOptions { project: false, ..Default::default() };
    let tr = characteristic_flow(&met, &start, 10.0, 1e-3, &free)?;
    println!("{} steps, max energy drift {:.2e}", tr.states.len(), tr.drift_max);
    println!("base curve length {:.6} over time 10", polyline_length(&tr.base_curve(), &met));

    // the dual pair's flow is the swapped flow run backward
    let fwd = characteristic_flow(&met, &start, 1.0, 1e-3, &FlowOptions::default())?;
    let bwd = characteristic_flow(&met.dual_pair(), &cosphere_swap(&start), -1.0, 1e-3, &FlowOptions::default())?;
    let dev = fwd
        .states
        .iter()
        .zip(&bwd.states)
        .map(|(a, b)| (&cosphere_swap(&a.state).q - &b.state.q).amax())
        .fold(0.0, f64::max);
    println!("swap deviation {dev:.2e}");
    Ok(())
}
