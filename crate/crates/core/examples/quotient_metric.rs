//! The quotient and immersion Finsler norms on a boundary, and the Legendre map.
use nalgebra::DMatrix;
use qfinsler::finsler::{immersion_norm, legendre, quotient_norm, tangent_basis, SurfaceMetric};
use qfinsler::{ConvexBody, Vector};

fn main() -> qfinsler::Result<()> {
    let k = ConvexBody::ellipsoid(DMatrix::from_diagonal(&Vector::from_vec(vec![1.0, 2.0, 3.0])))?;
    let l = ConvexBody::lp_ball(1.5, 3, 1.0)?;
    let quotient = SurfaceMetric::quotient(k.clone(), l.clone())?;
    let immersion = SurfaceMetric::immersion(k.clone(), l)?;
    let m = k.to_boundary(&Vector::from_vec(vec![0.3, 0.5, 0.7]));
    for (i, v) in tangent_basis(&k, &m).iter().enumerate() {
        let phi = quotient_norm(&quotient, &m, v)?;
        let psi = immersion_norm(&immersion, &m, v)?;
        let leg = legendre(&quotient, &m, v)?;
        println!("tangent {i}: phi = {phi:.8}  psi = {psi:.8}  <p, v> = {:.8}", leg.state.p.dot(v));
    }

    // in the plane, L = quarter turn of K° makes the two norms agree
    let k2 = ConvexBody::lp_ball(3.0, 2, 1.0)?;
    let iso = k2.polar().rotate_quarter_turn()?;
    let m2 = k2.to_boundary(&Vector::from_vec(vec![1.0, 0.4]));
    let v2 = tangent_basis(&k2, &m2)[0].clone();
    let phi = quotient_norm(&SurfaceMetric::quotient(k2.clone(), iso.clone())?, &m2, &v2)?;
    let psi = immersion_norm(&SurfaceMetric::immersion(k2, iso)?, &m2, &v2)?;
    println!("isoperimetrix: phi = {phi:.12}, psi = {psi:.12}");
    Ok(())
}
