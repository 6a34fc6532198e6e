//! Girth of a convex surface in space by graph search plus relaxation.
use qfinsler::finsler::SurfaceMetric;
use qfinsler::geodesy::{girth, GirthOptions};
use qfinsler::ConvexBody;

fn main() -> qfinsler::Result<()> {
    let k = ConvexBody::lp_ball(1.5, 3, 1.0)?;
    let opts = GirthOptions::default();
    let g = girth(&SurfaceMetric::quotient(k.clone(), k.clone())?, &opts)?;
    // the polar pair (L°, K°) of (ℓ1.5, ℓ1.5) is (ℓ3, ℓ3)
    let d = girth(&SurfaceMetric::quotient(k.polar(), k.polar())?, &opts)?;
    println!("girth(l1.5) = {:.6}, girth(l3) = {:.6}", g.length, d.length);
    println!("witness: {} points, base point {:?}", g.curve.len(), g.base.as_slice());
    Ok(())
}
