//! Holmes–Thompson volumes of curves and surfaces, and their invariance under polarity.
use nalgebra::DMatrix;
use qfinsler::htvol::{ht_volume_curve, ht_volume_surface, SurfaceOptions};
use qfinsler::{ConvexBody, Vector};

fn main() -> qfinsler::Result<()> {
    let sq = ConvexBody::square();
    let disk = ConvexBody::euclidean_ball(2);
    println!("curve (square, disk): {:.10}", ht_volume_curve(&sq, &disk)?.value);
    println!("curve (disk, square): {:.10}", ht_volume_curve(&disk, &sq)?.value);

    let ball = ConvexBody::euclidean_ball(3);
    let opts = SurfaceOptions::default();
    let round = ht_volume_surface(&ball, &ball, &opts)?;
    println!("round sphere: {:.8} ± {:.1e} (4π² = {:.8})", round.value, round.std_error, 4.0 * std::f64::consts::PI.powi(2));

    let k = ConvexBody::ellipsoid(DMatrix::from_diagonal(&Vector::from_vec(vec![1.0, 2.0, 0.5])))?;
    let l = ConvexBody::ellipsoid(DMatrix::from_diagonal(&Vector::from_vec(vec![0.7, 1.3, 2.0])))?;
    let a = ht_volume_surface(&k, &l, &opts)?;
    let b = ht_volume_surface(&l.polar(), &k.polar(), &opts)?;
    println!("ellipsoids: v(K;L) = {:.8} ± {:.1e}, v(L°;K°) = {:.8} ± {:.1e}", a.value, a.std_error, b.value, b.std_error);
    Ok(())
}
