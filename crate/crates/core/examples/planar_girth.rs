//! Girth of planar quotient structures: the closed form, the generic search,
//! duality under polarity and the lower bound.
use qfinsler::bodies::FitOptions;
use qfinsler::finsler::SurfaceMetric;
use qfinsler::geodesy::{girth, girth_2d_closed_form, girth_lower_bound, GirthOptions};
use qfinsler::ConvexBody;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfinsler::Result<()> {
    let sq = ConvexBody::square();
    let exact = girth_2d_closed_form(&sq, &sq)?;
    let generic = girth(&SurfaceMetric::quotient(sq.clone(), sq.clone())?, &GirthOptions::default())?;
    println!("square: closed form {exact:.12} (8 ln 2 = {:.12}), generic {:.12}", 8.0 * 2f64.ln(), generic.length);
    println!("        lower bound {:.6}", girth_lower_bound(&sq, &FitOptions::default())?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let k = ConvexBody::random_symmetric_polygon(&mut rng, 5)?;
    let l = ConvexBody::random_symmetric_polygon(&mut rng, 4)?;
    let g = girth_2d_closed_form(&k, &l)?;
    let d = girth_2d_closed_form(&l.polar(), &k.polar())?;
    println!("random pair: g(K;L) = {g:.12}, g(L°;K°) = {d:.12}");
    Ok(())
}
