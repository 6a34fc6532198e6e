//! The characteristic flow on T*G̃(4,2) for a smoothed spectral norm: energy,
//! constant rank and the transport of image and kernel.
use qfinsler::grassmann::linalg::gaussian_matrix;
use qfinsler::grassmann::{
    geodesic_rank, grass_characteristic_flow, transport_check, GrassCotangent, GrassFlowOptions, GrassPoint,
    OperatorNormSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfinsler::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let beta = OperatorNormSpec::Spectral.blended(0.9)?;
    let base = GrassPoint::haar(&mut rng, 4, 2)?;
    let start = GrassCotangent::from_block(base, &gaussian_matrix(&mut rng, 2, 2))?;
    let traj = grass_characteristic_flow(&beta, &start, 10.0, 0.01, &GrassFlowOptions::default())?;
    println!("energy {:.10}, max drift {:.2e}, step {}", traj.energy, traj.drift_max, traj.step);
    println!("rank along the flow: {}", geodesic_rank(&traj)?);
    let t = transport_check(&traj);
    println!("transport gaps: plane {:.1e}, image {:.1e}, kernel {:.1e}", t.plane, t.image, t.kernel);
    Ok(())
}
