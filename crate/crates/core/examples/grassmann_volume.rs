//! Holmes–Thompson volume of G̃(3,k) by quadrature and G̃(4,k) by Monte Carlo.
use qfinsler::grassmann::OperatorNormSpec;
use qfinsler::htvol::{ht_volume_grassmann, GRASS_MC_SEED};
use qfinsler::ConvexBody;

fn main() -> qfinsler::Result<()> {
    // every unitarily invariant norm gives round fibers; the Hilbert–Schmidt value is 4π²
    let hs = OperatorNormSpec::HilbertSchmidt;
    for k in [1, 2] {
        let v = ht_volume_grassmann(3, k, &hs, 0, 0)?;
        println!("{:<20} G̃(3,{k}) {:.8} ± {:.1e}", hs.name(), v.value, v.std_error);
    }
    let beta = OperatorNormSpec::op_gauge(ConvexBody::lp_ball(1.0, 4, 1.0)?, ConvexBody::lp_ball(3.0, 4, 1.0)?)?;
    for k in [1, 3] {
        let v = ht_volume_grassmann(4, k, &beta, 100_000, GRASS_MC_SEED)?;
        println!("{:<20} G̃(4,{k}) {:.5} ± {:.5}", beta.name(), v.value, v.std_error);
    }
    Ok(())
}
