//! Invariant complements and the map from closed geodesics of G̃(V,k) to G̃(V,n−k).
use nalgebra::DMatrix;
use qfinsler::grassmann::{
    constructed_geodesics, det_identity_defect, geodesic_correspondence_check, grass_characteristic_flow,
    invariant_complement, GrassFlowOptions, GrassPoint, OperatorNormSpec,
};

fn main() -> qfinsler::Result<()> {
    // a Jordan block on span(e1, e2)
    let t = DMatrix::from_row_slice(4, 4, &[2.0, 1.0, 0.5, -1.0, 0.0, 2.0, 0.3, 0.7, 0.0, 0.0, 3.0, 1.0, 0.0, 0.0, 0.0, -1.5]);
    let lambda = GrassPoint::coordinate(4, 2)?;
    let omega = invariant_complement(&t, &lambda, 0)?;
    println!("invariant complement frame {:.4?}", omega.frame().as_slice());
    println!("det identity defect {:.2e}", det_identity_defect(&t, &lambda, &omega));

    let beta = OperatorNormSpec::HilbertSchmidt;
    for g in constructed_geodesics()? {
        let traj = grass_characteristic_flow(&beta, &g.start, g.period, g.period / 400.0, &GrassFlowOptions::default())?;
        let rep = geodesic_correspondence_check(&beta, &traj, 1)?;
        println!(
            "{:<28} lengths {:.6}/{:.6} ranks {:?} kinds {:?} transport gap {:.1e} -> {}",
            g.name,
            rep.length.0,
            rep.length.1,
            rep.rank,
            rep.kind,
            rep.transport_gap,
            if rep.passed { "ok" } else { "mismatch" }
        );
    }
    Ok(())
}
