//! Girth of small oriented Grassmannians and the k ↔ n−k equality.
use qfinsler::grassmann::{grass_distance, grass_girth, GrassDistanceOptions, GrassGirthOptions, GrassPoint, OperatorNormSpec};

fn main() -> qfinsler::Result<()> {
    let opts = GrassGirthOptions::default();
    for beta in [OperatorNormSpec::HilbertSchmidt, OperatorNormSpec::Spectral] {
        for (n, k) in [(3, 1), (3, 2), (4, 1), (4, 3)] {
            let g = grass_girth(n, k, &beta, &opts)?;
            println!("{:<16} G̃({n},{k}) girth {:.6}", beta.name(), g.length);
        }
    }
    let a = GrassPoint::coordinate(4, 2)?;
    let (d, curve) = grass_distance(&OperatorNormSpec::HilbertSchmidt, &a, &a.antipode(), &GrassDistanceOptions::default())?;
    println!("HS distance from span(e1,e2) to its antipode: {d:.6} ({} segments)", curve.points.len() - 1);
    Ok(())
}
