//! Gauges, support functions and polars of the built-in bodies.
use qfinsler::bodies::mahler_volume;
use qfinsler::{BodySpec, ConvexBody, Vector};

fn main() -> qfinsler::Result<()> {
    let spec: BodySpec = serde_json::from_str(r#"{"type": "lp", "p": 3, "dim": 2}"#).expect("valid spec");
    let bodies = [
        ("square", ConvexBody::square()),
        ("hexagon", ConvexBody::regular_polygon(3, 1.0)?),
        ("l3 ball", spec.build()?),
        ("disk", ConvexBody::euclidean_ball(2)),
    ];
    let x = Vector::from_vec(vec![0.6, 0.8]);
    println!("{:<10} {:>10} {:>10} {:>10} {:>10}", "body", "gauge", "support", "polar g", "Mahler");
    for (name, b) in &bodies {
        // the support function of K is the gauge of K°
        println!(
            "{name:<10} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
            b.gauge(&x)?,
            b.support(&x)?,
            b.polar().gauge(&x)?,
            mahler_volume(b)?
        );
    }
    let p = bodies[2].1.support_point(&x);
    println!("support point of the l3 ball in direction {x:?}: {p:?}", x = x.as_slice(), p = p.as_slice());
    Ok(())
}
