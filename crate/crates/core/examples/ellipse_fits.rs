//! Löwner (outer) and John (inner) ellipses, and the volume ratio.
use qfinsler::bodies::{john_ellipse, loewner_ellipse, volume_ratio, FitOptions};
use qfinsler::ConvexBody;

fn main() -> qfinsler::Result<()> {
    let opts = FitOptions::default();
    for (name, body) in [("square", ConvexBody::square()), ("hexagon", ConvexBody::regular_polygon(3, 1.0)?)] {
        let outer = loewner_ellipse(&body, &opts)?;
        let inner = john_ellipse(&body, &opts)?;
        println!("{name}: area {:.6}", body.area()?);
        println!("  Löwner form {:.6?}  area {:.6}  ({} iterations)", outer.form.as_slice(), outer.area(), outer.iterations);
        println!("  John   form {:.6?}  area {:.6}", inner.form.as_slice(), inner.area());
        println!("  volume ratio {:.6}", volume_ratio(&body, &opts)?);
    }
    Ok(())
}
