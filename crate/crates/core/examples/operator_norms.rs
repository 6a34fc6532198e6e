//! Norms on matrices: the unitarily invariant menu, blends, operator gauges,
//! their duals, and the induced quotient norm on Grassmannian tangents.
use qfinsler::grassmann::{
    quotient_tangent_norm, quotient_tangent_norm_numeric, GrassPoint, Matrix, OperatorNormSpec, QuotientOptions,
};
use qfinsler::ConvexBody;

fn main() -> qfinsler::Result<()> {
    let t = Matrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, -1.0, 0.5, 0.3, 0.0, 2.0]);
    let menu = [
        OperatorNormSpec::HilbertSchmidt,
        OperatorNormSpec::Spectral,
        OperatorNormSpec::Trace,
        OperatorNormSpec::Spectral.blended(0.9)?,
        OperatorNormSpec::op_gauge(ConvexBody::lp_ball(1.0, 3, 1.0)?, ConvexBody::lp_ball(3.0, 3, 1.0)?)?,
    ];
    for beta in &menu {
        println!("{:<28} norm {:>10.6}  dual {:>10.6}", beta.name(), beta.norm(&t)?, beta.dual_norm(&t)?);
    }

    // tangent at span(e1) in G̃(3,1): a 2×1 block in complement coordinates
    let line = GrassPoint::coordinate(3, 1)?;
    let f = Matrix::from_column_slice(2, 1, &[0.6, -0.8]);
    for beta in &menu {
        let closed = quotient_tangent_norm(beta, &line, &f)?;
        let numeric = quotient_tangent_norm_numeric(beta, &line, &f, &QuotientOptions::default())?;
        println!("{:<28} quotient {:.8} (numeric {:.8})", beta.name(), closed, numeric.value);
    }
    Ok(())
}
