//! Oriented Grassmannians `G̃(V,k)` with the quotient Finsler structure `φ_β`
//! induced by a norm `β` on `Hom(V,V)`.

mod correspondence;
mod distance;
mod flow;
pub mod linalg;
mod norms;
mod point;

pub use correspondence::{closure_kind, constructed_geodesics, det_identity_defect, geodesic_correspondence_check, invariant_complement, random_invariant_instance, trajectory_length, ClosureKind, ConstructedGeodesic, CorrespondenceReport};
pub use distance::{
    grass_distance, grass_girth, grass_principal_angles, half_turn_path, polyline_length, principal_path, relax,
    relax_multilevel, segment_length, subdivide, transpose_isometry_check, GrassCurve, GrassDistanceOptions,
    GrassGirth, GrassGirthOptions, TransposeReport,
};
pub use flow::{
    geodesic_rank, geodesic_rank_with, grass_characteristic_flow, hamiltonian, hamiltonian_gradient,
    mu_consistency_defect, transport_check, GrassFlowOptions, GrassFlowState, GrassTrajectory, TransportReport,
    RANK_TOL,
};
pub use linalg::Matrix;
pub use norms::{
    cotangent_norm, dual_norm, op_norm, quotient_tangent_norm, quotient_tangent_norm_numeric, DualAscentOptions,
    OpGauge, OperatorNormSpec, QuotientOptions, QuotientSolution, DEFAULT_BLEND, OP_GAUGE_SAMPLES,
};
pub use point::{GrassCotangent, GrassPoint};
