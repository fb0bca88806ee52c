//! The Racah algebra: structure constants and canonical reduction,
//! closed-form finite-dimensional representations, overlap coefficients,
//! structure-constant extraction, and the realization by the bispectral
//! operators of the Racah polynomials.

mod constants;
mod grid;
mod overlap;
mod representation;

pub use constants::{
    canonicalize, extract_structure_constants, AffineMap, CanonicalConstants, GenericConstants,
    StructureFit,
};
pub use grid::{
    grid_realization, grid_realization_dual, section44_constants, spec_from_grid_parameters,
    GridRealization,
};
pub use overlap::{
    leonard_pair_offband, overlap_vs_racah, overlaps, roots_to_racah_params, OverlapComparison,
    OverlapData, OverlapOutcome,
};
pub use representation::{
    build_representation, casimir, casimir_constancy, quartic, spec_from_recoupling,
    verify_canonical_relations, QuarticData, RelationResiduals, RepresentationMatrices,
    RepresentationSpec,
};

use crate::hypergeo::HypergeoError;
use crate::linalg::LinalgError;

#[derive(Clone, Debug, thiserror::Error)]
pub enum RacahError {
    #[error("invalid representation spec: {invariant}")]
    InvalidSpec { invariant: String },
    #[error("representation not unitary: U_{n}^2 = {value} is not positive")]
    NonUnitary { n: usize, value: f64 },
    #[error("truncation failure: {which} = {value} does not vanish")]
    TruncationFailure { which: &'static str, value: f64 },
    #[error(
        "constants not canonicalizable: a1 * a2 = {a1} * {a2} vanishes (Hahn-type degeneration)"
    )]
    NotCanonicalizable { a1: f64, a2: f64 },
    #[error("quartic has complex xi^2 roots; no real Racah-parameter identification")]
    ComplexQuarticRoots,
    #[error("no signed root assignment satisfies the truncation pattern")]
    RootAssignmentNotFound,
    #[error("overlap column {column} has vanishing leading component; normalization blocked")]
    ZeroOverlapComponent { column: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Hypergeo(#[from] HypergeoError),
}
