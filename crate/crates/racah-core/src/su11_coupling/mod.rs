//! Triple tensor products of su(1,1) positive-discrete-series
//! representations: intermediate and full Casimir matrices on fixed-weight
//! blocks, coupled blocks carrying the Racah algebra with the
//! lambda-built constants, the constants of motion of the generic model
//! on the 2-sphere, and their quadratic (KMP) relations.

mod blocks;
mod coupled;
mod si_model;

pub use blocks::{
    full_casimir_spectrum_check, CasimirPair, DiscreteSeriesRep, LadderElements, WeightBlock,
};
pub use coupled::{
    couple, kappa_overlap_vs_racah, sec6_constants, verify_racah_relations, CoupledBlock,
};
pub use si_model::{
    s_operator_window_residual, si_model_operators, verify_kmp_relations, KmpResiduals,
    SiModelOperators, TRIPLE_SYMMETRIZER_CONVENTION,
};

use crate::linalg::LinalgError;
use crate::racah_algebra::RacahError;

#[derive(Clone, Debug, thiserror::Error)]
pub enum Su11Error {
    #[error("lowest weight nu must be positive, got {nu}")]
    NonPositiveWeight { nu: f64 },
    #[error("block index j = {j} outside 0..={max}")]
    BlockOutOfRange { j: usize, max: usize },
    #[error("C4 eigenspace for j = {j} has dimension {found}, expected {expected}")]
    EigenspaceDimension {
        j: usize,
        expected: usize,
        found: usize,
    },
    #[error("weight window needs quanta >= 1")]
    WindowTooSmall,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Racah(#[from] RacahError),
}
