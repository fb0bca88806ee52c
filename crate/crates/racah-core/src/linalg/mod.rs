//! Dense and symmetric-tridiagonal matrix arithmetic, commutators, a
//! deterministic symmetric eigensolver, least squares and polynomial
//! roots: the numerical substrate for every verification in this crate.
//!
//! All types are immutable values after construction and every operation
//! is a pure function, so everything here is safe to use from multiple
//! threads without synchronization.

mod dense;
mod eigen;
mod lstsq;
mod polyroots;
mod tridiag;

pub use dense::{anticommutator, commutator, residual, DenseOperator};
pub use eigen::{sym_eigen, sym_tridiag_eigen, EigenDecomposition};
pub use lstsq::{qr_least_squares, LeastSquares};
pub use polyroots::{monic_roots, ComplexRoot};
pub use tridiag::TridiagonalOperator;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("operator dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("entry buffer has wrong length: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("matrix entries must be finite")]
    NonFiniteEntry,
    #[error("operators must have dimension at least 1")]
    ZeroDimension,
    #[error("eigensolver failed to converge for dimension {dim}")]
    NonConvergence { dim: usize },
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(dim: usize) -> impl Strategy<Value = DenseOperator> {
        proptest::collection::vec(-5.0..5.0_f64, dim * dim)
            .prop_map(move |v| DenseOperator::new(dim, v).unwrap())
    }

    proptest! {
        #[test]
        fn jacobi_identity(a in small_matrix(4), b in small_matrix(4), c in small_matrix(4)) {
            let t1 = commutator(&a, &commutator(&b, &c).unwrap()).unwrap();
            let t2 = commutator(&c, &commutator(&a, &b).unwrap()).unwrap();
            let t3 = commutator(&b, &commutator(&c, &a).unwrap()).unwrap();
            let sum = t1.add(&t2).unwrap().add(&t3).unwrap();
            let scale = t1.inf_norm().max(t2.inf_norm()).max(t3.inf_norm()).max(1.0);
            prop_assert!(sum.inf_norm() <= 1e-12 * scale);
        }

        #[test]
        fn commutator_antisymmetric(a in small_matrix(3), b in small_matrix(3)) {
            let ab = commutator(&a, &b).unwrap();
            let ba = commutator(&b, &a).unwrap();
            let sum = ab.add(&ba).unwrap();
            prop_assert!(sum.inf_norm() <= 1e-12 * ab.inf_norm().max(1.0));
        }

        #[test]
        fn residual_symmetric_in_arguments(a in small_matrix(3), b in small_matrix(3)) {
            let r1 = residual(&a, &b).unwrap();
            let r2 = residual(&b, &a).unwrap();
            prop_assert!((r1 - r2).abs() <= 1e-15);
        }
    }
}
