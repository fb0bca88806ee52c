use super::{DenseOperator, LinalgError};

/// Symmetric tridiagonal matrix: `diagonal[n]` on the diagonal and
/// `offdiagonal[n]` at both `(n, n+1)` and `(n+1, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalOperator {
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn new(diagonal: Vec<f64>, offdiagonal: Vec<f64>) -> Result<Self, LinalgError> {
        if diagonal.is_empty() {
            return Err(LinalgError::ZeroDimension);
        }
        if offdiagonal.len() + 1 != diagonal.len() {
            return Err(LinalgError::ShapeMismatch {
                expected: diagonal.len() - 1,
                found: offdiagonal.len(),
            });
        }
        if diagonal.iter().chain(&offdiagonal).any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFiniteEntry);
        }
        Ok(Self {
            diagonal,
            offdiagonal,
        })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[f64] {
        &self.offdiagonal
    }

    pub fn densify(&self) -> DenseOperator {
        let n = self.dim();
        let mut m = DenseOperator::zeros(n);
        for i in 0..n {
            m[(i, i)] = self.diagonal[i];
        }
        for i in 0..n - 1 {
            m[(i, i + 1)] = self.offdiagonal[i];
            m[(i + 1, i)] = self.offdiagonal[i];
        }
        m
    }

    pub fn trace(&self) -> f64 {
        self.diagonal.iter().sum()
    }

    pub fn inf_norm(&self) -> f64 {
        self.densify().inf_norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn densify_is_symmetric() {
        let t = TridiagonalOperator::new(vec![1.0, 2.0, 3.0], vec![0.5, -0.25]).unwrap();
        let d = t.densify();
        assert_eq!(d[(0, 1)], d[(1, 0)]);
        assert_eq!(d[(1, 2)], d[(2, 1)]);
        assert_eq!(d[(0, 2)], 0.0);
        assert!(d.is_symmetric(0.0));
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(TridiagonalOperator::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(TridiagonalOperator::new(vec![], vec![]).is_err());
    }
}
