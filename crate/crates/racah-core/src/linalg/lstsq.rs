//! Householder-QR least squares for the structure-constant fits.

use super::LinalgError;

/// Result of an overdetermined least-squares solve.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub solution: Vec<f64>,
    /// 2-norm of the residual `A x - b`.
    pub residual_norm: f64,
    pub rank_deficient: bool,
}

/// Solve `min ||A x - b||_2` for a tall row-major `rows x cols` matrix via
/// Householder QR without pivoting. Near-zero diagonal entries of R are
/// treated as rank deficiency: the corresponding unknown is set to zero
/// and the deficiency is reported (not fatal).
pub fn qr_least_squares(
    a: &[f64],
    rows: usize,
    cols: usize,
    b: &[f64],
) -> Result<LeastSquares, LinalgError> {
    if rows < cols || a.len() != rows * cols || b.len() != rows {
        return Err(LinalgError::ShapeMismatch {
            expected: rows * cols,
            found: a.len(),
        });
    }
    let mut r = a.to_vec();
    let mut y = b.to_vec();
    let mut col_scale = 0.0_f64;
    for k in 0..cols {
        let norm: f64 = (k..rows)
            .map(|i| r[i * cols + k] * r[i * cols + k])
            .sum::<f64>()
            .sqrt();
        col_scale = col_scale.max(norm);
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[k * cols + k] >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; rows];
        for i in k..rows {
            v[i] = r[i * cols + k];
        }
        v[k] -= alpha;
        let vtv: f64 = (k..rows).map(|i| v[i] * v[i]).sum();
        if vtv == 0.0 {
            continue;
        }
        for j in k..cols {
            let dot: f64 = (k..rows).map(|i| v[i] * r[i * cols + j]).sum();
            let f = 2.0 * dot / vtv;
            for i in k..rows {
                r[i * cols + j] -= f * v[i];
            }
        }
        let dot: f64 = (k..rows).map(|i| v[i] * y[i]).sum();
        let f = 2.0 * dot / vtv;
        for i in k..rows {
            y[i] -= f * v[i];
        }
    }
    let tol = 1e-12 * col_scale.max(1.0);
    let mut x = vec![0.0; cols];
    let mut rank_deficient = false;
    for k in (0..cols).rev() {
        let mut s = y[k];
        for j in (k + 1)..cols {
            s -= r[k * cols + j] * x[j];
        }
        let diag = r[k * cols + k];
        if diag.abs() <= tol {
            rank_deficient = true;
            x[k] = 0.0;
        } else {
            x[k] = s / diag;
        }
    }
    let residual_norm = (cols..rows).map(|i| y[i] * y[i]).sum::<f64>().sqrt();
    Ok(LeastSquares {
        solution: x,
        residual_norm,
        rank_deficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_system_recovered() {
        // 4x2 system with exact solution (2, -3)
        let a = [1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, -1.0];
        let b = [2.0, -3.0, -1.0, 7.0];
        let ls = qr_least_squares(&a, 4, 2, &b).unwrap();
        assert!(!ls.rank_deficient);
        assert!((ls.solution[0] - 2.0).abs() < 1e-13);
        assert!((ls.solution[1] + 3.0).abs() < 1e-13);
        assert!(ls.residual_norm < 1e-13);
    }

    #[test]
    fn least_squares_of_inconsistent_system() {
        // min over x of ||(x, x) - (0, 2)|| -> x = 1, residual sqrt(2)
        let a = [1.0, 1.0];
        let b = [0.0, 2.0];
        let ls = qr_least_squares(&a, 2, 1, &b).unwrap();
        assert!((ls.solution[0] - 1.0).abs() < 1e-14);
        assert!((ls.residual_norm - 2.0_f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn rank_deficiency_flagged() {
        // second column identical to the first
        let a = [1.0, 1.0, 1.0, 1.0, 2.0, 2.0];
        let b = [1.0, 1.0, 2.0];
        let ls = qr_least_squares(&a, 3, 2, &b).unwrap();
        assert!(ls.rank_deficient);
    }
}
