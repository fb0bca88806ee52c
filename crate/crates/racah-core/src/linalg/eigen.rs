//! Symmetric eigensolvers: QL with implicit shifts on tridiagonal form,
//! preceded by a Householder reduction for dense symmetric input. The
//! routines follow the classic EISPACK tred2/tql2 recipes and are fully
//! deterministic: identical input produces identical output, eigenvalues
//! ascending, and each eigenvector's first component above 1e-12 in
//! magnitude is made positive.

use super::{DenseOperator, LinalgError, TridiagonalOperator};

const MAX_QL_SWEEPS: usize = 50;
/// Relative gap below which eigenvalues count as a degenerate cluster.
const CLUSTER_GAP: f64 = 1e-10;
/// Threshold for the leading-component sign convention.
const SIGN_EPS: f64 = 1e-12;

/// Eigenvalues (ascending) with orthonormal eigenvectors as columns:
/// `vectors` column `s` belongs to `values[s]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: DenseOperator,
}

/// Full spectrum of a symmetric tridiagonal matrix.
pub fn sym_tridiag_eigen(t: &TridiagonalOperator) -> Result<EigenDecomposition, LinalgError> {
    let n = t.dim();
    let mut d = t.diagonal().to_vec();
    // e[i] holds the element between rows i-1 and i (the layout the QL
    // routine's input shift expects, matching the Householder output)
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(t.offdiagonal());
    let mut z = DenseOperator::identity(n);
    ql_implicit_shifts(&mut d, &mut e, &mut z)?;
    Ok(finalize(d, z, t.inf_norm()))
}

/// Full spectrum of a dense symmetric matrix (Householder + QL).
/// Symmetry is the caller's contract; only the lower triangle is read.
pub fn sym_eigen(a: &DenseOperator) -> Result<EigenDecomposition, LinalgError> {
    let n = a.dim();
    let mut z = a.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiagonalize(&mut z, &mut d, &mut e);
    ql_implicit_shifts(&mut d, &mut e, &mut z)?;
    Ok(finalize(d, z, a.inf_norm()))
}

/// Sort ascending, re-orthonormalize degenerate clusters, fix signs.
fn finalize(d: Vec<f64>, z: DenseOperator, scale: f64) -> EigenDecomposition {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = DenseOperator::from_fn(n, |i, s| z[(i, order[s])]);

    let gap = CLUSTER_GAP * scale.max(1.0);
    let mut s = 0;
    while s < n {
        let mut t = s;
        while t + 1 < n && values[t + 1] - values[t] < gap {
            t += 1;
        }
        if t > s {
            gram_schmidt_columns(&mut vectors, s, t);
        }
        s = t + 1;
    }

    for col in 0..n {
        for row in 0..n {
            let v = vectors[(row, col)];
            if v.abs() > SIGN_EPS {
                if v < 0.0 {
                    for r in 0..n {
                        vectors[(r, col)] = -vectors[(r, col)];
                    }
                }
                break;
            }
        }
    }
    EigenDecomposition { values, vectors }
}

fn gram_schmidt_columns(v: &mut DenseOperator, from: usize, to: usize) {
    let n = v.dim();
    for c in from..=to {
        for p in from..c {
            let dot: f64 = (0..n).map(|r| v[(r, c)] * v[(r, p)]).sum();
            for r in 0..n {
                v[(r, c)] -= dot * v[(r, p)];
            }
        }
        let norm: f64 = (0..n).map(|r| v[(r, c)] * v[(r, c)]).sum::<f64>().sqrt();
        if norm > 0.0 {
            for r in 0..n {
                v[(r, c)] /= norm;
            }
        }
    }
}

/// Householder reduction of a symmetric matrix to tridiagonal form,
/// accumulating the orthogonal transformation in `a` (EISPACK tred2).
fn householder_tridiagonalize(a: &mut DenseOperator, d: &mut [f64], e: &mut [f64]) {
    let n = a.dim();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[(i, k)].abs()).sum();
            if scale == 0.0 {
                e[i] = a[(i, l)];
            } else {
                for k in 0..=l {
                    a[(i, k)] /= scale;
                    h += a[(i, k)] * a[(i, k)];
                }
                let mut f = a[(i, l)];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[(i, l)] = f - g;
                f = 0.0;
                for j in 0..=l {
                    a[(j, i)] = a[(i, j)] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[(j, k)] * a[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g += a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g / h;
                    f += e[j] * a[(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let upd = f * e[k] + g * a[(i, k)];
                        a[(j, k)] -= upd;
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a[(i, k)] * a[(k, j)];
                }
                for k in 0..i {
                    a[(k, j)] -= g * a[(k, i)];
                }
            }
        }
        d[i] = a[(i, i)];
        a[(i, i)] = 1.0;
        for j in 0..i {
            a[(j, i)] = 0.0;
            a[(i, j)] = 0.0;
        }
    }
}

/// QL with implicit shifts on tridiagonal (d, e), rotations accumulated
/// into the columns of `z` (EISPACK tql2).
fn ql_implicit_shifts(
    d: &mut [f64],
    e: &mut [f64],
    z: &mut DenseOperator,
) -> Result<(), LinalgError> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_SWEEPS {
                return Err(LinalgError::NonConvergence { dim: n });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // rotation underflow: deflate and restart this stage
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..z.dim() {
                    f = z[(k, i + 1)];
                    z[(k, i + 1)] = s * z[(k, i)] + c * f;
                    z[(k, i)] = c * z[(k, i)] - s * f;
                }
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_blocks() {
        let t = TridiagonalOperator::new(vec![3.5, 3.5], vec![0.0]).unwrap();
        let eg = sym_tridiag_eigen(&t).unwrap();
        assert_eq!(eg.values, vec![3.5, 3.5]);
    }

    #[test]
    fn two_by_two_hand_solution() {
        // diag=(0,0), off=(1): values (-1, 1), vectors (1,-1)/sqrt2 and (1,1)/sqrt2
        let t = TridiagonalOperator::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let eg = sym_tridiag_eigen(&t).unwrap();
        let s = 0.5_f64.sqrt();
        assert!((eg.values[0] + 1.0).abs() < 1e-15);
        assert!((eg.values[1] - 1.0).abs() < 1e-15);
        assert!((eg.vectors[(0, 0)] - s).abs() < 1e-15);
        assert!((eg.vectors[(1, 0)] + s).abs() < 1e-15);
        assert!((eg.vectors[(0, 1)] - s).abs() < 1e-15);
        assert!((eg.vectors[(1, 1)] - s).abs() < 1e-15);
    }

    fn reconstruction_residual(a: &DenseOperator, eg: &EigenDecomposition) -> f64 {
        let av = a.mul(&eg.vectors).unwrap();
        let vl = eg
            .vectors
            .mul(&DenseOperator::diagonal(&eg.values))
            .unwrap();
        av.sub(&vl).unwrap().inf_norm()
    }

    fn orthogonality_defect(eg: &EigenDecomposition) -> f64 {
        let vtv = eg.vectors.transpose().mul(&eg.vectors).unwrap();
        vtv.sub(&DenseOperator::identity(eg.values.len()))
            .unwrap()
            .inf_norm()
    }

    #[test]
    fn random_tridiagonal_reconstruction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let n = rng.gen_range(2..=50);
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let t = TridiagonalOperator::new(diag, off).unwrap();
            let eg = sym_tridiag_eigen(&t).unwrap();
            let a = t.densify();
            assert!(reconstruction_residual(&a, &eg) <= 1e-12 * a.inf_norm().max(1.0));
            assert!(orthogonality_defect(&eg) <= 1e-12);
            let trace_dev = (eg.values.iter().sum::<f64>() - t.trace()).abs();
            assert!(trace_dev <= 1e-12 * t.trace().abs().max(1.0));
            for w in eg.values.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn dense_symmetric_reconstruction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let n = rng.gen_range(2..=40);
            let mut a = DenseOperator::zeros(n);
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.gen_range(-3.0..3.0);
                    a[(i, j)] = v;
                    a[(j, i)] = v;
                }
            }
            let eg = sym_eigen(&a).unwrap();
            assert!(reconstruction_residual(&a, &eg) <= 1e-12 * a.inf_norm().max(1.0));
            assert!(orthogonality_defect(&eg) <= 1e-12);
        }
    }

    #[test]
    fn degenerate_cluster_stays_orthonormal() {
        // 3-fold degenerate eigenvalue via a scalar matrix plus a rank-one bump
        let mut a = DenseOperator::identity(4).scale(2.0);
        a[(0, 0)] = 5.0;
        let eg = sym_eigen(&a).unwrap();
        assert!(orthogonality_defect(&eg) <= 1e-13);
        assert_eq!(
            eg.values
                .iter()
                .filter(|&&v| (v - 2.0).abs() < 1e-12)
                .count(),
            3
        );
    }

    #[test]
    fn sign_convention_deterministic() {
        let t = TridiagonalOperator::new(vec![1.0, -2.0, 0.5, 3.0], vec![0.7, -1.1, 0.4]).unwrap();
        let e1 = sym_tridiag_eigen(&t).unwrap();
        let e2 = sym_tridiag_eigen(&t).unwrap();
        assert_eq!(e1.vectors.entries(), e2.vectors.entries());
        for col in 0..4 {
            let lead = (0..4)
                .map(|r| e1.vectors[(r, col)])
                .find(|v| v.abs() > 1e-12)
                .unwrap();
            assert!(lead > 0.0);
        }
    }
}
