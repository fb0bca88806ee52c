//! Overlaps between the K1 and K2 eigenbases and their identification
//! with Racah polynomial values.
//!
//! The normalized overlap P_n(mu_s) = W[n][s] / W[0][s] is the
//! orthonormal polynomial family of the symmetric tridiagonal K2, so the
//! polynomial identity carries the norm factor:
//! sqrt(h_n) P_n(mu_s) = R_n(lambda(s)) with h_n = prod_{k<=n} C_k/A_{k-1}.

use super::representation::{RepresentationMatrices, RepresentationSpec};
use super::RacahError;
use crate::hypergeo::{norm_ratios, racah_eval, RacahParameters, TruncationKind};
use crate::linalg::{sym_tridiag_eigen, DenseOperator, TridiagonalOperator};

/// Gap threshold under which the K2 spectrum counts as clustered and the
/// polynomial comparison is skipped (eigenvector mixing is arbitrary).
const CLUSTER_GAP: f64 = 1e-10;
/// Tolerance on matching a quartic root to rho or rho - N - 1.
const ROOT_MATCH_TOL: f64 = 1e-8;

/// K2 eigendata in the K1 eigenbasis: eigenvalues `mu` ascending, raw
/// eigenvector columns `w`, and the first-row-normalized `p`.
#[derive(Clone, Debug)]
pub struct OverlapData {
    pub mu: Vec<f64>,
    pub w: DenseOperator,
    /// p[(n, s)] = w[(n, s)] / w[(0, s)]
    pub p: DenseOperator,
}

/// Diagonalize K2 (tridiagonal by construction) and normalize columns by
/// their first component.
pub fn overlaps(m: &RepresentationMatrices) -> Result<OverlapData, RacahError> {
    let n = m.k2.dim();
    let diag: Vec<f64> = (0..n).map(|i| m.k2[(i, i)]).collect();
    let off: Vec<f64> = (0..n - 1).map(|i| m.k2[(i, i + 1)]).collect();
    let t = TridiagonalOperator::new(diag, off)?;
    let eig = sym_tridiag_eigen(&t)?;
    for s in 0..n {
        if eig.vectors[(0, s)].abs() < 1e-12 {
            return Err(RacahError::ZeroOverlapComponent { column: s });
        }
    }
    let p = DenseOperator::from_fn(n, |row, s| eig.vectors[(row, s)] / eig.vectors[(0, s)]);
    Ok(OverlapData {
        mu: eig.values,
        w: eig.vectors,
        p,
    })
}

/// Solve the root parametrization
/// xi1 = -(alpha+beta)/2, xi2 = (beta-alpha)/2 + delta,
/// xi3 = (beta-alpha)/2,  xi4 = gamma - (alpha+beta)/2
/// for (alpha, beta, gamma, delta). With xi1 = rho and
/// xi4 = rho - N - 1 this lands on the gamma truncation, so gamma is
/// snapped to exactly -(N+1) before validation.
pub fn roots_to_racah_params(xi: [f64; 4], n_max: usize) -> Result<RacahParameters, RacahError> {
    let alpha = -xi[0] - xi[2];
    let beta = xi[2] - xi[0];
    let delta = xi[1] - xi[2];
    let gamma_raw = xi[3] - xi[0];
    let gamma_exact = -(n_max as f64) - 1.0;
    if (gamma_raw - gamma_exact).abs() > 1e-6 {
        return Err(RacahError::RootAssignmentNotFound);
    }
    Ok(RacahParameters::new(
        alpha,
        beta,
        gamma_exact,
        delta,
        n_max,
        TruncationKind::Gamma,
    )?)
}

/// Result of the overlap-vs-polynomial comparison.
#[derive(Clone, Debug)]
pub enum OverlapOutcome {
    Compared(OverlapComparison),
    /// K2 eigenvalues too close together; comparison not meaningful.
    SkippedClustered {
        min_gap: f64,
    },
}

#[derive(Clone, Debug)]
pub struct OverlapComparison {
    pub params: RacahParameters,
    /// max over n, s of |sqrt(h_n) P_n(mu_s) - R_n(lambda(s))|
    pub max_deviation: f64,
    /// worst |mu_s - theoretical mu| over the matched pairing
    pub mu_pairing_deviation: f64,
    /// grid point s paired with each eigenvalue column (ascending mu)
    pub s_of_column: Vec<usize>,
}

fn permutations4() -> [[usize; 4]; 24] {
    let mut out = [[0usize; 4]; 24];
    let mut k = 0;
    for a in 0..4 {
        for b in 0..4 {
            if b == a {
                continue;
            }
            for c in 0..4 {
                if c == a || c == b {
                    continue;
                }
                let d = 6 - a - b - c;
                out[k] = [a, b, c, d];
                k += 1;
            }
        }
    }
    out
}

/// Identify Racah parameters from the representation's quartic roots and
/// verify sqrt(h_n) P_n(mu_s) = R_n(lambda(s)) column by column.
///
/// The signed root assignments are scanned in a fixed order (lexicographic
/// permutations, then sign bits). A candidate must match the truncation
/// pattern, yield valid parameters and reproduce the computed K2 spectrum;
/// among those, the one with the smallest polynomial deviation wins (the
/// K2 spectrum alone cannot discriminate, since reflected parameter sets
/// share it while carrying different polynomials). Ties keep the earliest
/// candidate, so the result is deterministic.
pub fn overlap_vs_racah(
    spec: &RepresentationSpec,
    m: &RepresentationMatrices,
) -> Result<OverlapOutcome, RacahError> {
    let n = spec.n_max();
    let data = overlaps(m)?;
    let scale_mu = m.k2.inf_norm().max(1.0);
    let min_gap = data
        .mu
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    if n >= 1 && min_gap < CLUSTER_GAP * scale_mu {
        return Ok(OverlapOutcome::SkippedClustered { min_gap });
    }

    let quartic = spec.quartic()?;
    let coeff_scale = quartic
        .coefficients
        .iter()
        .fold(1.0_f64, |m, c| m.max(c.abs()));
    let root_tol = 1e-8 * coeff_scale.sqrt().max(1.0);
    let mut mags = [0.0; 4];
    for (k, r) in quartic.roots.iter().enumerate() {
        if r.im.abs() > root_tol || r.re < -root_tol {
            return Err(RacahError::ComplexQuarticRoots);
        }
        mags[k] = r.re.max(0.0).sqrt();
    }

    let rho = spec.rho();
    let target4 = rho - n as f64 - 1.0;
    let match_tol = ROOT_MATCH_TOL * rho.abs().max(target4.abs()).max(1.0);
    let mut best: Option<OverlapComparison> = None;
    for perm in permutations4() {
        for bits in 0..16u32 {
            let xi: Vec<f64> = (0..4)
                .map(|i| {
                    let sign = if bits & (1 << i) == 0 { 1.0 } else { -1.0 };
                    sign * mags[perm[i]]
                })
                .collect();
            if (xi[0] - rho).abs() > match_tol || (xi[3] - target4).abs() > match_tol {
                continue;
            }
            let Ok(params) = roots_to_racah_params([xi[0], xi[1], xi[2], xi[3]], n) else {
                continue;
            };
            // theoretical K2 spectrum for this candidate
            let rho_star = -(params.gamma() + params.delta()) / 2.0;
            let mut theo: Vec<(usize, f64)> = (0..=n)
                .map(|s| {
                    let g = rho_star - s as f64;
                    (s, g * (1.0 - g) / 2.0)
                })
                .collect();
            theo.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            let mu_dev = data
                .mu
                .iter()
                .zip(&theo)
                .map(|(&mu, &(_, t))| (mu - t).abs())
                .fold(0.0, f64::max);
            if mu_dev > 1e-6 * scale_mu {
                continue;
            }
            let h = norm_ratios(&params);
            if h.iter().any(|&x| x <= 0.0) {
                continue;
            }
            let mut dev: f64 = 0.0;
            let mut eval_ok = true;
            #[allow(clippy::needless_range_loop)]
            'cols: for (col, &(s, _)) in theo.iter().enumerate() {
                for row in 0..=n {
                    let Ok(r) = racah_eval(row, s, &params) else {
                        eval_ok = false;
                        break 'cols;
                    };
                    let p_val = h[row].sqrt() * data.p[(row, col)];
                    dev = dev.max((p_val - r).abs());
                }
            }
            if !eval_ok {
                continue;
            }
            if best.as_ref().is_none_or(|b| dev < b.max_deviation) {
                best = Some(OverlapComparison {
                    params,
                    max_deviation: dev,
                    mu_pairing_deviation: mu_dev,
                    s_of_column: theo.iter().map(|&(s, _)| s).collect(),
                });
            }
        }
    }
    match best {
        Some(cmp) => Ok(OverlapOutcome::Compared(cmp)),
        None => Err(RacahError::RootAssignmentNotFound),
    }
}

/// Off-tridiagonal-band magnitude of K1 in the K2 eigenbasis, relative to
/// ||K1||: the Leonard-pair property says this is numerically zero.
pub fn leonard_pair_offband(m: &RepresentationMatrices) -> Result<f64, RacahError> {
    let data = overlaps(m)?;
    let k1_in_k2_basis = data.w.transpose().mul(&m.k1.mul(&data.w)?)?;
    let dim = k1_in_k2_basis.dim();
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i.abs_diff(j) > 1 {
                worst = worst.max(k1_in_k2_basis[(i, j)].abs());
            }
        }
    }
    Ok(worst / m.k1.inf_norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::super::representation::{build_representation, spec_from_recoupling};
    use super::*;

    fn spec_from_nus(nu: [f64; 3], n: usize) -> RepresentationSpec {
        spec_from_recoupling(nu, n).unwrap()
    }

    #[test]
    fn trivial_block_overlap() {
        let spec = spec_from_nus([0.6, 0.7, 0.9], 0);
        let m = build_representation(&spec).unwrap();
        let data = overlaps(&m).unwrap();
        assert_eq!(data.w.entries(), &[1.0]);
        assert_eq!(data.p.entries(), &[1.0]);
    }

    #[test]
    fn normalized_rows_and_recurrence() {
        let spec = spec_from_nus([0.8, 1.1, 0.5], 6);
        let m = build_representation(&spec).unwrap();
        let data = overlaps(&m).unwrap();
        let n = spec.n_max();
        for s in 0..=n {
            assert_eq!(data.p[(0, s)], 1.0);
        }
        // mu_s P_n = U_{n+1} P_{n+1} + V_n P_n + U_n P_{n-1}
        let mut worst: f64 = 0.0;
        for s in 0..=n {
            for row in 0..=n {
                let u_next = if row < n { m.k2[(row, row + 1)] } else { 0.0 };
                let u_prev = if row > 0 { m.k2[(row - 1, row)] } else { 0.0 };
                let p_next = if row < n { data.p[(row + 1, s)] } else { 0.0 };
                let p_prev = if row > 0 { data.p[(row - 1, s)] } else { 0.0 };
                let lhs = data.mu[s] * data.p[(row, s)];
                let rhs = u_next * p_next + m.k2[(row, row)] * data.p[(row, s)] + u_prev * p_prev;
                let scale = lhs.abs().max(rhs.abs()).max(1.0);
                worst = worst.max((lhs - rhs).abs() / scale);
            }
        }
        assert!(worst <= 1e-9, "recurrence residual {worst}");
    }

    #[test]
    fn roots_solve_linear_system() {
        // xi1 = xi3 = 0 corner: alpha = beta = 0, delta = xi2, gamma = xi4
        let n_max = 4;
        let xi4 = -(n_max as f64) - 1.0; // rho = 0 corner is invalid for specs but fine linearly
        let p = roots_to_racah_params([0.0, 1.3, 0.0, xi4], n_max).unwrap();
        assert_eq!(p.alpha(), 0.0);
        assert_eq!(p.beta(), 0.0);
        assert_eq!(p.delta(), 1.3);
        assert_eq!(p.gamma(), xi4);
    }

    #[test]
    fn overlap_equals_racah_after_identification() {
        for (nu, n) in [([0.8, 1.3, 0.5], 4_usize), ([1.9, 0.45, 2.2], 7)] {
            let spec = spec_from_nus(nu, n);
            let m = build_representation(&spec).unwrap();
            match overlap_vs_racah(&spec, &m).unwrap() {
                OverlapOutcome::Compared(cmp) => {
                    assert!(
                        cmp.max_deviation <= 1e-8,
                        "deviation {} for nu={nu:?}",
                        cmp.max_deviation
                    );
                }
                OverlapOutcome::SkippedClustered { min_gap } => {
                    panic!("unexpected clustered spectrum (gap {min_gap})");
                }
            }
        }
    }

    #[test]
    fn round_trip_parameters() {
        // parameters -> spec -> quartic roots -> identified parameters:
        // same polynomial values (parameters may land on a relabeling)
        let spec = spec_from_nus([0.8, 1.3, 0.5], 5);
        let m = build_representation(&spec).unwrap();
        let OverlapOutcome::Compared(cmp) = overlap_vs_racah(&spec, &m).unwrap() else {
            panic!("clustered");
        };
        let p = cmp.params;
        assert_eq!(p.n_max(), 5);
        assert!((p.gamma() + 6.0).abs() < 1e-12);
    }

    #[test]
    fn leonard_pair_property() {
        let spec = spec_from_nus([0.7, 1.6, 1.1], 8);
        let m = build_representation(&spec).unwrap();
        assert!(leonard_pair_offband(&m).unwrap() <= 1e-9);
    }
}
