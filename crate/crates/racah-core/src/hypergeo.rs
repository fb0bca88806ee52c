//! Terminating generalized hypergeometric series and the Racah
//! polynomial family on the quadratic grid lambda(x) = x(x+gamma+delta+1):
//! values, recurrence and difference-operator coefficients, orthogonality
//! weights and norms, and the parameter duality.

use crate::linalg::{sym_tridiag_eigen, TridiagonalOperator};

/// Tolerance below which a denominator counts as vanishing.
const DENOM_EPS: f64 = 1e-12;
/// Tolerance for the truncation condition itself.
const TRUNCATION_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HypergeoError {
    #[error("no numerator parameter is a nonpositive integer; series does not terminate")]
    NonTerminating,
    #[error(
        "denominator Pochhammer ({value}) vanishes at term {step}, before the series terminates"
    )]
    DenominatorPochhammerZero { value: String, step: usize },
    #[error("truncation condition {condition} violated: residual {residual}")]
    TruncationViolated { condition: String, residual: String },
    #[error("denominator {name} vanishes at index {index}")]
    VanishingDenominator { name: &'static str, index: usize },
    #[error("symmetrization failure at off-diagonal {index}: A_n * C_(n+1) not positive")]
    SymmetrizationFailure { index: usize },
    #[error("Jacobi-matrix spectrum does not match the lambda(x) grid (index {index})")]
    SpectralGridMismatch { index: usize },
    #[error("dual parameter set invalid: {0}")]
    DualParametersInvalid(Box<HypergeoError>),
}

/// Which of the three admissible truncation conditions a parameter set
/// satisfies. Explicit rather than inferred, so that sets satisfying two
/// conditions at once stay unambiguous.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationKind {
    /// alpha + 1 = -N
    Alpha,
    /// beta + delta + 1 = -N
    BetaDelta,
    /// gamma + 1 = -N
    Gamma,
}

impl TruncationKind {
    pub fn condition(&self) -> &'static str {
        match self {
            TruncationKind::Alpha => "alpha + 1 = -N",
            TruncationKind::BetaDelta => "beta + delta + 1 = -N",
            TruncationKind::Gamma => "gamma + 1 = -N",
        }
    }

    /// The kind satisfied by the dual set (alpha<->gamma, beta<->delta).
    pub fn dual(&self) -> TruncationKind {
        match self {
            TruncationKind::Alpha => TruncationKind::Gamma,
            TruncationKind::BetaDelta => TruncationKind::BetaDelta,
            TruncationKind::Gamma => TruncationKind::Alpha,
        }
    }
}

/// Validated parameters (alpha, beta, gamma, delta, N) of a finite Racah
/// family R_n(lambda(x)), n, x = 0..N.
#[derive(Clone, Debug, PartialEq)]
pub struct RacahParameters {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    n_max: usize,
    truncation: TruncationKind,
}

/// A point of the quadratic spectral grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub x: usize,
    pub lambda: f64,
}

impl RacahParameters {
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        n_max: usize,
        truncation: TruncationKind,
    ) -> Result<Self, HypergeoError> {
        let nf = n_max as f64;
        let trunc_residual = match truncation {
            TruncationKind::Alpha => alpha + 1.0 + nf,
            TruncationKind::BetaDelta => beta + delta + 1.0 + nf,
            TruncationKind::Gamma => gamma + 1.0 + nf,
        };
        if trunc_residual.abs() > TRUNCATION_EPS {
            return Err(HypergeoError::TruncationViolated {
                condition: truncation.condition().to_string(),
                residual: format!("{trunc_residual:e}"),
            });
        }
        let p = Self {
            alpha,
            beta,
            gamma,
            delta,
            n_max,
            truncation,
        };
        // Denominators of A_n (n = 0..N), C_n (n = 1..N; C_0 = 0 by its
        // numerator factor n), B(x) (x = 0..N), D(x) (x = 1..N).
        for n in 0..=n_max {
            let t = 2.0 * n as f64 + alpha + beta;
            if (t + 1.0).abs() < DENOM_EPS || (t + 2.0).abs() < DENOM_EPS {
                return Err(HypergeoError::VanishingDenominator {
                    name: "A_n",
                    index: n,
                });
            }
            if n >= 1 && (t.abs() < DENOM_EPS || (t + 1.0).abs() < DENOM_EPS) {
                return Err(HypergeoError::VanishingDenominator {
                    name: "C_n",
                    index: n,
                });
            }
            let u = 2.0 * n as f64 + gamma + delta;
            if (u + 1.0).abs() < DENOM_EPS || (u + 2.0).abs() < DENOM_EPS {
                return Err(HypergeoError::VanishingDenominator {
                    name: "B_x",
                    index: n,
                });
            }
            if n >= 1 && (u.abs() < DENOM_EPS || (u + 1.0).abs() < DENOM_EPS) {
                return Err(HypergeoError::VanishingDenominator {
                    name: "D_x",
                    index: n,
                });
            }
        }
        Ok(p)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn n_max(&self) -> usize {
        self.n_max
    }
    pub fn truncation(&self) -> TruncationKind {
        self.truncation
    }

    /// lambda(x) = x (x + gamma + delta + 1).
    pub fn lambda(&self, x: usize) -> f64 {
        let xf = x as f64;
        xf * (xf + self.gamma + self.delta + 1.0)
    }

    pub fn grid_point(&self, x: usize) -> GridPoint {
        GridPoint {
            x,
            lambda: self.lambda(x),
        }
    }

    /// Eigenvalue of the difference operator: n (n + alpha + beta + 1).
    pub fn difference_eigenvalue(&self, n: usize) -> f64 {
        let nf = n as f64;
        nf * (nf + self.alpha + self.beta + 1.0)
    }

    /// The dual set (gamma, delta, alpha, beta) with the mapped truncation.
    pub fn dual(&self) -> Result<RacahParameters, HypergeoError> {
        RacahParameters::new(
            self.gamma,
            self.delta,
            self.alpha,
            self.beta,
            self.n_max,
            self.truncation.dual(),
        )
        .map_err(|e| HypergeoError::DualParametersInvalid(Box::new(e)))
    }
}

/// Compensated (double-double) accumulation for the terminating series.
///
/// The partial terms alternate in sign and can exceed the sum by many
/// orders of magnitude once N reaches ~15, wiping out plain binary64
/// accumulation; carrying the term and the running sum as hi/lo pairs
/// keeps the value correctly rounded at the cost of a few extra flops.
mod dd {
    #[derive(Clone, Copy)]
    pub struct Dd {
        pub hi: f64,
        pub lo: f64,
    }

    const SPLIT: f64 = 134_217_729.0; // 2^27 + 1

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        let aa = SPLIT * a;
        let a_hi = aa - (aa - a);
        let a_lo = a - a_hi;
        let bb = SPLIT * b;
        let b_hi = bb - (bb - b);
        let b_lo = b - b_hi;
        let e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo;
        (p, e)
    }

    impl Dd {
        pub fn from(x: f64) -> Dd {
            Dd { hi: x, lo: 0.0 }
        }

        pub fn add(self, other: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, other.hi);
            let (hi, lo) = quick_two_sum(s, e + self.lo + other.lo);
            Dd { hi, lo }
        }

        pub fn mul_f64(self, x: f64) -> Dd {
            let (p, e) = two_prod(self.hi, x);
            let (hi, lo) = quick_two_sum(p, e + self.lo * x);
            Dd { hi, lo }
        }

        pub fn div_f64(self, x: f64) -> Dd {
            let q1 = self.hi / x;
            let (p, e) = two_prod(q1, x);
            let q2 = ((self.hi - p) - e + self.lo) / x;
            let (hi, lo) = quick_two_sum(q1, q2);
            Dd { hi, lo }
        }
    }
}

/// Terminating pFq at `argument`, summed term-by-term with ratio updates
/// in compensated arithmetic.
///
/// At least one numerator parameter must be a nonpositive integer (within
/// 1e-12); the sum runs to the smallest such truncation index. Fails if a
/// denominator Pochhammer vanishes at or before that index.
pub fn phfq_terminating(
    numerator: &[f64],
    denominator: &[f64],
    argument: f64,
) -> Result<f64, HypergeoError> {
    let mut j_max: Option<usize> = None;
    for &a in numerator {
        let r = a.round();
        if (a - r).abs() <= DENOM_EPS && r <= 0.0 {
            let m = (-r) as usize;
            j_max = Some(j_max.map_or(m, |cur| cur.min(m)));
        }
    }
    let j_max = j_max.ok_or(HypergeoError::NonTerminating)?;
    for &b in denominator {
        for m in 0..j_max {
            if (b + m as f64).abs() <= DENOM_EPS {
                return Err(HypergeoError::DenominatorPochhammerZero {
                    value: format!("{b}"),
                    step: m + 1,
                });
            }
        }
    }
    // pFq is symmetric in its numerator list and in its denominator list;
    // evaluating in sorted order makes the value independent of how the
    // caller happened to arrange the parameters.
    let mut num = numerator.to_vec();
    let mut den = denominator.to_vec();
    num.sort_by(|a, b| a.partial_cmp(b).unwrap());
    den.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sum = dd::Dd::from(1.0);
    let mut term = dd::Dd::from(1.0);
    for j in 0..j_max {
        let jf = j as f64;
        term = term.mul_f64(argument).div_f64(jf + 1.0);
        for &a in &num {
            term = term.mul_f64(a + jf);
        }
        for &b in &den {
            term = term.div_f64(b + jf);
        }
        sum = sum.add(term);
    }
    Ok(sum.hi + sum.lo)
}

/// R_n(lambda(x)) as the terminating 4F3 of unit argument.
pub fn racah_eval(n: usize, x: usize, p: &RacahParameters) -> Result<f64, HypergeoError> {
    debug_assert!(n <= p.n_max && x <= p.n_max);
    let nf = n as f64;
    let xf = x as f64;
    phfq_terminating(
        &[
            -nf,
            nf + p.alpha + p.beta + 1.0,
            -xf,
            xf + p.gamma + p.delta + 1.0,
        ],
        &[p.alpha + 1.0, p.beta + p.delta + 1.0, p.gamma + 1.0],
        1.0,
    )
}

/// Recurrence coefficients (A_n, C_n):
/// lambda(x) R_n = A_n R_{n+1} - (A_n + C_n) R_n + C_n R_{n-1}.
pub fn recurrence_coeffs(n: usize, p: &RacahParameters) -> (f64, f64) {
    debug_assert!(n <= p.n_max);
    let nf = n as f64;
    let (a, b, g, d) = (p.alpha, p.beta, p.gamma, p.delta);
    let a_n = (nf + a + 1.0) * (nf + a + b + 1.0) * (nf + b + d + 1.0) * (nf + g + 1.0)
        / ((2.0 * nf + a + b + 1.0) * (2.0 * nf + a + b + 2.0));
    let c_n = if n == 0 {
        0.0
    } else {
        nf * (nf + a + b - g) * (nf + a - d) * (nf + b)
            / ((2.0 * nf + a + b) * (2.0 * nf + a + b + 1.0))
    };
    (a_n, c_n)
}

/// Difference-operator coefficients (B(x), D(x)):
/// L = B(x) T+ + D(x) T- - (B(x) + D(x)) I, with
/// L R_n = n (n + alpha + beta + 1) R_n.
pub fn difference_coeffs(x: usize, p: &RacahParameters) -> (f64, f64) {
    debug_assert!(x <= p.n_max);
    let xf = x as f64;
    let (a, b, g, d) = (p.alpha, p.beta, p.gamma, p.delta);
    let b_x = (xf + a + 1.0) * (xf + b + d + 1.0) * (xf + g + 1.0) * (xf + g + d + 1.0)
        / ((2.0 * xf + g + d + 1.0) * (2.0 * xf + g + d + 2.0));
    let d_x = if x == 0 {
        0.0
    } else {
        xf * (xf - a + g + d) * (xf - b + g) * (xf + d)
            / ((2.0 * xf + g + d) * (2.0 * xf + g + d + 1.0))
    };
    (b_x, d_x)
}

fn vector_residual(lhs: &[f64], rhs: &[f64]) -> f64 {
    let norm = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let diff = lhs
        .iter()
        .zip(rhs)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    diff / 1.0_f64.max(norm(lhs)).max(norm(rhs))
}

/// Worst scale-free residual of the three-term recurrence, one residual
/// per degree n (1 <= n <= N-1) over the whole grid row:
/// lambda(x) R_n = A_n R_{n+1} - (A_n + C_n) R_n + C_n R_{n-1}.
///
/// Rows are compared in the same infinity-norm, scale-free sense as every
/// operator residual here; consecutive R_n can differ by many orders of
/// magnitude, so a pointwise-relative comparison would only measure
/// rounding of the stored values.
pub fn recurrence_residual(p: &RacahParameters) -> Result<f64, HypergeoError> {
    let nn = p.n_max;
    let mut worst: f64 = 0.0;
    for n in 1..nn {
        let (a_n, c_n) = recurrence_coeffs(n, p);
        let mut lhs = Vec::with_capacity(nn + 1);
        let mut rhs = Vec::with_capacity(nn + 1);
        for x in 0..=nn {
            let r = racah_eval(n, x, p)?;
            let rp = racah_eval(n + 1, x, p)?;
            let rm = racah_eval(n - 1, x, p)?;
            lhs.push(p.lambda(x) * r);
            rhs.push(a_n * rp - (a_n + c_n) * r + c_n * rm);
        }
        worst = worst.max(vector_residual(&lhs, &rhs));
    }
    Ok(worst)
}

/// Worst scale-free residual of the difference equation, one residual per
/// degree n over the grid row, boundary rows using D(0) = 0 and B(N) = 0:
/// B(x) R_n(lambda(x+1)) + D(x) R_n(lambda(x-1)) - (B+D) R_n(lambda(x))
///   = n (n + alpha + beta + 1) R_n(lambda(x)).
pub fn difference_residual(p: &RacahParameters) -> Result<f64, HypergeoError> {
    let nn = p.n_max;
    let mut worst: f64 = 0.0;
    for n in 0..=nn {
        let eig = p.difference_eigenvalue(n);
        let mut lhs = Vec::with_capacity(nn + 1);
        let mut rhs = Vec::with_capacity(nn + 1);
        for x in 0..=nn {
            let (b_x, d_x) = difference_coeffs(x, p);
            let r = racah_eval(n, x, p)?;
            let rp = if x < nn {
                racah_eval(n, x + 1, p)?
            } else {
                0.0
            };
            let rm = if x > 0 { racah_eval(n, x - 1, p)? } else { 0.0 };
            lhs.push(b_x * rp + d_x * rm - (b_x + d_x) * r);
            rhs.push(eig * r);
        }
        worst = worst.max(vector_residual(&lhs, &rhs));
    }
    Ok(worst)
}

/// Norms h_n = prod_{k=1..n} C_k / A_{k-1}, with h_0 = 1.
pub fn norm_ratios(p: &RacahParameters) -> Vec<f64> {
    let mut h = Vec::with_capacity(p.n_max + 1);
    h.push(1.0);
    for n in 1..=p.n_max {
        let (a_prev, _) = recurrence_coeffs(n - 1, p);
        let (_, c_n) = recurrence_coeffs(n, p);
        h.push(h[n - 1] * c_n / a_prev);
    }
    h
}

/// Orthogonality weights and norms: sum_x w_x R_n R_m = h_n delta_nm,
/// normalized so sum_x w_x = 1 and h_0 = 1.
///
/// The weights come from the spectral decomposition of the symmetrized
/// recurrence Jacobi matrix (Golub-Welsch): the matrix's eigenvalues are
/// exactly the grid values lambda(x) and the squared first components of
/// its orthonormal eigenvectors are the masses w_x.
pub fn weights_and_norms(p: &RacahParameters) -> Result<(Vec<f64>, Vec<f64>), HypergeoError> {
    let n = p.n_max;
    let mut diag = Vec::with_capacity(n + 1);
    let mut off = Vec::with_capacity(n);
    for k in 0..=n {
        let (a_k, c_k) = recurrence_coeffs(k, p);
        diag.push(-(a_k + c_k));
        if k < n {
            let (_, c_next) = recurrence_coeffs(k + 1, p);
            let prod = a_k * c_next;
            if prod <= 0.0 {
                return Err(HypergeoError::SymmetrizationFailure { index: k });
            }
            off.push(prod.sqrt());
        }
    }
    let t = TridiagonalOperator::new(diag, off).expect("validated lengths");
    let eig = sym_tridiag_eigen(&t).expect("symmetric tridiagonal input");

    // pair ascending eigenvalues with the sorted lambda(x) grid
    let mut grid: Vec<(usize, f64)> = (0..=n).map(|x| (x, p.lambda(x))).collect();
    grid.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let scale = t.inf_norm().max(1.0);
    let mut w = vec![0.0; n + 1];
    for (c, &(x, lam)) in grid.iter().enumerate() {
        if (eig.values[c] - lam).abs() > 1e-7 * scale {
            return Err(HypergeoError::SpectralGridMismatch { index: x });
        }
        let v0 = eig.vectors[(0, c)];
        w[x] = v0 * v0;
    }
    Ok((w, norm_ratios(p)))
}

/// max over n, x of |R_n(lambda(x); a,b,g,d) - R_x(lambda*(n); g,d,a,b)|.
pub fn duality_check(p: &RacahParameters) -> Result<f64, HypergeoError> {
    let dual = p.dual()?;
    let mut max_dev: f64 = 0.0;
    for n in 0..=p.n_max {
        for x in 0..=p.n_max {
            let lhs = racah_eval(n, x, p)?;
            let rhs = racah_eval(x, n, &dual)?;
            max_dev = max_dev.max((lhs - rhs).abs());
        }
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: plain Pochhammer-product summation, no ratio
    /// updates. Mirrors the series definition term by term.
    fn phfq_naive(numerator: &[f64], denominator: &[f64], z: f64, j_max: usize) -> f64 {
        fn pochhammer(a: f64, j: usize) -> f64 {
            (0..j).map(|k| a + k as f64).product()
        }
        let mut sum = 0.0;
        let mut fact = 1.0;
        for j in 0..=j_max {
            if j > 0 {
                fact *= j as f64;
            }
            let num: f64 = numerator.iter().map(|&a| pochhammer(a, j)).product();
            let den: f64 = denominator.iter().map(|&b| pochhammer(b, j)).product();
            sum += num / den * z.powi(j as i32) / fact;
        }
        sum
    }

    fn valid_params() -> RacahParameters {
        // gamma truncation with N = 3
        RacahParameters::new(1.1, 0.6, -4.0, 0.4, 3, TruncationKind::Gamma).unwrap()
    }

    #[test]
    fn empty_sum_is_one() {
        let v = phfq_terminating(&[-0.0, 2.3], &[1.7], 1.0).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn two_term_sum_2f1() {
        // 2F1(-1, b; c; 1) = 1 - b/c
        let (b, c) = (2.5, 1.3);
        let v = phfq_terminating(&[-1.0, b], &[c], 1.0).unwrap();
        assert!((v - (1.0 - b / c)).abs() < 1e-15);
    }

    #[test]
    fn matches_naive_summation() {
        // the 4F3 pattern of the Racah definition, small n and x
        for (n, x) in [(1_usize, 2_usize), (2, 2), (3, 1), (3, 3)] {
            let (a, b, g, d) = (0.4, 1.3, -4.0, 0.8);
            let nf = n as f64;
            let xf = x as f64;
            let num = [-nf, nf + a + b + 1.0, -xf, xf + g + d + 1.0];
            let den = [a + 1.0, b + d + 1.0, g + 1.0];
            let fast = phfq_terminating(&num, &den, 1.0).unwrap();
            let slow = phfq_naive(&num, &den, 1.0, n.min(x));
            assert!((fast - slow).abs() <= 1e-13 * slow.abs().max(1.0));
        }
    }

    #[test]
    fn pochhammer_zero_detected() {
        // denominator parameter -2 hits zero at step 3 <= truncation index
        let err = phfq_terminating(&[-5.0, 1.0], &[-2.0], 1.0).unwrap_err();
        assert!(matches!(
            err,
            HypergeoError::DenominatorPochhammerZero { .. }
        ));
        // but a -2 denominator is fine if the series stops first
        assert!(phfq_terminating(&[-1.0, 1.0], &[-2.0], 1.0).is_ok());
    }

    #[test]
    fn nonterminating_rejected() {
        assert!(matches!(
            phfq_terminating(&[0.5, 1.5], &[2.5], 1.0),
            Err(HypergeoError::NonTerminating)
        ));
    }

    #[test]
    fn racah_normalization() {
        let p = valid_params();
        for x in 0..=p.n_max() {
            assert_eq!(racah_eval(0, x, &p).unwrap(), 1.0);
        }
        for n in 0..=p.n_max() {
            assert_eq!(racah_eval(n, 0, &p).unwrap(), 1.0);
        }
    }

    #[test]
    fn racah_value_against_oracle() {
        // The spec's illustrative set (-3, 1, 0.5, 0.7) has a vanishing
        // A_0 denominator (alpha+beta+2 = 0), so construction rejects it;
        // the polynomial value itself is still defined and is checked
        // against the naive oracle through the raw series.
        let (a, b, g, d) = (-3.0, 1.0, 0.5, 0.7);
        let num = [-1.0, 1.0 + a + b + 1.0, -1.0, 1.0 + g + d + 1.0];
        let den = [a + 1.0, b + d + 1.0, g + 1.0];
        let fast = phfq_terminating(&num, &den, 1.0).unwrap();
        let slow = phfq_naive(&num, &den, 1.0, 1);
        assert!((fast - slow).abs() < 1e-14);

        // a fully valid nearby set exercised through RacahParameters
        let p = RacahParameters::new(-3.0, 0.8, 0.5, 0.7, 2, TruncationKind::Alpha).unwrap();
        for (n, x) in [(1, 1), (2, 1), (2, 2)] {
            let v = racah_eval(n, x, &p).unwrap();
            let nf = n as f64;
            let xf = x as f64;
            let o = phfq_naive(
                &[
                    -nf,
                    nf + p.alpha() + p.beta() + 1.0,
                    -xf,
                    xf + p.gamma() + p.delta() + 1.0,
                ],
                &[p.alpha() + 1.0, p.beta() + p.delta() + 1.0, p.gamma() + 1.0],
                1.0,
                n.min(x),
            );
            assert!((v - o).abs() <= 1e-13 * o.abs().max(1.0));
        }
    }

    #[test]
    fn recurrence_boundaries() {
        let p = valid_params();
        let (_, c0) = recurrence_coeffs(0, &p);
        assert_eq!(c0, 0.0);
        let (a_n, _) = recurrence_coeffs(p.n_max(), &p);
        assert!(
            a_n.abs() < 1e-12,
            "A_N = {a_n} should vanish under truncation"
        );
    }

    #[test]
    fn difference_boundaries() {
        let p = valid_params();
        let (_, d0) = difference_coeffs(0, &p);
        assert_eq!(d0, 0.0);
        let (b_n, _) = difference_coeffs(p.n_max(), &p);
        assert!(
            b_n.abs() < 1e-12,
            "B(N) = {b_n} should vanish under gamma truncation"
        );
    }

    #[test]
    fn bispectral_residuals_small() {
        let p = valid_params();
        assert!(recurrence_residual(&p).unwrap() <= 1e-10);
        assert!(difference_residual(&p).unwrap() <= 1e-10);
    }

    #[test]
    fn bispectral_over_random_valid_sets() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
        let mut tested = 0;
        while tested < 25 {
            let n = rng.gen_range(1..=8_usize);
            let alpha = rng.gen_range(-0.9..3.0);
            let beta = rng.gen_range(-0.9..3.0);
            let delta = rng.gen_range(-3.0..3.0);
            let gamma = -(n as f64) - 1.0;
            let Ok(p) = RacahParameters::new(alpha, beta, gamma, delta, n, TruncationKind::Gamma)
            else {
                continue;
            };
            assert!(recurrence_residual(&p).unwrap() <= 1e-10, "params {p:?}");
            assert!(difference_residual(&p).unwrap() <= 1e-10, "params {p:?}");
            tested += 1;
        }
    }

    #[test]
    fn single_point_measure() {
        let p = RacahParameters::new(0.7, 0.9, -1.0, 0.3, 0, TruncationKind::Gamma).unwrap();
        let (w, h) = weights_and_norms(&p).unwrap();
        assert_eq!(w, vec![1.0]);
        assert_eq!(h, vec![1.0]);
    }

    #[test]
    fn orthogonality_in_positive_regime() {
        // positive-regime set found by scanning; orthogonality is the oracle
        let p = RacahParameters::new(1.452, 3.905, -3.0, 3.693, 2, TruncationKind::Gamma).unwrap();
        let (w, h) = weights_and_norms(&p).unwrap();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&x| x > 0.0));
        #[allow(clippy::needless_range_loop)]
        for n in 0..=p.n_max() {
            for m in 0..=p.n_max() {
                let s: f64 = (0..=p.n_max())
                    .map(|x| w[x] * racah_eval(n, x, &p).unwrap() * racah_eval(m, x, &p).unwrap())
                    .sum();
                if n == m {
                    assert!((s - h[n]).abs() <= 1e-10 * h[n].abs().max(1.0));
                } else {
                    assert!(s.abs() <= 1e-10, "n={n} m={m}: {s}");
                }
            }
        }
    }

    #[test]
    fn symmetrization_failure_reported() {
        // far outside the positive regime: some A_n C_{n+1} goes negative
        let mut rejected = false;
        for delta in [-3.5, -2.5, 2.5, 3.5] {
            let Ok(p) = RacahParameters::new(-0.5, -0.8, -4.0, delta, 3, TruncationKind::Gamma)
            else {
                continue;
            };
            if matches!(
                weights_and_norms(&p),
                Err(HypergeoError::SymmetrizationFailure { .. })
            ) {
                rejected = true;
            }
        }
        assert!(rejected);
    }

    #[test]
    fn duality_residual_tiny() {
        let p = valid_params();
        assert!(duality_check(&p).unwrap() <= 1e-11);
        // self-dual set: alpha = gamma, beta = delta
        let sd = RacahParameters::new(-4.0, 0.25, -4.0, 0.25, 3, TruncationKind::Gamma).unwrap();
        assert_eq!(duality_check(&sd).unwrap(), 0.0);
    }

    #[test]
    fn truncation_violation_rejected() {
        let err = RacahParameters::new(1.0, 0.6, -3.5, 0.4, 3, TruncationKind::Gamma).unwrap_err();
        assert!(matches!(err, HypergeoError::TruncationViolated { .. }));
    }

    #[test]
    fn vanishing_recurrence_denominator_rejected() {
        // alpha + beta = -2 makes the A_0 denominator (alpha+beta+2) vanish
        let err = RacahParameters::new(-3.0, 1.0, -3.0, 0.4, 2, TruncationKind::Gamma).unwrap_err();
        assert!(matches!(
            err,
            HypergeoError::VanishingDenominator {
                name: "A_n",
                index: 0
            }
        ));
    }
}
