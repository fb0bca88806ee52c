//! Closed-form finite-dimensional representations: the quadratic K1
//! spectrum, the quartic controlling the squared off-diagonals, the
//! builder, and the canonical-relation / Casimir verifiers.
//!
//! One correction to the source formulas, established by matching the
//! diagonal of the polynomial-operator realization and by the residual of
//! the U_n^2 recurrence: the tridiagonal diagonal is
//! V_n = -(lambda_n^2 + d lambda_n + e2) / (2 lambda_n),
//! with the factor 2 in the denominator.

use super::constants::CanonicalConstants;
use super::RacahError;
use crate::linalg::{
    anticommutator, commutator, monic_roots, residual, ComplexRoot, DenseOperator,
};

const DENOM_EPS: f64 = 1e-12;
/// Absolute-ish tolerance for U_0^2 and U_{N+1}^2 vanishing.
const TRUNCATION_TOL: f64 = 1e-9;

/// Monic quartic P(z) whose values at g_n^2 give the squared
/// off-diagonals, together with its roots xi_k^2.
#[derive(Clone, Debug)]
pub struct QuarticData {
    /// Monic coefficients [1, c3, c2, c1, c0] of
    /// z^4 + c3 z^3 + c2 z^2 + c1 z + c0.
    pub coefficients: [f64; 5],
    /// The four roots xi_k^2, complex pairs allowed.
    pub roots: [ComplexRoot; 4],
}

impl QuarticData {
    /// Horner evaluation from the coefficients (not the roots).
    pub fn eval(&self, z: f64) -> f64 {
        self.coefficients.iter().fold(0.0, |acc, &c| acc * z + c)
    }

    /// Real roots within `tol` of the real axis, by ascending real part.
    pub fn real_roots(&self, tol: f64) -> Vec<f64> {
        self.roots
            .iter()
            .filter(|r| r.is_real(tol))
            .map(|r| r.re)
            .collect()
    }
}

/// P(z) = z^4 - (4d+2) z^3 + (4d^2+4d+1+8e2-16e1) z^2
///        - 4 (d^2 + 2e2 + 4de2 + 4q) z + 16 e2^2.
pub fn quartic(c: &CanonicalConstants, q: f64) -> Result<QuarticData, RacahError> {
    let (d, e1, e2) = (c.d, c.e1, c.e2);
    let c3 = -(4.0 * d + 2.0);
    let c2 = 4.0 * d * d + 4.0 * d + 1.0 + 8.0 * e2 - 16.0 * e1;
    let c1 = -4.0 * (d * d + 2.0 * e2 + 4.0 * d * e2 + 4.0 * q);
    let c0 = 16.0 * e2 * e2;
    let roots = monic_roots(&[c3, c2, c1, c0])?;
    Ok(QuarticData {
        coefficients: [1.0, c3, c2, c1, c0],
        roots: [roots[0], roots[1], roots[2], roots[3]],
    })
}

/// A validated (N+1)-dimensional representation: spectral parameter rho,
/// Casimir value q and canonical constants, with unitarity and truncation
/// checked at construction.
#[derive(Clone, Debug)]
pub struct RepresentationSpec {
    n_max: usize,
    rho: f64,
    q: f64,
    constants: CanonicalConstants,
}

impl RepresentationSpec {
    pub fn new(
        n_max: usize,
        rho: f64,
        q: f64,
        constants: CanonicalConstants,
    ) -> Result<Self, RacahError> {
        let spec = Self {
            n_max,
            rho,
            q,
            constants,
        };
        // lambda_n != 0 for 0..=N (V_n denominators); this also keeps
        // g_n = rho - n away from zero on 0..=N+1.
        for n in 0..=n_max {
            if spec.lambda(n).abs() < DENOM_EPS {
                return Err(RacahError::InvalidSpec {
                    invariant: format!("V_n denominator: lambda_{n} = 0 (rho = {rho})"),
                });
            }
        }
        if (rho - (n_max as f64 + 1.0)).abs() < DENOM_EPS || rho.abs() < DENOM_EPS {
            return Err(RacahError::InvalidSpec {
                invariant: format!("g_n vanishes at an endpoint (rho = {rho})"),
            });
        }
        // half-step factors g_{n +/- 1/2} for every U_n^2 in 0..=N+1
        for k in -1..=(n_max as i64 + 1) {
            if (rho - k as f64 - 0.5).abs() < DENOM_EPS {
                return Err(RacahError::InvalidSpec {
                    invariant: format!("U_n^2 denominator: rho - {k} - 1/2 = 0 (rho = {rho})"),
                });
            }
        }
        let p = quartic(&constants, q)?;
        let mut interior_max: f64 = 1.0;
        for n in 1..=n_max {
            let u2 = spec.offdiag_sq_raw(&p, n);
            if u2 <= 0.0 {
                return Err(RacahError::NonUnitary { n, value: u2 });
            }
            interior_max = interior_max.max(u2);
        }
        for (label, n) in [("U_0^2", 0_usize), ("U_{N+1}^2", n_max + 1)] {
            let u2 = spec.offdiag_sq_raw(&p, n);
            if u2.abs() > TRUNCATION_TOL * interior_max {
                return Err(RacahError::TruncationFailure {
                    which: label,
                    value: u2,
                });
            }
        }
        Ok(spec)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn constants(&self) -> CanonicalConstants {
        self.constants
    }

    /// lambda_n = (rho - n)(n - rho + 1) / 2.
    pub fn lambda(&self, n: usize) -> f64 {
        let g = self.rho - n as f64;
        g * (1.0 - g) / 2.0
    }

    /// g_n = rho - n.
    pub fn g(&self, n: usize) -> f64 {
        self.rho - n as f64
    }

    /// (lambda_n, g_n).
    pub fn spectrum(&self, n: usize) -> (f64, f64) {
        (self.lambda(n), self.g(n))
    }

    pub fn quartic(&self) -> Result<QuarticData, RacahError> {
        quartic(&self.constants, self.q)
    }

    fn offdiag_sq_raw(&self, p: &QuarticData, n: usize) -> f64 {
        let g = self.rho - n as f64;
        let g_minus = g + 0.5;
        let g_plus = g - 0.5;
        p.eval(g * g) / (64.0 * g * g * g_minus * g_plus)
    }

    /// U_n^2 = P(g_n^2) / (64 g_n^2 g_{n-1/2} g_{n+1/2}), 0 <= n <= N+1.
    pub fn offdiag_sq(&self, n: usize) -> Result<f64, RacahError> {
        debug_assert!(n <= self.n_max + 1);
        let p = self.quartic()?;
        Ok(self.offdiag_sq_raw(&p, n))
    }

    /// V_n = -(lambda_n^2 + d lambda_n + e2) / (2 lambda_n).
    pub fn diag(&self, n: usize) -> f64 {
        let l = self.lambda(n);
        -(l * l + self.constants.d * l + self.constants.e2) / (2.0 * l)
    }
}

/// The three generator matrices of a built representation: K1 diagonal,
/// K2 symmetric tridiagonal, K3 = [K1, K2].
#[derive(Clone, Debug)]
pub struct RepresentationMatrices {
    pub k1: DenseOperator,
    pub k2: DenseOperator,
    pub k3: DenseOperator,
}

pub fn build_representation(
    spec: &RepresentationSpec,
) -> Result<RepresentationMatrices, RacahError> {
    let n = spec.n_max();
    let p = spec.quartic()?;
    let lambdas: Vec<f64> = (0..=n).map(|k| spec.lambda(k)).collect();
    let k1 = DenseOperator::diagonal(&lambdas);
    let mut k2 = DenseOperator::diagonal(&(0..=n).map(|k| spec.diag(k)).collect::<Vec<_>>());
    for m in 1..=n {
        let u2 = spec.offdiag_sq_raw(&p, m);
        debug_assert!(u2 > 0.0, "validated at construction");
        let u = u2.sqrt();
        k2[(m, m - 1)] = u;
        k2[(m - 1, m)] = u;
    }
    let k3 = commutator(&k1, &k2)?;
    Ok(RepresentationMatrices { k1, k2, k3 })
}

/// Residuals of the canonical relations (17a)-(17c).
#[derive(Clone, Copy, Debug)]
pub struct RelationResiduals {
    /// [K1, K2] - K3
    pub r17a: f64,
    /// [K2, K3] - K2^2 - {K1, K2} - d K2 - e1
    pub r17b: f64,
    /// [K3, K1] - K1^2 - {K1, K2} - d K1 - e2
    pub r17c: f64,
}

impl RelationResiduals {
    pub fn max(&self) -> f64 {
        self.r17a.max(self.r17b).max(self.r17c)
    }
}

pub fn verify_canonical_relations(
    m: &RepresentationMatrices,
    c: &CanonicalConstants,
) -> Result<RelationResiduals, RacahError> {
    let acom = anticommutator(&m.k1, &m.k2)?;
    let r17a = residual(&commutator(&m.k1, &m.k2)?, &m.k3)?;
    let lhs_b = commutator(&m.k2, &m.k3)?;
    let rhs_b =
        m.k2.mul(&m.k2)?
            .add(&acom)?
            .add(&m.k2.scale(c.d))?
            .add_scaled_identity(c.e1);
    let lhs_c = commutator(&m.k3, &m.k1)?;
    let rhs_c =
        m.k1.mul(&m.k1)?
            .add(&acom)?
            .add(&m.k1.scale(c.d))?
            .add_scaled_identity(c.e2);
    Ok(RelationResiduals {
        r17a,
        r17b: residual(&lhs_b, &rhs_b)?,
        r17c: residual(&lhs_c, &rhs_c)?,
    })
}

/// The Casimir operator
/// Q = {K1^2, K2} + {K1, K2^2} + K1^2 + K2^2 + K3^2
///     + (d+1){K1, K2} + (2 e1 + d) K1 + (2 e2 + d) K2.
pub fn casimir(
    m: &RepresentationMatrices,
    c: &CanonicalConstants,
) -> Result<DenseOperator, RacahError> {
    let k1sq = m.k1.mul(&m.k1)?;
    let k2sq = m.k2.mul(&m.k2)?;
    let q = anticommutator(&k1sq, &m.k2)?
        .add(&anticommutator(&m.k1, &k2sq)?)?
        .add(&k1sq)?
        .add(&k2sq)?
        .add(&m.k3.mul(&m.k3)?)?
        .add(&anticommutator(&m.k1, &m.k2)?.scale(c.d + 1.0))?
        .add(&m.k1.scale(2.0 * c.e1 + c.d))?
        .add(&m.k2.scale(2.0 * c.e2 + c.d))?;
    Ok(q)
}

/// ||Q - q I||_inf / ||Q||_inf.
pub fn casimir_constancy(
    m: &RepresentationMatrices,
    c: &CanonicalConstants,
    q_value: f64,
) -> Result<f64, RacahError> {
    let q = casimir(m, c)?;
    let dev = q.add_scaled_identity(-q_value);
    Ok(dev.inf_norm() / q.inf_norm().max(f64::MIN_POSITIVE))
}

/// Build a spec from recoupling data: lambda_i = nu_i(nu_i - 1),
/// nu4 = nu1 + nu2 + nu3 + N, the section-6 constants, rho = 1 - nu1 - nu2
/// and q solving P(rho^2) = 0. Such specs are the kappa-representations of
/// an actual recoupling problem and are therefore always unitary.
pub fn spec_from_recoupling(nu: [f64; 3], n: usize) -> Result<RepresentationSpec, RacahError> {
    let lam: Vec<f64> = nu.iter().map(|v| v * (v - 1.0)).collect();
    let nu4 = nu.iter().sum::<f64>() + n as f64;
    let lam4 = nu4 * (nu4 - 1.0);
    let d = 0.5 * (lam[0] + lam[1] + lam[2] + lam4);
    let e1 = 0.25 * (lam[0] - lam4) * (lam[1] - lam[2]);
    let e2 = 0.25 * (lam[0] - lam[1]) * (lam4 - lam[2]);
    let rho = 1.0 - nu[0] - nu[1];
    let z = rho * rho;
    if z < 1e-12 {
        return Err(RacahError::InvalidSpec {
            invariant: format!("rho = {rho} too close to zero for the q solve"),
        });
    }
    let c3 = -(4.0 * d + 2.0);
    let c2 = 4.0 * d * d + 4.0 * d + 1.0 + 8.0 * e2 - 16.0 * e1;
    let c0 = 16.0 * e2 * e2;
    let c1 = -(z * z * z * z + c3 * z * z * z + c2 * z * z + c0) / z;
    let q = (-c1 / 4.0 - d * d - 2.0 * e2 - 4.0 * d * e2) / 4.0;
    RepresentationSpec::new(n, rho, q, CanonicalConstants { d, e1, e2 })
}
