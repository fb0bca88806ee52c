//! The 2D isotropic singular oscillator's symmetry algebra on a
//! degenerate level, realized algebraically through two discrete-series
//! representations with H_{x_i} = 2 J0^(i), B_i^± = 2 J±^(i).
//!
//! On the level with n1 + n2 = N the scalar value of H is
//! 2(N + nu1 + nu2) = 2N + k1 + k2 + 2. (The source text states a
//! spectrum E_N = N + (k1+k2+1)/2 that differs from this by an overall
//! factor and shift; the algebraic relations below hold exactly in the
//! adopted normalization, which is the one its own J0 = H_{x_i}/2
//! identification produces.)

use crate::linalg::{anticommutator, commutator, residual, DenseOperator};
use crate::racah_algebra::GenericConstants;
use crate::su11_coupling::DiscreteSeriesRep;

#[derive(Clone, Debug, thiserror::Error)]
pub enum OscillatorError {
    #[error("k{index} = {value} must exceed -1 so that nu = (k+1)/2 > 0")]
    InvalidParameter { index: usize, value: f64 },
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Parameters of the singular oscillator block: potential strengths
/// a_i = k_i^2 - 1/4 with k_i > -1, and the degenerate level N
/// (block dimension N + 1, basis n1 = 0..N with n2 = N - n1).
#[derive(Clone, Copy, Debug)]
pub struct OscillatorSpec {
    k1: f64,
    k2: f64,
    level: usize,
}

impl OscillatorSpec {
    pub fn new(k1: f64, k2: f64, level: usize) -> Result<Self, OscillatorError> {
        if !k1.is_finite() || k1 <= -1.0 {
            return Err(OscillatorError::InvalidParameter {
                index: 1,
                value: k1,
            });
        }
        if !k2.is_finite() || k2 <= -1.0 {
            return Err(OscillatorError::InvalidParameter {
                index: 2,
                value: k2,
            });
        }
        Ok(Self { k1, k2, level })
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }
    pub fn k2(&self) -> f64 {
        self.k2
    }
    pub fn level(&self) -> usize {
        self.level
    }
    pub fn nu(&self) -> (f64, f64) {
        ((self.k1 + 1.0) / 2.0, (self.k2 + 1.0) / 2.0)
    }
}

/// The block operators: H is the stated scalar, D diagonal, C± single
/// off-diagonals (they exchange one quantum between the wells, so the
/// level is exactly invariant).
#[derive(Clone, Debug)]
pub struct OscillatorBlock {
    /// scalar value of H = 2(J0^(1) + J0^(2)) on the level
    pub h_value: f64,
    pub h: DenseOperator,
    pub d: DenseOperator,
    pub c_plus: DenseOperator,
    pub c_minus: DenseOperator,
}

pub fn oscillator_block(spec: &OscillatorSpec) -> Result<OscillatorBlock, OscillatorError> {
    let (nu1, nu2) = spec.nu();
    let rep1 = DiscreteSeriesRep::new(nu1).expect("validated");
    let rep2 = DiscreteSeriesRep::new(nu2).expect("validated");
    let n = spec.level();
    let dim = n + 1;
    let h_value = 2.0 * (n as f64 + nu1 + nu2);
    let mut d = DenseOperator::zeros(dim);
    let mut c_plus = DenseOperator::zeros(dim);
    let mut c_minus = DenseOperator::zeros(dim);
    for n1 in 0..=n {
        let n2 = n - n1;
        let l1 = rep1.ladder_elements(n1);
        let l2 = rep2.ladder_elements(n2);
        d[(n1, n1)] = 2.0 * (l1.j0 - l2.j0);
        // C+ = 4 J+^(1) J-^(2): (n1, n2) -> (n1+1, n2-1)
        if n1 < n {
            c_plus[(n1 + 1, n1)] = 4.0 * l1.jplus_amp * l2.jminus_amp;
        }
        // C- = 4 J-^(1) J+^(2): (n1, n2) -> (n1-1, n2+1)
        if n1 >= 1 {
            c_minus[(n1 - 1, n1)] = 4.0 * l1.jminus_amp * l2.jplus_amp;
        }
    }
    Ok(OscillatorBlock {
        h_value,
        h: DenseOperator::identity(dim).scale(h_value),
        d,
        c_plus,
        c_minus,
    })
}

/// Residuals of the ladder and cubic relations.
#[derive(Clone, Copy, Debug)]
pub struct OscillatorResiduals {
    /// [D, C+] - 4 C+
    pub ladder_plus: f64,
    /// [D, C-] + 4 C-
    pub ladder_minus: f64,
    /// [C-, C+] - D^3 - alpha1 D - alpha2
    pub cubic: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// k1 = k2 makes alpha2 vanish identically
    pub alpha2_identically_zero: bool,
}

impl OscillatorResiduals {
    pub fn max(&self) -> f64 {
        self.ladder_plus.max(self.ladder_minus).max(self.cubic)
    }
}

/// alpha1 = -H^2 - 2(k1^2 + k2^2 - 2), alpha2 = 2(k1^2 - k2^2) H, with H
/// replaced by its scalar block value.
pub fn verify_oscillator_algebra(
    spec: &OscillatorSpec,
) -> Result<OscillatorResiduals, OscillatorError> {
    let b = oscillator_block(spec)?;
    let (k1, k2) = (spec.k1(), spec.k2());
    let alpha1 = -b.h_value * b.h_value - 2.0 * (k1 * k1 + k2 * k2 - 2.0);
    let alpha2 = 2.0 * (k1 * k1 - k2 * k2) * b.h_value;
    let ladder_plus = residual(&commutator(&b.d, &b.c_plus)?, &b.c_plus.scale(4.0))?;
    let ladder_minus = residual(&commutator(&b.d, &b.c_minus)?, &b.c_minus.scale(-4.0))?;
    let d3 = b.d.mul(&b.d)?.mul(&b.d)?;
    let rhs = d3.add(&b.d.scale(alpha1))?.add_scaled_identity(alpha2);
    let cubic = residual(&commutator(&b.c_minus, &b.c_plus)?, &rhs)?;
    Ok(OscillatorResiduals {
        ladder_plus,
        ladder_minus,
        cubic,
        alpha1,
        alpha2,
        alpha2_identically_zero: alpha2 == 0.0,
    })
}

/// The Hahn-type presentation built from the block operators, its
/// delta-constants, and the residuals of its defining relations.
#[derive(Clone, Debug)]
pub struct HahnData {
    pub k1: DenseOperator,
    pub k2: DenseOperator,
    pub k3: DenseOperator,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    /// [K1, K2] - (C+ - C-)/16
    pub k3_identity: f64,
    /// [K2, K3] - {K1, K2} - delta1 K1 - delta2
    pub rel2: f64,
    /// [K3, K1] - K1^2 + K2/4 - delta3
    pub rel3: f64,
}

impl HahnData {
    pub fn max_residual(&self) -> f64 {
        self.k3_identity.max(self.rel2).max(self.rel3)
    }

    /// The structure constants the generic-form fit is expected to find:
    /// a1 = 1, a2 = 0 (no K2^2 anywhere: the Hahn degeneration),
    /// c1 = delta1, c2 = -1/4, d = 0, e1 = delta2, e2 = delta3.
    pub fn expected_generic(&self) -> GenericConstants {
        GenericConstants {
            a1: 1.0,
            a2: 0.0,
            c1: self.delta1,
            c2: -0.25,
            d: 0.0,
            e1: self.delta2,
            e2: self.delta3,
        }
    }
}

/// K1 = D/8, K2 = (C+ + C- + (D^2 - H^2)/2)/8, K3 = [K1, K2];
/// delta1 = -(k1^2 + k2^2 - 2)/4, delta2 = (k1 - k2)(k1 + k2) H / 32,
/// delta3 = -H^2/64.
pub fn hahn_operators(spec: &OscillatorSpec) -> Result<HahnData, OscillatorError> {
    let b = oscillator_block(spec)?;
    let (k1p, k2p) = (spec.k1(), spec.k2());
    let hv = b.h_value;
    let k1 = b.d.scale(1.0 / 8.0);
    let k2 = b
        .c_plus
        .add(&b.c_minus)?
        .add(&b.d.mul(&b.d)?.add_scaled_identity(-hv * hv).scale(0.5))?
        .scale(1.0 / 8.0);
    let k3 = commutator(&k1, &k2)?;
    let delta1 = -0.25 * (k1p * k1p + k2p * k2p - 2.0);
    let delta2 = (k1p - k2p) * (k1p + k2p) * hv / 32.0;
    let delta3 = -hv * hv / 64.0;
    let k3_identity = residual(&k3, &b.c_plus.sub(&b.c_minus)?.scale(1.0 / 16.0))?;
    let rel2 = residual(
        &commutator(&k2, &k3)?,
        &anticommutator(&k1, &k2)?
            .add(&k1.scale(delta1))?
            .add_scaled_identity(delta2),
    )?;
    let rel3 = residual(
        &commutator(&k3, &k1)?,
        &k1.mul(&k1)?
            .sub(&k2.scale(0.25))?
            .add_scaled_identity(delta3),
    )?;
    Ok(HahnData {
        k1,
        k2,
        k3,
        delta1,
        delta2,
        delta3,
        k3_identity,
        rel2,
        rel3,
    })
}
