//! Structure constants of the quadratic algebra, the affine reduction to
//! canonical form, and the inverse problem of fitting constants to a pair
//! of operators.

use super::RacahError;
use crate::linalg::{anticommutator, commutator, qr_least_squares, residual, DenseOperator};

/// The seven parameters of the generic presentation
/// [K2,K3] = a2 K2^2 + a1 {K1,K2} + c1 K1 + d K2 + e1,
/// [K3,K1] = a1 K1^2 + a2 {K1,K2} + c2 K2 + d K1 + e2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenericConstants {
    pub a1: f64,
    pub a2: f64,
    pub c1: f64,
    pub c2: f64,
    pub d: f64,
    pub e1: f64,
    pub e2: f64,
}

/// The three parameters left once a1 = a2 = 1 and c1 = c2 = 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalConstants {
    pub d: f64,
    pub e1: f64,
    pub e2: f64,
}

impl CanonicalConstants {
    /// The constants of the exchanged presentation K1 <-> K2.
    pub fn exchanged(&self) -> CanonicalConstants {
        CanonicalConstants {
            d: self.d,
            e1: self.e2,
            e2: self.e1,
        }
    }
}

/// Coefficients of the reduction K_i' = u_i K_i + v_i (i = 1, 2) with
/// K_3' = u3 K_3, u3 = u1 u2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineMap {
    pub u1: f64,
    pub v1: f64,
    pub u2: f64,
    pub v2: f64,
    pub u3: f64,
}

/// Reduce generic constants to canonical form. Requires a1 * a2 != 0;
/// the a1 * a2 = 0 case is the Hahn-type degeneration and has no
/// canonical form of this shape.
///
/// The map is obtained by substituting K_i' = u_i K_i + v_i into the
/// generic relations and matching coefficients:
/// u1 = 1/a2, u2 = 1/a1, v1 = c2/(2 a2^2), v2 = c1/(2 a1^2).
pub fn canonicalize(g: &GenericConstants) -> Result<(CanonicalConstants, AffineMap), RacahError> {
    if (g.a1 * g.a2).abs() < 1e-12 {
        return Err(RacahError::NotCanonicalizable { a1: g.a1, a2: g.a2 });
    }
    let u1 = 1.0 / g.a2;
    let u2 = 1.0 / g.a1;
    let v1 = g.c2 / (2.0 * g.a2 * g.a2);
    let v2 = g.c1 / (2.0 * g.a1 * g.a1);
    let d = g.d * u1 * u2 - 2.0 * v1 - 2.0 * v2;
    let e1 = g.e1 * u1 * u2 * u2 - v2 * (v2 + 2.0 * v1 + d);
    let e2 = g.e2 * u1 * u1 * u2 - v1 * (v1 + 2.0 * v2 + d);
    Ok((
        CanonicalConstants { d, e1, e2 },
        AffineMap {
            u1,
            v1,
            u2,
            v2,
            u3: u1 * u2,
        },
    ))
}

/// Outcome of the least-squares fit of the generic relations to an
/// operator pair.
#[derive(Clone, Debug)]
pub struct StructureFit {
    pub constants: GenericConstants,
    /// Worst scale-free residual of the two fitted relations.
    pub residual: f64,
    /// The normal system did not determine all seven constants; the
    /// undetermined ones were set to zero.
    pub rank_deficient: bool,
}

/// Fit (a1, a2, c1, c2, d, e1, e2) to the generic relations with
/// K3 := [K1, K2], each matrix entry contributing one linear equation.
pub fn extract_structure_constants(
    k1: &DenseOperator,
    k2: &DenseOperator,
) -> Result<StructureFit, RacahError> {
    let n = k1.dim();
    let k3 = commutator(k1, k2)?;
    let lhs1 = commutator(k2, &k3)?;
    let lhs2 = commutator(&k3, k1)?;
    let acom = anticommutator(k1, k2)?;
    let k1sq = k1.mul(k1)?;
    let k2sq = k2.mul(k2)?;
    let id = DenseOperator::identity(n);
    let zero = DenseOperator::zeros(n);

    // column order: a1, a2, c1, c2, d, e1, e2
    let cols_rel1: [&DenseOperator; 7] = [&acom, &k2sq, k1, &zero, k2, &id, &zero];
    let cols_rel2: [&DenseOperator; 7] = [&k1sq, &acom, &zero, k2, k1, &zero, &id];

    let m = 2 * n * n;
    let mut a = vec![0.0; m * 7];
    let mut b = vec![0.0; m];
    for (row, idx) in (0..n * n).map(|i| (i, i)) {
        for (col, op) in cols_rel1.iter().enumerate() {
            a[row * 7 + col] = op.entries()[idx];
        }
        b[row] = lhs1.entries()[idx];
    }
    for (row, idx) in (0..n * n).map(|i| (i + n * n, i)) {
        for (col, op) in cols_rel2.iter().enumerate() {
            a[row * 7 + col] = op.entries()[idx];
        }
        b[row] = lhs2.entries()[idx];
    }
    let ls = qr_least_squares(&a, m, 7, &b)?;
    let s = &ls.solution;
    let constants = GenericConstants {
        a1: s[0],
        a2: s[1],
        c1: s[2],
        c2: s[3],
        d: s[4],
        e1: s[5],
        e2: s[6],
    };
    // post-fit residual, scale-free per relation
    let rhs1 = acom
        .scale(constants.a1)
        .add(&k2sq.scale(constants.a2))?
        .add(&k1.scale(constants.c1))?
        .add(&k2.scale(constants.d))?
        .add_scaled_identity(constants.e1);
    let rhs2 = k1sq
        .scale(constants.a1)
        .add(&acom.scale(constants.a2))?
        .add(&k2.scale(constants.c2))?
        .add(&k1.scale(constants.d))?
        .add_scaled_identity(constants.e2);
    let r = residual(&lhs1, &rhs1)?.max(residual(&lhs2, &rhs2)?);
    Ok(StructureFit {
        constants,
        residual: r,
        rank_deficient: ls.rank_deficient,
    })
}
