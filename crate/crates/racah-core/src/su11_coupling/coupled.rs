//! Coupled blocks: the C^(4) eigenspace at nu4 = nu1 + nu2 + nu3 + j
//! inside a weight block, carrying kappa_1 = -C^(12)/2 and
//! kappa_2 = -C^(23)/2, which close into the Racah algebra with constants
//! built from the four Casimir values alone.

use super::blocks::{CasimirPair, WeightBlock};
use super::Su11Error;
use crate::linalg::{commutator, sym_eigen, DenseOperator};
use crate::racah_algebra::{
    overlap_vs_racah, spec_from_recoupling, verify_canonical_relations, CanonicalConstants,
    OverlapOutcome, RacahError, RelationResiduals, RepresentationMatrices,
};

/// kappa operators restricted to one C^(4) eigenspace. The eigenspace
/// for nu4 = nu1+nu2+nu3+j inside the quanta-N block has dimension j + 1
/// (each of the j + 1 copies of the nu4 representation in the triple
/// product contributes one vector at this weight).
#[derive(Clone, Debug)]
pub struct CoupledBlock {
    pub j: usize,
    pub nu: [f64; 3],
    pub nu4: f64,
    /// (lambda_1, lambda_2, lambda_3, lambda_4)
    pub lambda: [f64; 4],
    /// dim = j + 1; kappa_1 diagonal ascending in this basis
    pub kappa1: DenseOperator,
    pub kappa2: DenseOperator,
}

impl CoupledBlock {
    pub fn dim(&self) -> usize {
        self.kappa1.dim()
    }
}

/// Constants of the section-6 presentation, from the Casimir values:
/// d = (1/2) sum lambda, e1 = (1/4)(l1-l4)(l2-l3), e2 = (1/4)(l1-l2)(l4-l3).
pub fn sec6_constants(lambda: [f64; 4]) -> CanonicalConstants {
    CanonicalConstants {
        d: 0.5 * (lambda[0] + lambda[1] + lambda[2] + lambda[3]),
        e1: 0.25 * (lambda[0] - lambda[3]) * (lambda[1] - lambda[2]),
        e2: 0.25 * (lambda[0] - lambda[1]) * (lambda[3] - lambda[2]),
    }
}

/// Project the intermediate Casimirs onto the C^(4) eigenspace selected
/// by j, with the basis fixed deterministically: eigenvectors of C^(4)
/// re-diagonalized so that kappa_1 is diagonal with ascending entries.
pub fn couple(block: &WeightBlock, j: usize) -> Result<CoupledBlock, Su11Error> {
    if j > block.quanta() {
        return Err(Su11Error::BlockOutOfRange {
            j,
            max: block.quanta(),
        });
    }
    let nu4 = block.nu().iter().sum::<f64>() + j as f64;
    let lam4 = nu4 * (nu4 - 1.0);
    let c4 = block.full_casimir();
    let eig = sym_eigen(&c4)?;
    let scale = c4.inf_norm().max(1.0);
    let selected: Vec<usize> = (0..block.dim())
        .filter(|&s| (eig.values[s] - lam4).abs() <= 1e-8 * scale)
        .collect();
    let expected = j + 1;
    if selected.len() != expected {
        return Err(Su11Error::EigenspaceDimension {
            j,
            expected,
            found: selected.len(),
        });
    }
    let dim = block.dim();
    let sub = expected;
    // columns of the eigenspace basis
    let mut y = vec![0.0; dim * sub];
    for (c, &s) in selected.iter().enumerate() {
        for r in 0..dim {
            y[r * sub + c] = eig.vectors[(r, s)];
        }
    }
    let c12 = block.intermediate_casimir(CasimirPair::P12);
    let c23 = block.intermediate_casimir(CasimirPair::P23);
    let project = |op: &DenseOperator| -> DenseOperator {
        // Y^T op Y, sub x sub
        let mut tmp = vec![0.0; dim * sub];
        for r in 0..dim {
            for c in 0..sub {
                let mut acc = 0.0;
                for k in 0..dim {
                    acc += op[(r, k)] * y[k * sub + c];
                }
                tmp[r * sub + c] = acc;
            }
        }
        DenseOperator::from_fn(sub, |r, c| {
            (0..dim).map(|k| y[k * sub + r] * tmp[k * sub + c]).sum()
        })
    };
    let mut kappa1 = project(&c12).scale(-0.5);
    let mut kappa2 = project(&c23).scale(-0.5);
    // secondary diagonalization fixes the basis inside the eigenspace
    let inner = sym_eigen(&kappa1)?;
    kappa2 = inner
        .vectors
        .transpose()
        .mul(&kappa2.mul(&inner.vectors)?)?;
    kappa1 = DenseOperator::diagonal(&inner.values);
    let lam = block.casimir_values();
    Ok(CoupledBlock {
        j,
        nu: block.nu(),
        nu4,
        lambda: [lam[0], lam[1], lam[2], lam4],
        kappa1,
        kappa2,
    })
}

/// Identify the kappa eigenbasis overlaps with Racah polynomial values.
///
/// The kappa pair is an irreducible representation of the canonical
/// algebra with rho = 1 - nu1 - nu2 and Casimir fixed by the truncation;
/// the coupled basis (kappa_1 ascending) is conjugated onto the ladder
/// order of that representation before the comparison.
pub fn kappa_overlap_vs_racah(cb: &CoupledBlock) -> Result<OverlapOutcome, Su11Error> {
    let spec = spec_from_recoupling(cb.nu, cb.j)?;
    let dim = cb.dim();
    // ladder position of each ascending-kappa1 column
    let mut expected: Vec<(usize, f64)> = (0..dim).map(|n| (n, spec.lambda(n))).collect();
    expected.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut ladder_of_col = vec![0usize; dim];
    for (col, &(n, lam)) in expected.iter().enumerate() {
        let got = cb.kappa1[(col, col)];
        if (got - lam).abs() > 1e-8 * lam.abs().max(1.0) {
            return Err(Su11Error::Racah(RacahError::InvalidSpec {
                invariant: format!(
                    "kappa1 spectrum does not match the ladder values ({got} vs {lam})"
                ),
            }));
        }
        ladder_of_col[col] = n;
    }
    let mut k1 = DenseOperator::zeros(dim);
    let mut k2 = DenseOperator::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            k1[(ladder_of_col[r], ladder_of_col[c])] = cb.kappa1[(r, c)];
            k2[(ladder_of_col[r], ladder_of_col[c])] = cb.kappa2[(r, c)];
        }
    }
    // rephase to the positive-off-diagonal gauge of the ladder convention
    let mut sign = vec![1.0; dim];
    for n in 1..dim {
        sign[n] = sign[n - 1] * if k2[(n, n - 1)] < 0.0 { -1.0 } else { 1.0 };
    }
    for r in 0..dim {
        for c in 0..dim {
            k2[(r, c)] *= sign[r] * sign[c];
        }
    }
    let k3 = commutator(&k1, &k2)?;
    let m = RepresentationMatrices { k1, k2, k3 };
    Ok(overlap_vs_racah(&spec, &m)?)
}

/// Residuals of the three canonical relations with the lambda-built
/// constants; no fitting anywhere.
pub fn verify_racah_relations(cb: &CoupledBlock) -> Result<RelationResiduals, Su11Error> {
    let constants = sec6_constants(cb.lambda);
    let k3 = commutator(&cb.kappa1, &cb.kappa2)?;
    let m = RepresentationMatrices {
        k1: cb.kappa1.clone(),
        k2: cb.kappa2.clone(),
        k3,
    };
    Ok(verify_canonical_relations(&m, &constants)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::racah_algebra::{casimir, extract_structure_constants};

    #[test]
    fn scalar_coupled_block() {
        let block = WeightBlock::new([0.5, 0.9, 1.3], 4).unwrap();
        let cb = couple(&block, 0).unwrap();
        assert_eq!(cb.dim(), 1);
        let r = verify_racah_relations(&cb).unwrap();
        assert!(r.max() <= 1e-12);
    }

    #[test]
    fn coupled_blocks_close_with_lambda_constants() {
        let block = WeightBlock::new([0.62, 2.4, 1.15], 6).unwrap();
        for j in 0..=block.quanta() {
            let cb = couple(&block, j).unwrap();
            assert_eq!(cb.dim(), j + 1);
            let r = verify_racah_relations(&cb).unwrap();
            assert!(r.max() <= 1e-9, "j = {j}: {r:?}");
        }
    }

    #[test]
    fn casimir_value_constant_on_coupled_block() {
        let block = WeightBlock::new([0.8, 0.55, 1.9], 5).unwrap();
        let cb = couple(&block, 3).unwrap();
        let constants = sec6_constants(cb.lambda);
        let k3 = commutator(&cb.kappa1, &cb.kappa2).unwrap();
        let m = RepresentationMatrices {
            k1: cb.kappa1.clone(),
            k2: cb.kappa2.clone(),
            k3,
        };
        let q = casimir(&m, &constants).unwrap();
        let q0 = q[(0, 0)];
        let dev = q.add_scaled_identity(-q0).inf_norm() / q.inf_norm().max(1.0);
        assert!(dev <= 1e-10, "Casimir not constant: {dev}");
    }

    #[test]
    fn fit_recovers_lambda_constants() {
        let block = WeightBlock::new([0.7, 1.35, 0.95], 5).unwrap();
        let cb = couple(&block, 4).unwrap();
        let expect = sec6_constants(cb.lambda);
        let fit = extract_structure_constants(&cb.kappa1, &cb.kappa2).unwrap();
        assert!((fit.constants.a1 - 1.0).abs() <= 1e-7);
        assert!((fit.constants.a2 - 1.0).abs() <= 1e-7);
        assert!(fit.constants.c1.abs() <= 1e-7 * expect.d.abs().max(1.0));
        assert!(fit.constants.c2.abs() <= 1e-7 * expect.d.abs().max(1.0));
        let s = expect
            .d
            .abs()
            .max(expect.e1.abs())
            .max(expect.e2.abs())
            .max(1.0);
        assert!((fit.constants.d - expect.d).abs() <= 1e-7 * s);
        assert!((fit.constants.e1 - expect.e1).abs() <= 1e-7 * s);
        assert!((fit.constants.e2 - expect.e2).abs() <= 1e-7 * s);
    }

    #[test]
    fn kappa_overlaps_are_racah_coefficients() {
        let block = WeightBlock::new([0.85, 1.45, 0.6], 6).unwrap();
        for j in [2, 4, 6] {
            let cb = couple(&block, j).unwrap();
            match kappa_overlap_vs_racah(&cb).unwrap() {
                OverlapOutcome::Compared(cmp) => {
                    assert!(cmp.max_deviation <= 1e-7, "j = {j}: {}", cmp.max_deviation);
                }
                OverlapOutcome::SkippedClustered { min_gap } => {
                    panic!("unexpected clustered spectrum for j = {j} (gap {min_gap})")
                }
            }
        }
    }

    #[test]
    fn out_of_range_block_rejected() {
        let block = WeightBlock::new([0.5, 0.9, 1.3], 2).unwrap();
        assert!(matches!(
            couple(&block, 3),
            Err(Su11Error::BlockOutOfRange { j: 3, max: 2 })
        ));
    }
}
