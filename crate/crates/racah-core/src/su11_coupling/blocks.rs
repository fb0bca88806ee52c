//! Discrete-series ladder data and fixed-total-weight blocks of the
//! triple tensor product, with the intermediate and full Casimir matrices.

use super::Su11Error;
use crate::linalg::DenseOperator;

/// A positive-discrete-series representation with lowest weight nu > 0:
/// J0 |n> = (n + nu)|n>, and the Casimir J0^2 - J+J- - J0 = nu(nu-1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscreteSeriesRep {
    nu: f64,
}

/// The three matrix elements of the ladder action at level n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderElements {
    /// J0 |n> = j0 |n>
    pub j0: f64,
    /// J+ |n> = jplus_amp |n+1>
    pub jplus_amp: f64,
    /// J- |n> = jminus_amp |n-1>
    pub jminus_amp: f64,
}

impl DiscreteSeriesRep {
    pub fn new(nu: f64) -> Result<Self, Su11Error> {
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Su11Error::NonPositiveWeight { nu });
        }
        Ok(Self { nu })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn casimir_value(&self) -> f64 {
        self.nu * (self.nu - 1.0)
    }

    /// Amplitudes with all phases positive; the phase choice is a gauge
    /// (diagonal conjugation) and does not affect any residual.
    pub fn ladder_elements(&self, n: usize) -> LadderElements {
        let nf = n as f64;
        LadderElements {
            j0: nf + self.nu,
            jplus_amp: ((nf + 1.0) * (nf + 2.0 * self.nu)).sqrt(),
            jminus_amp: (nf * (nf + 2.0 * self.nu - 1.0)).sqrt(),
        }
    }
}

/// Which intermediate Casimir.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CasimirPair {
    P12,
    P23,
    P31,
}

impl CasimirPair {
    pub fn indices(&self) -> (usize, usize) {
        match self {
            CasimirPair::P12 => (0, 1),
            CasimirPair::P23 => (1, 2),
            CasimirPair::P31 => (2, 0),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CasimirPair::P12 => "C12",
            CasimirPair::P23 => "C23",
            CasimirPair::P31 => "C31",
        }
    }
}

/// The total-weight eigenspace with n1 + n2 + n3 = quanta in the tensor
/// product of three discrete-series representations; basis ordered
/// lexicographically in (n1, n2).
#[derive(Clone, Debug)]
pub struct WeightBlock {
    reps: [DiscreteSeriesRep; 3],
    quanta: usize,
    basis: Vec<[usize; 3]>,
}

impl WeightBlock {
    pub fn new(nu: [f64; 3], quanta: usize) -> Result<Self, Su11Error> {
        let reps = [
            DiscreteSeriesRep::new(nu[0])?,
            DiscreteSeriesRep::new(nu[1])?,
            DiscreteSeriesRep::new(nu[2])?,
        ];
        let mut basis = Vec::with_capacity((quanta + 1) * (quanta + 2) / 2);
        for n1 in 0..=quanta {
            for n2 in 0..=(quanta - n1) {
                basis.push([n1, n2, quanta - n1 - n2]);
            }
        }
        Ok(Self {
            reps,
            quanta,
            basis,
        })
    }

    pub fn nu(&self) -> [f64; 3] {
        [self.reps[0].nu(), self.reps[1].nu(), self.reps[2].nu()]
    }

    pub fn rep(&self, i: usize) -> &DiscreteSeriesRep {
        &self.reps[i]
    }

    pub fn quanta(&self) -> usize {
        self.quanta
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[[usize; 3]] {
        &self.basis
    }

    fn index_of(&self, state: [usize; 3]) -> usize {
        // n1 rows of decreasing length precede; closed form avoids a map
        let (n1, n2) = (state[0], state[1]);
        let skipped: usize = (0..n1).map(|k| self.quanta + 1 - k).sum();
        skipped + n2
    }

    pub fn casimir_values(&self) -> [f64; 3] {
        [
            self.reps[0].casimir_value(),
            self.reps[1].casimir_value(),
            self.reps[2].casimir_value(),
        ]
    }

    /// C^(ij) = lambda_i + lambda_j + 2 J0_i J0_j - (J+_i J-_j + J-_i J+_j)
    /// on the block; the cross terms preserve the total weight, so the
    /// block is exactly invariant.
    pub fn intermediate_casimir(&self, pair: CasimirPair) -> DenseOperator {
        let (i, j) = pair.indices();
        let lam = self.casimir_values();
        let mut m = DenseOperator::zeros(self.dim());
        for (col, state) in self.basis.iter().enumerate() {
            let li = self.reps[i].ladder_elements(state[i]);
            let lj = self.reps[j].ladder_elements(state[j]);
            m[(col, col)] += lam[i] + lam[j] + 2.0 * li.j0 * lj.j0;
            if state[j] >= 1 {
                let mut to = *state;
                to[i] += 1;
                to[j] -= 1;
                m[(self.index_of(to), col)] -= li.jplus_amp * lj.jminus_amp;
            }
            if state[i] >= 1 {
                let mut to = *state;
                to[i] -= 1;
                to[j] += 1;
                m[(self.index_of(to), col)] -= li.jminus_amp * lj.jplus_amp;
            }
        }
        m
    }

    /// C^(4) = (J0^(4))^2 - J+^(4) J-^(4) - J0^(4); the total weight
    /// J0^(4) is the scalar quanta + nu1 + nu2 + nu3 on the block.
    pub fn full_casimir(&self) -> DenseOperator {
        let j0_total = self.quanta as f64 + self.nu().iter().sum::<f64>();
        let mut m = DenseOperator::zeros(self.dim());
        for (col, state) in self.basis.iter().enumerate() {
            m[(col, col)] += j0_total * j0_total - j0_total;
            for j in 0..3 {
                if state[j] == 0 {
                    continue;
                }
                let down_amp = self.reps[j].ladder_elements(state[j]).jminus_amp;
                let mut lowered = *state;
                lowered[j] -= 1;
                for i in 0..3 {
                    let up_amp = self.reps[i].ladder_elements(lowered[i]).jplus_amp;
                    let mut to = lowered;
                    to[i] += 1;
                    m[(self.index_of(to), col)] -= up_amp * down_amp;
                }
            }
        }
        m
    }

    /// The scalar value of C^(12) on the one-dimensional quanta = 0 block:
    /// lambda_1 + lambda_2 + 2 nu_1 nu_2.
    pub fn lowest_intermediate_value(&self, pair: CasimirPair) -> f64 {
        let (i, j) = pair.indices();
        let lam = self.casimir_values();
        lam[i] + lam[j] + 2.0 * self.reps[i].nu() * self.reps[j].nu()
    }
}

/// Checks that the C^(4) spectrum on the block is
/// { nu4(nu4 - 1) : nu4 = nu1+nu2+nu3+j, j = 0..quanta } with
/// multiplicity j + 1, and returns the worst eigenvalue deviation.
pub fn full_casimir_spectrum_check(block: &WeightBlock) -> Result<f64, Su11Error> {
    let c4 = block.full_casimir();
    let eig = crate::linalg::sym_eigen(&c4)?;
    let nu_sum: f64 = block.nu().iter().sum();
    let scale = c4.inf_norm().max(1.0);
    let mut worst: f64 = 0.0;
    let mut cursor = 0;
    // eigenvalues ascending = ascending j since nu4(nu4-1) increases
    for j in 0..=block.quanta() {
        let nu4 = nu_sum + j as f64;
        let lam4 = nu4 * (nu4 - 1.0);
        for _ in 0..=j {
            let dev = (eig.values[cursor] - lam4).abs();
            if dev > 1e-8 * scale {
                return Err(Su11Error::EigenspaceDimension {
                    j,
                    expected: j + 1,
                    found: 0,
                });
            }
            worst = worst.max(dev);
            cursor += 1;
        }
    }
    debug_assert_eq!(cursor, block.dim());
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, residual, sym_eigen};

    #[test]
    fn ladder_elements_basic() {
        let rep = DiscreteSeriesRep::new(0.75).unwrap();
        let l0 = rep.ladder_elements(0);
        assert_eq!(l0.jminus_amp, 0.0);
        assert_eq!(l0.j0, 0.75);
        // C = nu(nu-1) on every level, exact cancellation
        for n in 0..12 {
            let l = rep.ladder_elements(n);
            let jpjm = l.jminus_amp * rep.ladder_elements(n.saturating_sub(1)).jplus_amp;
            let jpjm = if n == 0 { 0.0 } else { jpjm };
            let c = l.j0 * l.j0 - jpjm - l.j0;
            assert!((c - rep.casimir_value()).abs() < 1e-12, "n = {n}");
        }
        // [J+, J-]|n> = -2 (n + nu) |n>
        for n in 0..12 {
            let l = rep.ladder_elements(n);
            let jp_jm = if n == 0 {
                0.0
            } else {
                l.jminus_amp * rep.ladder_elements(n - 1).jplus_amp
            };
            let jm_jp = l.jplus_amp * rep.ladder_elements(n + 1).jminus_amp;
            assert!((jp_jm - jm_jp + 2.0 * l.j0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_nonpositive_weight() {
        assert!(DiscreteSeriesRep::new(0.0).is_err());
        assert!(DiscreteSeriesRep::new(-0.3).is_err());
        assert!(DiscreteSeriesRep::new(f64::NAN).is_err());
    }

    #[test]
    fn block_dimension_and_order() {
        let b = WeightBlock::new([0.5, 0.8, 1.1], 3).unwrap();
        assert_eq!(b.dim(), 10);
        assert_eq!(b.basis()[0], [0, 0, 3]);
        assert_eq!(b.basis()[1], [0, 1, 2]);
        assert_eq!(b.basis()[9], [3, 0, 0]);
        for (k, &st) in b.basis().iter().enumerate() {
            assert_eq!(b.index_of(st), k);
        }
    }

    #[test]
    fn trivial_block_values() {
        let b = WeightBlock::new([0.6, 1.2, 0.9], 0).unwrap();
        let c12 = b.intermediate_casimir(CasimirPair::P12);
        assert_eq!(c12.dim(), 1);
        let expect = b.lowest_intermediate_value(CasimirPair::P12);
        assert!((c12[(0, 0)] - expect).abs() < 1e-14);
        let c4 = b.full_casimir();
        let nu4 = 0.6 + 1.2 + 0.9;
        assert!((c4[(0, 0)] - nu4 * (nu4 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn casimirs_symmetric_and_commuting() {
        let b = WeightBlock::new([0.45, 1.7, 2.3], 5).unwrap();
        let c4 = b.full_casimir();
        assert!(c4.is_symmetric(1e-12));
        for pair in [CasimirPair::P12, CasimirPair::P23, CasimirPair::P31] {
            let c = b.intermediate_casimir(pair);
            assert!(c.is_symmetric(1e-12));
            let comm = commutator(&c, &c4).unwrap();
            assert!(comm.inf_norm() <= 1e-10 * c4.inf_norm().max(1.0) * c.inf_norm().max(1.0));
        }
        // C4 = C12 + C23 + C31 - C1 - C2 - C3
        let sum = b
            .intermediate_casimir(CasimirPair::P12)
            .add(&b.intermediate_casimir(CasimirPair::P23))
            .unwrap()
            .add(&b.intermediate_casimir(CasimirPair::P31))
            .unwrap()
            .add_scaled_identity(-b.casimir_values().iter().sum::<f64>());
        assert!(residual(&c4, &sum).unwrap() <= 1e-10);
    }

    #[test]
    fn spectrum_multiplicities_follow_j_plus_one() {
        // nu = (1/2, 1/2, 1/2), quanta 1: eigenvalues {3/4 (x1), 15/4 (x2)}
        let b = WeightBlock::new([0.5, 0.5, 0.5], 1).unwrap();
        let eig = sym_eigen(&b.full_casimir()).unwrap();
        assert!((eig.values[0] - 0.75).abs() < 1e-12);
        assert!((eig.values[1] - 3.75).abs() < 1e-12);
        assert!((eig.values[2] - 3.75).abs() < 1e-12);
        assert!(full_casimir_spectrum_check(&b).unwrap() <= 1e-10);
    }

    #[test]
    fn cyclic_relabeling_permutes_intermediate_casimirs() {
        let nu = [0.45, 1.7, 2.3];
        let b = WeightBlock::new(nu, 3).unwrap();
        let rotated = WeightBlock::new([nu[1], nu[2], nu[0]], 3).unwrap();
        // basis permutation induced by (n1,n2,n3) -> (n2,n3,n1)
        let perm: Vec<usize> = b
            .basis()
            .iter()
            .map(|&[n1, n2, n3]| rotated.index_of([n2, n3, n1]))
            .collect();
        let c23 = b.intermediate_casimir(CasimirPair::P23);
        let rot_c12 = rotated.intermediate_casimir(CasimirPair::P12);
        let mut worst: f64 = 0.0;
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                worst = worst.max((c23[(i, j)] - rot_c12[(perm[i], perm[j])]).abs());
            }
        }
        assert!(worst <= 1e-12);
    }
}
