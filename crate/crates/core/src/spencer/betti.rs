use serde::{Deserialize, Serialize};

use super::cohomology::ce_cohomology_dims;
use super::tensor::sym_dimension;
use crate::liealg::LieAlgebra;

/// Per-bidegree factor dimensions `f[p][q]` feeding the Betti decomposition.
///
/// The decomposition uses the `q = 0` column as the weight of Sym-degree `p`;
/// entries past the end of the table count as zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiFactorTable {
    pub entries: Vec<Vec<u64>>,
}

impl BettiFactorTable {
    /// Single-column table from per-degree weights.
    pub fn from_weights(weights: &[u64]) -> Self {
        Self {
            entries: weights.iter().map(|&w| vec![w]).collect(),
        }
    }

    pub fn weight(&self, p: usize) -> u64 {
        self.entries
            .get(p)
            .and_then(|row| row.first())
            .copied()
            .unwrap_or(0)
    }

    pub fn get(&self, p: usize, q: usize) -> u64 {
        self.entries
            .get(p)
            .and_then(|row| row.get(q))
            .copied()
            .unwrap_or(0)
    }
}

/// `f[p] = dim Sym^p(𝔤)` for `p = 0..=max_p`.
pub fn sym_dimension_factor(g: &LieAlgebra, max_p: usize) -> BettiFactorTable {
    let weights: Vec<u64> = (0..=max_p).map(|p| sym_dimension(g.dim(), p)).collect();
    BettiFactorTable::from_weights(&weights)
}

/// `f[p][q] = dim H^q(𝔤, Sym^p 𝔤)` for `p = 0..=max_p`.
pub fn whitehead_factor(g: &LieAlgebra, max_p: usize) -> BettiFactorTable {
    BettiFactorTable {
        entries: (0..=max_p).map(|p| ce_cohomology_dims(g, p)).collect(),
    }
}

/// `β_k = Σ_{p+q=k} base[q] · f[p]` for `k < base.len()`.
pub fn spencer_betti(base_betti: &[u64], factor: &BettiFactorTable) -> Vec<u64> {
    (0..base_betti.len())
        .map(|k| (0..=k).map(|p| base_betti[k - p] * factor.weight(p)).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_su2_worked_example() {
        let g = LieAlgebra::preset("su2").unwrap();
        let f = sym_dimension_factor(&g, 2);
        assert_eq!(f, BettiFactorTable::from_weights(&[1, 3, 6]));
        assert_eq!(spencer_betti(&[1, 2, 1], &f), vec![1, 5, 13]);
    }

    #[test]
    fn sphere_abelian() {
        let g = LieAlgebra::abelian(2).unwrap();
        let f = sym_dimension_factor(&g, 2);
        assert_eq!(spencer_betti(&[1, 0, 1], &f), vec![1, 2, 4]);
    }

    #[test]
    fn identity_convolution() {
        assert_eq!(
            spencer_betti(&[1], &BettiFactorTable::from_weights(&[1])),
            vec![1]
        );
        assert_eq!(
            spencer_betti(&[2, 3], &BettiFactorTable::from_weights(&[1])),
            vec![2, 3]
        );
    }

    #[test]
    fn whitehead_factor_for_su2() {
        let g = LieAlgebra::preset("su2").unwrap();
        let f = whitehead_factor(&g, 2);
        // invariants of Sym^p: 1, 0, 1; H^1 vanishes for every p
        assert_eq!((f.get(0, 0), f.get(1, 0), f.get(2, 0)), (1, 0, 1));
        for p in 0..=2 {
            assert_eq!(f.get(p, 1), 0);
        }
        assert_eq!(spencer_betti(&[1, 2, 1], &f), vec![1, 2, 2]);
    }
}
