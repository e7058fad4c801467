//! Chevalley–Eilenberg cohomology `H^q(𝔤, Sym^p 𝔤)`.
//!
//! Cochains are `Λ^q 𝔤* ⊗ Sym^p 𝔤`, indexed by (sorted q-subset, monomial).
//! The module action of `e_i` on `Sym^p 𝔤` is the derivation extension of
//! `ad_{e_i}`. The differential is
//!
//! ```text
//! (dω)(x₀,…,x_q) = Σ_i (−1)^i x_i·ω(…x̂_i…) + Σ_{i<j} (−1)^{i+j} ω([x_i,x_j], …x̂_i…x̂_j…)
//! ```

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use super::tensor::{monomial_basis, MultiIndex};
use crate::liealg::LieAlgebra;
use crate::linalg;
use crate::scalar::Rational;

/// Matrices of `e_i` acting on `Sym^p 𝔤` in the monomial basis, one per `i`.
/// Entry `[row][col]` is the coefficient of monomial `row` in `e_i · col`.
pub fn sym_module_action(g: &LieAlgebra, p: usize) -> Vec<Vec<Vec<Rational>>> {
    let basis = monomial_basis(g.dim(), p);
    let index: HashMap<&MultiIndex, usize> =
        basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let size = basis.len();

    (0..g.dim())
        .map(|i| {
            let mut m = vec![vec![Rational::zero(); size]; size];
            for (col, key) in basis.iter().enumerate() {
                for slot in 0..key.len() {
                    for (a, b, c, v) in g.nonzero_constants() {
                        if *a != i || *b != key[slot] {
                            continue;
                        }
                        let mut new_key = key.clone();
                        new_key[slot] = *c;
                        new_key.sort_unstable();
                        m[index[&new_key]][col] += v;
                    }
                }
            }
            m
        })
        .collect()
}

fn subsets(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, q: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, q, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, q, 0, &mut Vec::new(), &mut out);
    out
}

fn sign(k: usize) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Matrix of `d: C^q → C^{q+1}` with rows `(T, r)` and columns `(S, m)`,
/// flattened as `subset_index * dim_V + monomial_index`.
pub fn ce_differential(g: &LieAlgebra, p: usize, q: usize) -> Vec<Vec<Rational>> {
    let n = g.dim();
    let action = sym_module_action(g, p);
    let dim_v = monomial_basis(n, p).len();
    let sources = subsets(n, q);
    let targets = subsets(n, q + 1);
    let source_index: HashMap<&Vec<usize>, usize> =
        sources.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let cols = sources.len() * dim_v;

    targets
        .par_iter()
        .flat_map_iter(|t| {
            let mut block = vec![vec![Rational::zero(); cols]; dim_v];

            // Σ_i (−1)^i x_i · ω(…x̂_i…)
            for i in 0..t.len() {
                let rest: Vec<usize> = t
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, &v)| v)
                    .collect();
                let s = source_index[&rest];
                let rho = &action[t[i]];
                let sg = Rational::from_integer(sign(i).into());
                for (r, row) in rho.iter().enumerate() {
                    for (m, v) in row.iter().enumerate() {
                        if !v.is_zero() {
                            block[r][s * dim_v + m] += &sg * v;
                        }
                    }
                }
            }

            // Σ_{i<j} (−1)^{i+j} ω([x_i, x_j], …)
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    let rest: Vec<usize> = t
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, &v)| v)
                        .collect();
                    for (a, b, c, v) in g.nonzero_constants() {
                        if *a != t[i] || *b != t[j] || rest.contains(c) {
                            continue;
                        }
                        // Move e_c from the front into sorted position.
                        let before = rest.iter().filter(|&&x| x < *c).count();
                        let mut set = rest.clone();
                        set.insert(before, *c);
                        let s = source_index[&set];
                        let coeff = v * Rational::from_integer((sign(i + j) * sign(before)).into());
                        for m in 0..dim_v {
                            block[m][s * dim_v + m] += &coeff;
                        }
                    }
                }
            }
            block
        })
        .collect()
}

/// `dim H^q(𝔤, Sym^p 𝔤)`, computed exactly.
pub fn ce_cohomology_dim(g: &LieAlgebra, p: usize, q: usize) -> u64 {
    let n = g.dim();
    if q > n {
        return 0;
    }
    let dim_v = monomial_basis(n, p).len();
    let cochains = subsets(n, q).len() * dim_v;
    let rank_out = if q == n {
        0
    } else {
        linalg::rank(&ce_differential(g, p, q))
    };
    let rank_in = if q == 0 {
        0
    } else {
        linalg::rank(&ce_differential(g, p, q - 1))
    };
    (cochains - rank_out - rank_in) as u64
}

/// `dim H^q(𝔤, Sym^p 𝔤)` for `q = 0..=dim 𝔤`, sharing the rank computations.
pub fn ce_cohomology_dims(g: &LieAlgebra, p: usize) -> Vec<u64> {
    let n = g.dim();
    let dim_v = monomial_basis(n, p).len();
    let ranks: Vec<usize> = (0..n)
        .map(|q| linalg::rank(&ce_differential(g, p, q)))
        .collect();
    (0..=n)
        .map(|q| {
            let cochains = subsets(n, q).len() * dim_v;
            let out = if q < n { ranks[q] } else { 0 };
            let inc = if q > 0 { ranks[q - 1] } else { 0 };
            (cochains - out - inc) as u64
        })
        .collect()
}
