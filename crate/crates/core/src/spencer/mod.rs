//! Symmetric algebra over 𝔤 and the Spencer differentials acting on it.
//!
//! Two differentials are provided and never mixed:
//!
//! - [`delta_structural`]: `δ(X₁⊙…⊙X_k) = Σ_i Σ_j e_i ⊙ X₁⊙…⊙[e_i, X_j]⊙…⊙X_k`,
//!   raising degree by one;
//! - [`delta_curvature`]: `δ_Ω(X₁⊙…⊙X_k) = Σ_j X₁⊙…⊙[Ω, X_j]⊙…⊙X_k`,
//!   degree preserving, with the scalar 2-form factor of `Ω` left to the caller.

mod betti;
mod cohomology;
mod tensor;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use betti::{spencer_betti, sym_dimension_factor, whitehead_factor, BettiFactorTable};
pub use cohomology::{ce_cohomology_dim, ce_cohomology_dims, ce_differential, sym_module_action};
pub use tensor::{monomial_basis, sym_dimension, MultiIndex, SymTensor};

use crate::error::Result;
use crate::liealg::{LieAlgebra, LieVector};
use crate::scalar::{max_abs, Rational, Scalar};

/// Applies `ad_x` as a derivation to one slot of a monomial and accumulates
/// `coeff · (result)` into `out`, optionally multiplying in an extra factor.
fn accumulate_slot_bracket<T: Scalar>(
    g: &LieAlgebra,
    out: &mut SymTensor<T>,
    key: &[usize],
    slot: usize,
    x: &[T],
    extra: Option<usize>,
    coeff: &T,
) {
    let target = key[slot];
    for (a, b, c, v) in g.nonzero_constants() {
        if *b != target || x[*a].is_zero() {
            continue;
        }
        let mut new_key: Vec<usize> = key.to_vec();
        new_key[slot] = *c;
        if let Some(e) = extra {
            new_key.push(e);
        }
        new_key.sort_unstable();
        out.add_term(new_key, coeff.clone() * x[*a].clone() * T::from_rational(v));
    }
}

/// Structural Spencer differential `Sym^k → Sym^{k+1}`.
pub fn delta_structural<T: Scalar>(g: &LieAlgebra, x: &SymTensor<T>) -> Result<SymTensor<T>> {
    g.check_dim(x.dim())?;
    let n = g.dim();
    let mut out = SymTensor::zero(n, x.degree() + 1);
    for i in 0..n {
        let e_i = g.basis::<T>(i).0;
        for (key, coeff) in x.terms() {
            for slot in 0..key.len() {
                accumulate_slot_bracket(g, &mut out, key, slot, &e_i, Some(i), coeff);
            }
        }
    }
    Ok(out)
}

/// Curvature-twisted differential `Sym^k → Sym^k`, the derivation extension
/// of `ad_Ω`.
pub fn delta_curvature<T: Scalar>(
    g: &LieAlgebra,
    omega: &LieVector<T>,
    x: &SymTensor<T>,
) -> Result<SymTensor<T>> {
    g.check_dim(x.dim())?;
    g.check_dim(omega.len())?;
    let mut out = SymTensor::zero(g.dim(), x.degree());
    for (key, coeff) in x.terms() {
        for slot in 0..key.len() {
            accumulate_slot_bracket(g, &mut out, key, slot, &omega.0, None, coeff);
        }
    }
    Ok(out)
}

/// For each degree `1..=max_degree`, the max-norm of `δ∘δ` over the monomial
/// basis of `Sym^k`, exact.
pub fn nilpotency_report(g: &LieAlgebra, max_degree: usize) -> BTreeMap<usize, Rational> {
    let mut report = BTreeMap::new();
    for k in 1..=max_degree {
        let mut worst = Rational::from_integer(0.into());
        for key in monomial_basis(g.dim(), k) {
            let m = SymTensor::monomial(g.dim(), &key, Rational::from_integer(1.into()))
                .expect("basis index in range");
            let d1 = delta_structural(g, &m).expect("dimension checked");
            let d2 = delta_structural(g, &d1).expect("dimension checked");
            let coeffs: Vec<Rational> = d2.terms().values().cloned().collect();
            let norm = max_abs(&coeffs);
            if norm > worst {
                worst = norm;
            }
        }
        report.insert(k, worst);
    }
    report
}

/// Machine-readable summary emitted by `lie betti --json`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SpencerReport {
    pub algebra: String,
    pub degrees: Vec<usize>,
    pub betti: Vec<u64>,
    pub factor_preset: String,
    /// Degree → max-norm of `δ²`, as an exact rational string.
    pub nilpotency: BTreeMap<usize, String>,
}
