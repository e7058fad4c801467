//! Finite-dimensional Lie algebras given by structure constants.
//!
//! Index convention, used everywhere in this crate:
//!
//! ```text
//! [e_a, e_b] = Σ_c C^c_{ab} e_c          constant(a, b, c) = C^c_{ab}
//! ⟨ad*_X λ, Y⟩ = −⟨λ, [X, Y]⟩            coad_matrix(X) = −ad_matrix(X)ᵀ
//! ```
//!
//! Formulas written with `C^c_{ba}` elsewhere are translated into this form at
//! the point of use.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{max_abs, Rational, Scalar};

/// Element of the algebra in the basis `e_0 .. e_{dim-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieVector<T>(pub Vec<T>);

/// Element of the dual space, paired against [`LieVector`].
#[derive(Clone, Debug, PartialEq)]
pub struct DualVector<T>(pub Vec<T>);

macro_rules! vector_common {
    ($ty:ident) => {
        impl<T: Scalar> $ty<T> {
            pub fn zeros(dim: usize) -> Self {
                Self(vec![T::zero(); dim])
            }

            pub fn basis(dim: usize, index: usize) -> Self {
                let mut v = vec![T::zero(); dim];
                v[index] = T::one();
                Self(v)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|v| v.is_zero())
            }

            pub fn scale(&self, k: &T) -> Self {
                Self(self.0.iter().map(|v| v.clone() * k.clone()).collect())
            }

            pub fn add(&self, other: &Self) -> Self {
                Self(
                    self.0
                        .iter()
                        .zip(&other.0)
                        .map(|(a, b)| a.clone() + b.clone())
                        .collect(),
                )
            }

            pub fn sub(&self, other: &Self) -> Self {
                Self(
                    self.0
                        .iter()
                        .zip(&other.0)
                        .map(|(a, b)| a.clone() - b.clone())
                        .collect(),
                )
            }

            /// Largest absolute component, as a float.
            pub fn max_norm(&self) -> f64 {
                self.0.iter().map(|v| v.abs_f64()).fold(0.0, f64::max)
            }
        }

        impl<T> From<Vec<T>> for $ty<T> {
            fn from(v: Vec<T>) -> Self {
                Self(v)
            }
        }
    };
}

vector_common!(LieVector);
vector_common!(DualVector);

impl LieVector<Rational> {
    pub fn to_f64(&self) -> LieVector<f64> {
        LieVector(self.0.iter().map(f64::from_rational).collect())
    }
}

impl DualVector<Rational> {
    pub fn to_f64(&self) -> DualVector<f64> {
        DualVector(self.0.iter().map(f64::from_rational).collect())
    }
}

impl DualVector<f64> {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// `⟨λ, X⟩`.
pub fn pairing<T: Scalar>(lambda: &DualVector<T>, x: &LieVector<T>) -> T {
    lambda
        .0
        .iter()
        .zip(&x.0)
        .fold(T::zero(), |acc, (l, v)| acc + l.clone() * v.clone())
}

/// On-disk form of an algebra: `constants` rows are `[a, b, c, num, den]`
/// meaning `C^c_{ab} = num/den`, 0-based indices. Only one of each
/// antisymmetric pair needs to be listed.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    #[serde(default)]
    pub name: Option<String>,
    pub dim: usize,
    pub labels: Vec<String>,
    pub constants: Vec<[i64; 5]>,
}

const PRESET_SU2: &str = include_str!("../data/algebras/su2.json");
const PRESET_SO3: &str = include_str!("../data/algebras/so3.json");
const PRESET_SL2: &str = include_str!("../data/algebras/sl2.json");

/// Largest dimension accepted; the dense constant table is `dim³` entries.
pub const MAX_DIM: usize = 64;

/// Names accepted by [`LieAlgebra::preset`] besides `abelian<n>`.
pub const PRESET_NAMES: [&str; 3] = ["su2", "so3", "sl2"];

/// A Lie algebra (or, before [`jacobi_residual`](Self::jacobi_residual) is
/// checked, an antisymmetric bracket) with exact structure constants.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    labels: Vec<String>,
    /// Dense `C[a][b][c]`, flattened.
    constants: Vec<Rational>,
    constants_f64: Vec<f64>,
    /// Nonzero entries `(a, b, c, C^c_{ab})`.
    nonzero: Vec<(usize, usize, usize, Rational)>,
}

impl LieAlgebra {
    /// Builds an algebra from entries `(a, b, c, C^c_{ab})`. The partner entry
    /// `C^c_{ba} = −C^c_{ab}` is filled in; listing both with inconsistent
    /// values, or a nonzero `C^c_{aa}`, is an error.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidAlgebra(format!(
                "dimension must be in 1..={MAX_DIM}, got {dim}"
            )));
        }
        let mut given: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
        for (a, b, c, v) in entries {
            let (a, b, c) = (*a, *b, *c);
            if a >= dim || b >= dim || c >= dim {
                return Err(Error::InvalidAlgebra(format!(
                    "index ({a}, {b}, {c}) out of range for dimension {dim}"
                )));
            }
            if a == b {
                if !v.is_zero() {
                    return Err(Error::InvalidAlgebra(format!(
                        "C^{c}_{{{a}{a}}} must vanish by antisymmetry"
                    )));
                }
                continue;
            }
            for (key, val) in [((a, b, c), v.clone()), ((b, a, c), -v.clone())] {
                match given.get(&key) {
                    Some(prev) if *prev != val => {
                        return Err(Error::InvalidAlgebra(format!(
                            "inconsistent constants for bracket ({}, {}) component {}",
                            key.0, key.1, key.2
                        )));
                    }
                    _ => {
                        given.insert(key, val);
                    }
                }
            }
        }

        let mut constants = vec![Rational::zero(); dim * dim * dim];
        let mut nonzero = Vec::new();
        for ((a, b, c), v) in given {
            if v.is_zero() {
                continue;
            }
            constants[(a * dim + b) * dim + c] = v.clone();
            nonzero.push((a, b, c, v));
        }
        let constants_f64 = constants.iter().map(f64::from_rational).collect();

        Ok(Self {
            name: name.into(),
            dim,
            labels,
            constants,
            constants_f64,
            nonzero,
        })
    }

    pub fn from_document(doc: &AlgebraDocument) -> Result<Self> {
        if doc.labels.len() != doc.dim {
            return Err(Error::InvalidAlgebra(format!(
                "{} labels for dimension {}",
                doc.labels.len(),
                doc.dim
            )));
        }
        let mut entries = Vec::with_capacity(doc.constants.len());
        for &[a, b, c, num, den] in &doc.constants {
            if den == 0 {
                return Err(Error::InvalidAlgebra("zero denominator".into()));
            }
            let idx = |i: i64| {
                usize::try_from(i).map_err(|_| Error::InvalidAlgebra(format!("negative index {i}")))
            };
            entries.push((idx(a)?, idx(b)?, idx(c)?, crate::scalar::rat(num, den)));
        }
        Self::new(
            doc.name.clone().unwrap_or_else(|| "custom".into()),
            doc.labels.clone(),
            &entries,
        )
    }

    /// Parses the JSON algebra document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AlgebraDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    pub fn to_document(&self) -> AlgebraDocument {
        use num_traits::ToPrimitive;
        let constants = self
            .nonzero
            .iter()
            .filter(|(a, b, _, _)| a < b)
            .map(|(a, b, c, v)| {
                [
                    *a as i64,
                    *b as i64,
                    *c as i64,
                    v.numer().to_i64().unwrap_or(0),
                    v.denom().to_i64().unwrap_or(1),
                ]
            })
            .collect();
        AlgebraDocument {
            name: Some(self.name.clone()),
            dim: self.dim,
            labels: self.labels.clone(),
            constants,
        }
    }

    /// The abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Result<Self> {
        let labels = (1..=dim).map(|i| format!("e{i}")).collect();
        Self::new(format!("abelian{dim}"), labels, &[])
    }

    /// Looks up a shipped algebra: `su2`, `so3`, `sl2` or `abelian<n>`.
    pub fn preset(name: &str) -> Result<Self> {
        let text = match name {
            "su2" => PRESET_SU2,
            "so3" => PRESET_SO3,
            "sl2" => PRESET_SL2,
            other => {
                return match other.strip_prefix("abelian").map(str::parse::<usize>) {
                    Some(Ok(n)) if n > 0 => Self::abelian(n),
                    _ => Err(Error::UnknownAlgebra(other.to_string())),
                }
            }
        };
        Self::from_json(text)
    }

    /// Preset name, or a path to a JSON algebra document.
    pub fn load(spec: &str) -> Result<Self> {
        match Self::preset(spec) {
            Err(Error::UnknownAlgebra(_)) if std::path::Path::new(spec).is_file() => {
                Self::from_json(&std::fs::read_to_string(spec)?)
            }
            other => other,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `C^c_{ab}`.
    pub fn constant(&self, a: usize, b: usize, c: usize) -> &Rational {
        &self.constants[(a * self.dim + b) * self.dim + c]
    }

    pub fn constant_f64(&self, a: usize, b: usize, c: usize) -> f64 {
        self.constants_f64[(a * self.dim + b) * self.dim + c]
    }

    /// Nonzero `(a, b, c, C^c_{ab})`, both orderings of each pair included.
    pub fn nonzero_constants(&self) -> &[(usize, usize, usize, Rational)] {
        &self.nonzero
    }

    pub fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: len,
            });
        }
        Ok(())
    }

    pub fn basis<T: Scalar>(&self, index: usize) -> LieVector<T> {
        LieVector::basis(self.dim, index)
    }

    /// `[X, Y] = Σ C^c_{ab} X^a Y^b e_c`.
    pub fn bracket<T: Scalar>(&self, x: &LieVector<T>, y: &LieVector<T>) -> Result<LieVector<T>> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        Ok(self.bracket_unchecked(&x.0, &y.0))
    }

    pub(crate) fn bracket_unchecked<T: Scalar>(&self, x: &[T], y: &[T]) -> LieVector<T> {
        let mut out = vec![T::zero(); self.dim];
        for (a, b, c, v) in &self.nonzero {
            if x[*a].is_zero() || y[*b].is_zero() {
                continue;
            }
            out[*c] = out[*c].clone() + T::from_rational(v) * x[*a].clone() * y[*b].clone();
        }
        LieVector(out)
    }

    /// Max-norm over basis triples of the cyclic Jacobi sum
    /// `[e_a,[e_b,e_c]] + [e_b,[e_c,e_a]] + [e_c,[e_a,e_b]]`, exact.
    pub fn jacobi_residual(&self) -> Rational {
        let n = self.dim;
        let e = |i: usize| self.basis::<Rational>(i).0;
        let br = |x: &[Rational], y: &[Rational]| self.bracket_unchecked(x, y).0;
        let mut worst = Rational::zero();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t1 = br(&e(a), &br(&e(b), &e(c)));
                    let t2 = br(&e(b), &br(&e(c), &e(a)));
                    let t3 = br(&e(c), &br(&e(a), &e(b)));
                    let sum: Vec<Rational> = (0..n)
                        .map(|k| t1[k].clone() + t2[k].clone() + t3[k].clone())
                        .collect();
                    let m = max_abs(&sum);
                    if m > worst {
                        worst = m;
                    }
                }
            }
        }
        worst
    }

    /// Matrix of `Y ↦ [X, Y]`: entry `[c][b] = Σ_a X^a C^c_{ab}`.
    pub fn ad_matrix<T: Scalar>(&self, x: &LieVector<T>) -> Result<Vec<Vec<T>>> {
        self.check_dim(x.len())?;
        let mut m = vec![vec![T::zero(); self.dim]; self.dim];
        for (a, b, c, v) in &self.nonzero {
            if x.0[*a].is_zero() {
                continue;
            }
            m[*c][*b] = m[*c][*b].clone() + T::from_rational(v) * x.0[*a].clone();
        }
        Ok(m)
    }

    /// Matrix of `λ ↦ ad*_X λ`, equal to `−ad_matrix(X)ᵀ`.
    pub fn coad_matrix<T: Scalar>(&self, x: &LieVector<T>) -> Result<Vec<Vec<T>>> {
        let ad = self.ad_matrix(x)?;
        let n = self.dim;
        Ok((0..n)
            .map(|i| (0..n).map(|j| -ad[j][i].clone()).collect())
            .collect())
    }

    /// `ad*_X λ`.
    pub fn coad_action<T: Scalar>(
        &self,
        x: &LieVector<T>,
        lambda: &DualVector<T>,
    ) -> Result<DualVector<T>> {
        self.check_dim(lambda.len())?;
        Ok(DualVector(linalg::mat_vec(
            &self.coad_matrix(x)?,
            &lambda.0,
        )))
    }

    /// `B_{ab} = tr(ad_{e_a} ∘ ad_{e_b})`.
    pub fn killing_form(&self) -> Vec<Vec<Rational>> {
        let n = self.dim;
        let ads: Vec<Vec<Vec<Rational>>> = (0..n)
            .map(|i| self.ad_matrix(&self.basis(i)).expect("basis conforms"))
            .collect();
        let mut b = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let mut tr = Rational::zero();
                for r in 0..n {
                    for k in 0..n {
                        if !ads[i][r][k].is_zero() && !ads[j][k][r].is_zero() {
                            tr += &ads[i][r][k] * &ads[j][k][r];
                        }
                    }
                }
                b[i][j] = tr.clone();
                b[j][i] = tr;
            }
        }
        b
    }

    /// Cartan's criterion: the Killing form is nondegenerate.
    pub fn is_semisimple(&self) -> bool {
        !linalg::determinant(&self.killing_form()).is_zero()
    }

    /// Basis of `{Z : [Z, e_b] = 0 for all b}`.
    pub fn center_basis(&self) -> Vec<LieVector<Rational>> {
        // Row (b, c) of the stacked map: Σ_a Z^a C^c_{ab}.
        let n = self.dim;
        let mut rows = vec![vec![Rational::zero(); n]; n * n];
        for (a, b, c, v) in &self.nonzero {
            rows[b * n + c][*a] = v.clone();
        }
        linalg::nullspace(&rows, n)
            .into_iter()
            .map(LieVector)
            .collect()
    }

    /// Basis of the stabilizer `{X : ad*_X λ = 0}`.
    pub fn stabilizer_subalgebra(
        &self,
        lambda: &DualVector<Rational>,
    ) -> Result<Vec<LieVector<Rational>>> {
        self.check_dim(lambda.len())?;
        // (ad*_X λ)_b = Σ_{a,c} X^a C^c_{ab} λ_c; row b, column a.
        let n = self.dim;
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (a, b, c, v) in &self.nonzero {
            if !lambda.0[*c].is_zero() {
                rows[*b][*a] += v * &lambda.0[*c];
            }
        }
        Ok(linalg::nullspace(&rows, n)
            .into_iter()
            .map(LieVector)
            .collect())
    }

    /// Lie-algebraic coefficient of `ad*_Ω λ` for a curvature value `Ω`:
    /// `(ad*_Ω λ)_a = Σ C^c_{ab} Ω^b λ_c`. The scalar 2-form factor is carried
    /// by the caller.
    pub fn coad_curvature_action<T: Scalar>(
        &self,
        omega: &LieVector<T>,
        lambda: &DualVector<T>,
    ) -> Result<DualVector<T>> {
        self.check_dim(omega.len())?;
        self.check_dim(lambda.len())?;
        let mut out = vec![T::zero(); self.dim];
        for (a, b, c, v) in &self.nonzero {
            if omega.0[*b].is_zero() || lambda.0[*c].is_zero() {
                continue;
            }
            out[*a] =
                out[*a].clone() + T::from_rational(v) * omega.0[*b].clone() * lambda.0[*c].clone();
        }
        Ok(DualVector(out))
    }

    /// True when `ad*_Ω λ` vanishes, i.e. the constraint is integrable.
    pub fn is_integrable<T: Scalar>(
        &self,
        omega: &LieVector<T>,
        lambda: &DualVector<T>,
    ) -> Result<bool> {
        Ok(self.coad_curvature_action(omega, lambda)?.is_zero())
    }

    /// Human-readable bracket table, one line per nonzero `[e_a, e_b]`, a < b.
    pub fn bracket_table(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                let v = self.bracket_unchecked::<Rational>(&self.basis(a).0, &self.basis(b).0);
                lines.push(format!(
                    "[{}, {}] = {}",
                    self.labels[a],
                    self.labels[b],
                    format_combination(&v.0, &self.labels)
                ));
            }
        }
        lines
    }
}

/// Formats `Σ v_i label_i`, e.g. `e1 - 2 e3`.
pub fn format_combination(coeffs: &[Rational], labels: &[String]) -> String {
    let mut out = String::new();
    for (v, label) in coeffs.iter().zip(labels) {
        if v.is_zero() {
            continue;
        }
        let mag = v.abs();
        let sign = if v.is_negative() { "-" } else { "+" };
        if out.is_empty() {
            if v.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if mag != Rational::from_integer(1.into()) {
            out.push_str(&format!("{mag} "));
        }
        out.push_str(label);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> LieVector<Rational> {
        LieVector(xs.iter().map(|&x| int(x)).collect())
    }

    fn d(xs: &[i64]) -> DualVector<Rational> {
        DualVector(xs.iter().map(|&x| int(x)).collect())
    }

    fn su2() -> LieAlgebra {
        LieAlgebra::preset("su2").unwrap()
    }

    #[test]
    fn su2_bracket_table() {
        let g = su2();
        assert_eq!(
            g.bracket(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(),
            v(&[0, 0, 1])
        );
        assert_eq!(
            g.bracket(&v(&[0, 1, 0]), &v(&[0, 0, 1])).unwrap(),
            v(&[1, 0, 0])
        );
        assert_eq!(
            g.bracket(&v(&[0, 0, 1]), &v(&[1, 0, 0])).unwrap(),
            v(&[0, 1, 0])
        );
        assert_eq!(
            g.bracket_table(),
            vec!["[e1, e2] = e3", "[e1, e3] = -e2", "[e2, e3] = e1"]
        );
    }

    #[test]
    fn bracket_bilinear_example() {
        let g = su2();
        assert_eq!(
            g.bracket(&v(&[1, 1, 0]), &v(&[0, 0, 1])).unwrap(),
            v(&[1, -1, 0])
        );
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let g = su2();
        assert!(matches!(
            g.bracket(&v(&[1, 0]), &v(&[0, 1, 0])),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn presets_are_lie_algebras() {
        for name in ["su2", "so3", "sl2", "abelian1", "abelian2", "abelian5"] {
            assert!(
                LieAlgebra::preset(name)
                    .unwrap()
                    .jacobi_residual()
                    .is_zero(),
                "{name}"
            );
        }
        assert!(matches!(
            LieAlgebra::preset("g2"),
            Err(Error::UnknownAlgebra(_))
        ));
        assert!(LieAlgebra::preset("abelian0").is_err());
    }

    #[test]
    fn flipping_one_su2_constant_still_gives_a_lie_algebra() {
        // [e2,e3] = -e1 with the other two brackets unchanged is sl(2, R).
        let g = LieAlgebra::new(
            "flipped",
            vec!["e1".into(), "e2".into(), "e3".into()],
            &[(0, 1, 2, int(1)), (1, 2, 0, int(-1)), (2, 0, 1, int(1))],
        )
        .unwrap();
        assert!(g.jacobi_residual().is_zero());
        assert!(g.is_semisimple());
    }

    #[test]
    fn corrupted_bracket_has_nonzero_jacobi_residual() {
        // [e1,e2] = e3 + e1: the cyclic sum on (e1,e2,e3) is [e3,e1] = e2.
        let g = LieAlgebra::new(
            "corrupt",
            vec!["e1".into(), "e2".into(), "e3".into()],
            &[
                (0, 1, 2, int(1)),
                (0, 1, 0, int(1)),
                (1, 2, 0, int(1)),
                (2, 0, 1, int(1)),
            ],
        )
        .unwrap();
        assert_eq!(g.jacobi_residual(), int(1));
    }

    #[test]
    fn constructor_rejects_inconsistent_antisymmetry() {
        let labels: Vec<String> = vec!["a".into(), "b".into()];
        assert!(
            LieAlgebra::new("x", labels.clone(), &[(0, 1, 0, int(1)), (1, 0, 0, int(1))]).is_err()
        );
        assert!(LieAlgebra::new("x", labels.clone(), &[(0, 0, 1, int(1))]).is_err());
        assert!(LieAlgebra::new("x", labels.clone(), &[(0, 2, 1, int(1))]).is_err());
        assert!(LieAlgebra::new("x", labels, &[(0, 1, 0, int(1)), (1, 0, 0, int(-1))]).is_ok());
    }

    #[test]
    fn ad_matrix_su2_e3() {
        let g = su2();
        let ad = g.ad_matrix(&v(&[0, 0, 1])).unwrap();
        // columns: e1 -> e2, e2 -> -e1, e3 -> 0
        let col = |j: usize| (0..3).map(|i| ad[i][j].clone()).collect::<Vec<_>>();
        assert_eq!(col(0), v(&[0, 1, 0]).0);
        assert_eq!(col(1), v(&[-1, 0, 0]).0);
        assert_eq!(col(2), v(&[0, 0, 0]).0);
    }

    #[test]
    fn abelian_ad_is_zero() {
        let g = LieAlgebra::abelian(4).unwrap();
        let ad = g.ad_matrix(&v(&[1, 2, 3, 4])).unwrap();
        assert!(ad.iter().flatten().all(|x| x.is_zero()));
    }

    #[test]
    fn coadjoint_pairing_identity_on_basis() {
        for name in ["su2", "sl2"] {
            let g = LieAlgebra::preset(name).unwrap();
            for x in 0..3 {
                let cm = g.coad_matrix(&g.basis::<Rational>(x)).unwrap();
                for l in 0..3 {
                    let lam = DualVector::<Rational>::basis(3, l);
                    let coad = DualVector(linalg::mat_vec(&cm, &lam.0));
                    for y in 0..3 {
                        let ey = g.basis::<Rational>(y);
                        let lhs = pairing(&coad, &ey);
                        let rhs = pairing(&lam, &g.bracket(&g.basis(x), &ey).unwrap());
                        assert!((lhs + rhs).is_zero());
                    }
                }
            }
        }
        // e3 acting on λ = (1,0,0): ⟨ad*_{e3} λ, e2⟩ = −⟨λ, [e3, e2]⟩ = ⟨λ, e1⟩ = 1.
        let g = su2();
        assert_eq!(
            g.coad_action(&v(&[0, 0, 1]), &d(&[1, 0, 0])).unwrap(),
            d(&[0, 1, 0])
        );
    }

    #[test]
    fn killing_forms() {
        let g = su2();
        let b = g.killing_form();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b[i][j], if i == j { int(-2) } else { int(0) });
            }
        }
        assert!(g.is_semisimple());
        assert!(g.center_basis().is_empty());

        let ab = LieAlgebra::abelian(2).unwrap();
        assert!(ab.killing_form().iter().flatten().all(|x| x.is_zero()));
        assert!(!ab.is_semisimple());
        assert_eq!(ab.center_basis().len(), 2);

        let sl = LieAlgebra::preset("sl2").unwrap();
        assert_eq!(linalg::determinant(&sl.killing_form()), int(-128));
        assert!(sl.is_semisimple());
        assert!(sl.center_basis().is_empty());
    }

    #[test]
    fn center_of_a_direct_sum() {
        // su(2) ⊕ u(1): center is the u(1) factor.
        let g = LieAlgebra::new(
            "u2",
            vec!["e1".into(), "e2".into(), "e3".into(), "z".into()],
            &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))],
        )
        .unwrap();
        let c = g.center_basis();
        assert_eq!(c, vec![v(&[0, 0, 0, 1])]);
        assert!(!g.is_semisimple());
    }

    #[test]
    fn stabilizers() {
        let g = su2();
        let stab = g.stabilizer_subalgebra(&d(&[0, 0, 1])).unwrap();
        assert_eq!(stab, vec![v(&[0, 0, 1])]);
        assert_eq!(g.stabilizer_subalgebra(&d(&[0, 0, 0])).unwrap().len(), 3);
        let ab = LieAlgebra::abelian(2).unwrap();
        assert_eq!(ab.stabilizer_subalgebra(&d(&[3, -1])).unwrap().len(), 2);
        assert!(g.stabilizer_subalgebra(&d(&[1, 0])).is_err());
    }

    #[test]
    fn curvature_coadjoint_action() {
        let g = su2();
        let lam = d(&[0, 0, 1]);
        let r = g.coad_curvature_action(&v(&[0, 0, 1]), &lam).unwrap();
        assert!(r.is_zero());
        assert!(g.is_integrable(&v(&[0, 0, 1]), &lam).unwrap());
        let r = g.coad_curvature_action(&v(&[1, 0, 0]), &lam).unwrap();
        assert_eq!(r, d(&[0, -1, 0]));
        assert!(!g.is_integrable(&v(&[1, 0, 0]), &lam).unwrap());
        assert!(g
            .coad_curvature_action(&v(&[1, 2, 3]), &d(&[0, 0, 0]))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let g = LieAlgebra::preset("sl2").unwrap();
        let text = serde_json::to_string(&g.to_document()).unwrap();
        let h = LieAlgebra::from_json(&text).unwrap();
        assert_eq!(h.nonzero_constants(), g.nonzero_constants());

        assert!(LieAlgebra::from_json(r#"{"dim":2,"labels":["a"],"constants":[]}"#).is_err());
        assert!(LieAlgebra::from_json(r#"{"dim":1,"labels":["a"],"constants":[],"x":1}"#).is_err());
        assert!(
            LieAlgebra::from_json(r#"{"dim":2,"labels":["a","b"],"constants":[[0,1,0,1,0]]}"#)
                .is_err()
        );
        assert!(LieAlgebra::from_json(
            r#"{"dim":2,"labels":["a","b"],"constants":[[-1,1,0,1,1]]}"#
        )
        .is_err());
        let half =
            LieAlgebra::from_json(r#"{"dim":2,"labels":["a","b"],"constants":[[0,1,1,1,2]]}"#)
                .unwrap();
        assert_eq!(half.constant(0, 1, 1), &rat(1, 2));
        assert_eq!(half.constant(1, 0, 1), &rat(-1, 2));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
    }

    fn rational_vec(n: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec(small_rational(), n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn coad_is_negative_transpose(x in rational_vec(3), which in 0usize..2) {
            let g = LieAlgebra::preset(["su2", "sl2"][which]).unwrap();
            let x = LieVector(x);
            let ad = g.ad_matrix(&x).unwrap();
            let co = g.coad_matrix(&x).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(co[i][j].clone(), -ad[j][i].clone());
                }
            }
        }

        #[test]
        fn ad_matrix_agrees_with_bracket(x in rational_vec(3), y in rational_vec(3)) {
            let g = LieAlgebra::preset("sl2").unwrap();
            let (x, y) = (LieVector(x), LieVector(y));
            let via_matrix = linalg::mat_vec(&g.ad_matrix(&x).unwrap(), &y.0);
            prop_assert_eq!(via_matrix, g.bracket(&x, &y).unwrap().0);
            prop_assert!(g.bracket(&x, &x).unwrap().is_zero());
            let xy = g.bracket(&x, &y).unwrap();
            let yx = g.bracket(&y, &x).unwrap();
            prop_assert!(xy.add(&yx).is_zero());
        }

        #[test]
        fn stabilizer_vectors_annihilate_lambda(l in rational_vec(3), which in 0usize..2) {
            let g = LieAlgebra::preset(["su2", "sl2"][which]).unwrap();
            let lam = DualVector(l);
            for x in g.stabilizer_subalgebra(&lam).unwrap() {
                prop_assert!(g.coad_action(&x, &lam).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn killing_form_su2_negative_definite() {
        // Sylvester: leading principal minors alternate in sign starting negative.
        let b = su2().killing_form();
        for k in 1..=3 {
            let minor: Vec<Vec<Rational>> = b[..k].iter().map(|r| r[..k].to_vec()).collect();
            let det = linalg::determinant(&minor);
            assert_eq!(det.is_negative(), k % 2 == 1);
        }
    }
}
