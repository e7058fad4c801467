use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::liealg::LieVector;
use crate::scalar::{Rational, Scalar};

/// Sorted multi-index `i₁ ≤ … ≤ i_k` naming the monomial `e_{i₁} ⊙ … ⊙ e_{i_k}`.
pub type MultiIndex = Vec<usize>;

/// Homogeneous element of `Sym^k(𝔤)`.
///
/// Terms are keyed by sorted multi-index; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<T> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, T>,
}

/// `C(dim + k − 1, k)`, the dimension of `Sym^k` of a `dim`-dimensional space.
pub fn sym_dimension(dim: usize, k: usize) -> u64 {
    if dim == 0 {
        return u64::from(k == 0);
    }
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (dim as u128 + i) / (i + 1);
    }
    acc as u64
}

/// All sorted multi-indices of length `k` over `0..dim`, lexicographic.
pub fn monomial_basis(dim: usize, k: usize) -> Vec<MultiIndex> {
    fn rec(dim: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            rec(dim, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

impl<T: Scalar> SymTensor<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff · e_{i₁} ⊙ … ⊙ e_{i_k}`; indices may be given in any order.
    pub fn monomial(dim: usize, indices: &[usize], coeff: T) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::InvalidInput(format!(
                "basis index {bad} out of range for dimension {dim}"
            )));
        }
        let mut t = Self::zero(dim, indices.len());
        let mut key = indices.to_vec();
        key.sort_unstable();
        t.add_term(key, coeff);
        Ok(t)
    }

    /// Degree-1 tensor from an algebra element.
    pub fn from_vector(x: &LieVector<T>) -> Self {
        let mut t = Self::zero(x.len(), 1);
        for (i, v) in x.0.iter().enumerate() {
            t.add_term(vec![i], v.clone());
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, T> {
        &self.terms
    }

    pub fn coeff(&self, key: &[usize]) -> T {
        self.terms.get(key).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest absolute coefficient.
    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(|v| v.abs_f64()).fold(0.0, f64::max)
    }

    /// Adds `coeff` to the term at a sorted key, pruning zeros.
    pub(crate) fn add_term(&mut self, key: MultiIndex, coeff: T) {
        debug_assert!(key.windows(2).all(|w| w[0] <= w[1]));
        debug_assert_eq!(key.len(), self.degree);
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                let sum = v.clone() + coeff;
                if sum.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = sum;
                }
            }
            None => {
                self.terms.insert(key, coeff);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        if self.degree != other.degree {
            return Err(Error::InvalidInput(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (key, v) in &self.terms {
            out.add_term(key.clone(), v.clone() * k.clone());
        }
        out
    }

    /// Symmetric product `X ⊙ Y`.
    pub fn sym_product(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                out.add_term(merge_sorted(ka, kb), va.clone() * vb.clone());
            }
        }
        Ok(out)
    }

    /// Renders with the given basis labels, e.g. `-2*e.e + 2*f.f`.
    pub fn display_with<'a>(&'a self, labels: &'a [String]) -> impl fmt::Display + 'a
    where
        T: fmt::Display + Signed,
    {
        TensorDisplay {
            tensor: self,
            labels,
        }
    }
}

impl SymTensor<Rational> {
    pub fn to_f64(&self) -> SymTensor<f64> {
        SymTensor {
            dim: self.dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), f64::from_rational(v)))
                .collect(),
        }
    }

    /// Parses `coef*a.b.c + ...` where `a`, `b`, `c` are basis labels and
    /// `coef` is an optional integer or `p/q`. A bare coefficient is a
    /// degree-0 term; `0` is the zero tensor of degree 0.
    pub fn parse(text: &str, labels: &[String]) -> Result<Self> {
        let dim = labels.len();
        let mut out: Option<Self> = None;
        for (sign, body) in split_terms(text)? {
            let (coeff, factors) = parse_term(body, labels)?;
            let coeff = if sign { -coeff } else { coeff };
            let degree = factors.len();
            let t = out.get_or_insert_with(|| Self::zero(dim, degree));
            if t.degree != degree {
                return Err(Error::Parse(format!(
                    "mixed degrees {} and {} in `{text}`",
                    t.degree, degree
                )));
            }
            let mut key = factors;
            key.sort_unstable();
            t.add_term(key, coeff);
        }
        out.ok_or_else(|| Error::Parse("empty tensor expression".into()))
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> MultiIndex {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Splits on top-level `+`/`-`, returning `(negated, term)`.
fn split_terms(text: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut negated = false;
    let mut start = 0;
    let mut seen_body = false;
    for (i, ch) in text.char_indices() {
        match ch {
            '+' | '-' => {
                if seen_body {
                    out.push((negated, text[start..i].trim()));
                    negated = false;
                    seen_body = false;
                }
                if ch == '-' {
                    negated = !negated;
                }
                start = i + 1;
            }
            c if c.is_whitespace() => {}
            _ => seen_body = true,
        }
    }
    if seen_body {
        out.push((negated, text[start..].trim()));
    } else if !text.trim().is_empty() {
        return Err(Error::Parse(format!("dangling sign in `{text}`")));
    }
    Ok(out)
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

fn parse_term(body: &str, labels: &[String]) -> Result<(Rational, Vec<usize>)> {
    let (coeff, mono) = match body.split_once('*') {
        Some((c, m)) => (
            parse_rational(c).ok_or_else(|| Error::Parse(format!("bad coefficient `{c}`")))?,
            Some(m.trim()),
        ),
        None => match parse_rational(body) {
            Some(c) => (c, None),
            None => (Rational::one(), Some(body.trim())),
        },
    };
    let mut factors = Vec::new();
    if let Some(mono) = mono {
        for f in mono.split('.') {
            let f = f.trim();
            let idx = labels
                .iter()
                .position(|l| l == f)
                .ok_or_else(|| Error::Parse(format!("unknown basis label `{f}`")))?;
            factors.push(idx);
        }
    }
    Ok((coeff, factors))
}

struct TensorDisplay<'a, T> {
    tensor: &'a SymTensor<T>,
    labels: &'a [String],
}

impl<T: Scalar + fmt::Display + Signed> fmt::Display for TensorDisplay<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tensor.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (key, v)) in self.tensor.terms.iter().enumerate() {
            let mag = v.abs();
            if n == 0 {
                if v.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if v.is_negative() { '-' } else { '+' })?;
            }
            let name = key
                .iter()
                .map(|&i| self.labels[i].as_str())
                .collect::<Vec<_>>()
                .join(".");
            if key.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
        }
        Ok(())
    }
}
