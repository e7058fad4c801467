//! Characteristic-line integration of the modified Cartan equation
//! `dλ + ad*_ω λ = 0`.
//!
//! Along a base path `x(s) = x₀ + s·v` the distribution function obeys
//!
//! ```text
//! dλ_a/ds = −C^c_{ba} (A·v)^b λ_c,      (A·v)^b = Σ_μ A^b_μ(x) v^μ
//! ```
//!
//! which in this crate's convention is `dλ/ds = coad_matrix(A·v) · λ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liealg::{pairing, DualVector, LieAlgebra, LieVector};

/// Local connection potentials `A_μ(x)`.
pub trait ConnectionSampler: Send + Sync {
    /// `A_μ(x)` as an element of the algebra.
    fn potential(&self, x: &[f64], mu: usize) -> LieVector<f64>;

    /// Number of base coordinates the sampler understands, if fixed.
    fn base_dim(&self) -> Option<usize> {
        None
    }

    /// `Σ_μ A_μ(x) v^μ`.
    fn contract(&self, x: &[f64], v: &[f64], dim: usize) -> LieVector<f64> {
        let mut out = vec![0.0; dim];
        for (mu, &vm) in v.iter().enumerate() {
            if vm == 0.0 {
                continue;
            }
            let a = self.potential(x, mu);
            for (o, ai) in out.iter_mut().zip(&a.0) {
                *o += ai * vm;
            }
        }
        LieVector(out)
    }
}

/// Shipped connection presets.
#[derive(Clone, Debug, PartialEq)]
pub enum Connection {
    /// `A_μ(x) = potentials[μ]`, independent of `x`.
    Constant { potentials: Vec<LieVector<f64>> },
    /// `A = 0` on an algebra of the given dimension.
    Zero { dim: usize },
    /// Northern-patch Wu–Yang potential `A = q(1 − cos θ) dφ ⊗ T` in
    /// spherical coordinates `(r, θ, φ)`, with `T` the basis element
    /// `generator`.
    WuYangMonopole {
        charge: f64,
        dim: usize,
        generator: usize,
    },
}

impl Connection {
    /// Constant connection on a one-dimensional base, `A_0 = a`.
    pub fn constant(a: LieVector<f64>) -> Self {
        Connection::Constant {
            potentials: vec![a],
        }
    }

    pub fn abelian_zero(dim: usize) -> Self {
        Connection::Zero { dim }
    }

    /// Monopole along the last basis element (`e3` for su(2)).
    pub fn wu_yang_monopole(charge: f64, dim: usize) -> Self {
        Connection::WuYangMonopole {
            charge,
            dim,
            generator: dim - 1,
        }
    }

    pub fn algebra_dim(&self) -> usize {
        match self {
            Connection::Constant { potentials } => potentials.first().map_or(0, LieVector::len),
            Connection::Zero { dim } | Connection::WuYangMonopole { dim, .. } => *dim,
        }
    }

    /// `A·v` when it does not depend on the base point.
    pub fn constant_contraction(&self, v: &[f64]) -> Option<LieVector<f64>> {
        match self {
            Connection::Constant { .. } | Connection::Zero { .. } => {
                Some(self.contract(&vec![0.0; v.len()], v, self.algebra_dim()))
            }
            Connection::WuYangMonopole { .. } => None,
        }
    }
}

impl ConnectionSampler for Connection {
    fn potential(&self, x: &[f64], mu: usize) -> LieVector<f64> {
        match self {
            Connection::Constant { potentials } => potentials
                .get(mu)
                .cloned()
                .unwrap_or_else(|| LieVector::zeros(self.algebra_dim())),
            Connection::Zero { dim } => LieVector::zeros(*dim),
            Connection::WuYangMonopole {
                charge,
                dim,
                generator,
            } => {
                let mut a = LieVector::zeros(*dim);
                if mu == 2 {
                    let theta = x.get(1).copied().unwrap_or(0.0);
                    a.0[*generator] = charge * (1.0 - theta.cos());
                }
                a
            }
        }
    }

    fn base_dim(&self) -> Option<usize> {
        match self {
            Connection::Constant { potentials } => Some(potentials.len()),
            Connection::Zero { .. } => None,
            Connection::WuYangMonopole { .. } => Some(3),
        }
    }
}

/// `(s, x(s), λ(s))` along one characteristic.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicState {
    pub s: f64,
    pub x: Vec<f64>,
    pub lambda: DualVector<f64>,
}

impl CharacteristicState {
    pub fn new(x: Vec<f64>, lambda: DualVector<f64>) -> Self {
        Self { s: 0.0, x, lambda }
    }

    fn is_finite(&self) -> bool {
        self.s.is_finite()
            && self.x.iter().all(|v| v.is_finite())
            && self.lambda.0.iter().all(|v| v.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// The explicit first-order update `λ − Δs·C^c_{ba}(A·v)^b λ_c`.
    EulerPaper,
    /// Classical four-stage Runge–Kutta on the same right-hand side.
    Rk4,
}

/// `(dλ/ds)_a = −Σ_{b,c} C^c_{ba} w^b λ_c` with `w = A·v`.
pub fn cartan_rhs(
    g: &LieAlgebra,
    a_dot_v: &LieVector<f64>,
    lambda: &DualVector<f64>,
) -> DualVector<f64> {
    let n = g.dim();
    let mut out = vec![0.0; n];
    // nonzero entry (b, a, c) holds C^c_{ba}
    for (b, a, c, _) in g.nonzero_constants() {
        out[*a] -= g.constant_f64(*b, *a, *c) * a_dot_v.0[*b] * lambda.0[*c];
    }
    DualVector(out)
}

/// Largest stable step `1 / max_{a,b,c} |C^c_{ba} w^b|`; `+∞` when the
/// maximum vanishes.
pub fn cfl_bound(g: &LieAlgebra, a_dot_v: &LieVector<f64>) -> f64 {
    let worst = g
        .nonzero_constants()
        .iter()
        .map(|(b, a, c, _)| (g.constant_f64(*b, *a, *c) * a_dot_v.0[*b]).abs())
        .fold(0.0, f64::max);
    if worst == 0.0 {
        f64::INFINITY
    } else {
        1.0 / worst
    }
}

/// Generator `M` of the linear flow `dλ/ds = M λ` for a fixed `w = A·v`.
pub fn flow_generator(g: &LieAlgebra, a_dot_v: &LieVector<f64>) -> Vec<Vec<f64>> {
    let n = g.dim();
    let mut m = vec![vec![0.0; n]; n];
    for (b, a, c, _) in g.nonzero_constants() {
        m[*a][*c] -= g.constant_f64(*b, *a, *c) * a_dot_v.0[*b];
    }
    m
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// `exp(M)` by scaling and squaring with a Taylor series truncated at 1e−14.
pub fn matrix_exp(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let norm = m
        .iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0i32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let a: Vec<Vec<f64>> = m
        .iter()
        .map(|row| row.iter().map(|v| v * scale).collect())
        .collect();

    let mut result: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut term = result.clone();
    for k in 1..40 {
        term = mat_mul(&term, &a);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= k as f64;
            }
        }
        let mut biggest: f64 = 0.0;
        for (r, t) in result.iter_mut().zip(&term) {
            for (x, y) in r.iter_mut().zip(t) {
                *x += y;
                biggest = biggest.max(y.abs());
            }
        }
        // Squaring amplifies the truncation error by at most 2^squarings.
        if biggest < 1e-14 * 0.5f64.powi(squarings) {
            break;
        }
    }
    for _ in 0..squarings {
        result = mat_mul(&result, &result);
    }
    result
}

/// Exact flow `exp(s·M) λ₀` of the characteristic ODE for constant `A·v = a`.
pub fn coadjoint_flow_exact(
    g: &LieAlgebra,
    a: &LieVector<f64>,
    lambda0: &DualVector<f64>,
    s: f64,
) -> Result<DualVector<f64>> {
    g.check_dim(a.len())?;
    g.check_dim(lambda0.len())?;
    let m: Vec<Vec<f64>> = flow_generator(g, a)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v * s).collect())
        .collect();
    let e = matrix_exp(&m);
    Ok(DualVector(
        e.iter()
            .map(|row| row.iter().zip(&lambda0.0).map(|(x, y)| x * y).sum())
            .collect(),
    ))
}

/// Steps a single characteristic through a connection.
pub struct CharacteristicIntegrator<'a, C: ConnectionSampler + ?Sized> {
    pub algebra: &'a LieAlgebra,
    pub connection: &'a C,
    /// Base velocity `v`.
    pub velocity: Vec<f64>,
    pub scheme: Scheme,
    /// Rescale λ back to its pre-step norm after every update.
    pub renormalize: bool,
}

impl<'a, C: ConnectionSampler + ?Sized> CharacteristicIntegrator<'a, C> {
    fn contraction(&self, x: &[f64]) -> LieVector<f64> {
        self.connection
            .contract(x, &self.velocity, self.algebra.dim())
    }

    fn advance(&self, x: &[f64], ds: f64) -> Vec<f64> {
        x.iter()
            .zip(&self.velocity)
            .map(|(xi, vi)| xi + ds * vi)
            .collect()
    }

    /// CFL bound at the given state.
    pub fn cfl_bound_at(&self, state: &CharacteristicState) -> f64 {
        cfl_bound(self.algebra, &self.contraction(&state.x))
    }

    pub fn check(&self, state: &CharacteristicState) -> Result<()> {
        self.algebra.check_dim(state.lambda.len())?;
        if state.x.len() != self.velocity.len() {
            return Err(Error::DimensionMismatch {
                expected: self.velocity.len(),
                got: state.x.len(),
            });
        }
        if let Some(base) = self.connection.base_dim() {
            if base != self.velocity.len() {
                return Err(Error::DimensionMismatch {
                    expected: base,
                    got: self.velocity.len(),
                });
            }
        }
        Ok(())
    }

    /// One step of size `ds`. Rejected without touching the state when
    /// `ds ≥ cfl_bound` at the current point.
    pub fn step(&self, state: &CharacteristicState, ds: f64) -> Result<CharacteristicState> {
        self.check(state)?;
        if !state.is_finite() || !ds.is_finite() {
            return Err(Error::NonFinite(format!("state at s = {}", state.s)));
        }
        let bound = self.cfl_bound_at(state);
        if ds >= bound {
            return Err(Error::CflViolation { ds, bound });
        }

        let g = self.algebra;
        let lam = &state.lambda;
        let mut next = match self.scheme {
            Scheme::EulerPaper => {
                let w = self.contraction(&state.x);
                let mut sums = vec![0.0; g.dim()];
                for (b, a, c, _) in g.nonzero_constants() {
                    sums[*a] += g.constant_f64(*b, *a, *c) * w.0[*b] * lam.0[*c];
                }
                DualVector(lam.0.iter().zip(&sums).map(|(l, t)| l - ds * t).collect())
            }
            Scheme::Rk4 => {
                let x_mid = self.advance(&state.x, 0.5 * ds);
                let x_end = self.advance(&state.x, ds);
                let w0 = self.contraction(&state.x);
                let wm = self.contraction(&x_mid);
                let w1 = self.contraction(&x_end);
                let k1 = cartan_rhs(g, &w0, lam);
                let k2 = cartan_rhs(g, &wm, &lam.add(&k1.scale(&(0.5 * ds))));
                let k3 = cartan_rhs(g, &wm, &lam.add(&k2.scale(&(0.5 * ds))));
                let k4 = cartan_rhs(g, &w1, &lam.add(&k3.scale(&ds)));
                DualVector(
                    (0..g.dim())
                        .map(|i| {
                            lam.0[i]
                                + ds / 6.0 * (k1.0[i] + 2.0 * k2.0[i] + 2.0 * k3.0[i] + k4.0[i])
                        })
                        .collect(),
                )
            }
        };

        if self.renormalize {
            let target = lam.norm();
            let now = next.norm();
            if now > 0.0 {
                next = next.scale(&(target / now));
            }
        }

        let out = CharacteristicState {
            s: state.s + ds,
            x: self.advance(&state.x, ds),
            lambda: next,
        };
        if !out.is_finite() {
            return Err(Error::NonFinite(format!("state at s = {}", out.s)));
        }
        Ok(out)
    }

    /// Integrates from `initial` to `s_end` with steps of `ds`, shortening
    /// the last one to land on `s_end`. Returns every state including the
    /// initial one.
    pub fn integrate(
        &self,
        initial: CharacteristicState,
        ds: f64,
        s_end: f64,
    ) -> Result<Vec<CharacteristicState>> {
        if !(ds > 0.0) || !s_end.is_finite() {
            return Err(Error::InvalidInput(format!(
                "need ds > 0 and finite s_end, got ds = {ds}, s_end = {s_end}"
            )));
        }
        let span = s_end - initial.s;
        let mut steps = (span / ds).round().max(0.0) as usize;
        if (steps as f64 * ds - span).abs() > 1e-9 * ds {
            steps = (span / ds).ceil().max(0.0) as usize;
        }
        let mut out = Vec::with_capacity(steps + 1);
        out.push(initial);
        for i in 0..steps {
            let cur = out.last().expect("non-empty");
            let h = if i + 1 == steps {
                (s_end - cur.s).min(ds)
            } else {
                ds
            };
            if h <= 0.0 {
                break;
            }
            let next = self.step(cur, h)?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Samples of λ on a regular grid with spacing `h` on every axis.
#[derive(Clone, Debug)]
pub struct SampleGrid {
    pub origin: Vec<f64>,
    /// Points per axis; values are row-major with the last axis fastest.
    pub shape: Vec<usize>,
    pub values: Vec<DualVector<f64>>,
}

impl SampleGrid {
    /// Samples `f` on the grid `origin + h·index`.
    pub fn sample(
        origin: Vec<f64>,
        shape: Vec<usize>,
        h: f64,
        mut f: impl FnMut(&[f64]) -> DualVector<f64>,
    ) -> Self {
        let total: usize = shape.iter().product();
        let mut values = Vec::with_capacity(total);
        for flat in 0..total {
            let idx = unflatten(flat, &shape);
            let x: Vec<f64> = origin
                .iter()
                .zip(&idx)
                .map(|(o, &i)| o + h * i as f64)
                .collect();
            values.push(f(&x));
        }
        Self {
            origin,
            shape,
            values,
        }
    }
}

fn unflatten(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for d in (0..shape.len()).rev() {
        idx[d] = flat % shape[d];
        flat /= shape[d];
    }
    idx
}

fn flatten(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (&i, &n)| acc * n + i)
}

/// `R(λ) = max over interior points of ‖∇^ω λ‖`, with
/// `(∇_μ λ)_a = ∂_μ λ_a + C^c_{ba} A^b_μ λ_c` and second-order central
/// differences. The norm at a point is Euclidean over `(μ, a)`.
pub fn cartan_residual<C: ConnectionSampler + ?Sized>(
    g: &LieAlgebra,
    connection: &C,
    samples: &SampleGrid,
    h: f64,
) -> Result<f64> {
    let dims = samples.shape.len();
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "grid spacing must be positive, got {h}"
        )));
    }
    if dims == 0 || samples.shape.iter().any(|&n| n < 3) || samples.origin.len() != dims {
        return Err(Error::InvalidInput(
            "degenerate grid: need at least 3 points on every axis".into(),
        ));
    }
    if samples.values.len() != samples.shape.iter().product::<usize>() {
        return Err(Error::InvalidInput(
            "sample count does not match grid shape".into(),
        ));
    }
    for v in &samples.values {
        g.check_dim(v.len())?;
    }

    let n = g.dim();
    let mut worst: f64 = 0.0;
    for (flat, lam) in samples.values.iter().enumerate() {
        let idx = unflatten(flat, &samples.shape);
        if idx
            .iter()
            .zip(&samples.shape)
            .any(|(&i, &s)| i == 0 || i + 1 == s)
        {
            continue;
        }
        let x: Vec<f64> = samples
            .origin
            .iter()
            .zip(&idx)
            .map(|(o, &i)| o + h * i as f64)
            .collect();
        let mut sq = 0.0;
        for mu in 0..dims {
            let mut fwd = idx.clone();
            fwd[mu] += 1;
            let mut bwd = idx.clone();
            bwd[mu] -= 1;
            let lf = &samples.values[flatten(&fwd, &samples.shape)];
            let lb = &samples.values[flatten(&bwd, &samples.shape)];
            let a_mu = connection.potential(&x, mu);
            // C^c_{ba} A^b λ_c is minus the characteristic right-hand side.
            let coupling = cartan_rhs(g, &a_mu, lam);
            for a in 0..n {
                let d = (lf.0[a] - lb.0[a]) / (2.0 * h) - coupling.0[a];
                sq += d * d;
            }
        }
        worst = worst.max(sq.sqrt());
    }
    Ok(worst)
}

/// Radial derivative of the monopole profile `λ_r(r) = q/r²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonopoleCheck {
    pub numeric: f64,
    pub closed_form: f64,
    pub difference: f64,
}

/// Central difference of `q/r²` against `−2q/r³`.
pub fn monopole_radial_check(q: f64, r: f64, h: f64) -> Result<MonopoleCheck> {
    if !(h > 0.0) || !(r > h) {
        return Err(Error::InvalidInput(format!(
            "need r > h > 0, got r = {r}, h = {h}"
        )));
    }
    let profile = |r: f64| q / (r * r);
    let numeric = (profile(r + h) - profile(r - h)) / (2.0 * h);
    let closed_form = -2.0 * q / (r * r * r);
    Ok(MonopoleCheck {
        numeric,
        closed_form,
        difference: (numeric - closed_form).abs(),
    })
}

/// Coefficient `⟨λ, Ω(X,Y)⟩ / ‖λ‖²` of the non-holonomy tensor along `λ^♯`.
pub fn nonholonomy_coefficient(
    g: &LieAlgebra,
    lambda: &DualVector<f64>,
    omega_value: &LieVector<f64>,
) -> Result<f64> {
    g.check_dim(lambda.len())?;
    g.check_dim(omega_value.len())?;
    let norm_sq: f64 = lambda.0.iter().map(|v| v * v).sum();
    if norm_sq == 0.0 {
        return Err(Error::InvalidInput("λ must be nonzero".into()));
    }
    Ok(pairing(lambda, omega_value) / norm_sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn su2() -> LieAlgebra {
        LieAlgebra::preset("su2").unwrap()
    }

    fn lv(xs: &[f64]) -> LieVector<f64> {
        LieVector(xs.to_vec())
    }

    fn dv(xs: &[f64]) -> DualVector<f64> {
        DualVector(xs.to_vec())
    }

    #[test]
    fn rhs_examples() {
        let g = su2();
        assert_eq!(
            cartan_rhs(&g, &lv(&[0.0, 0.0, 1.0]), &dv(&[1.0, 0.0, 0.0])),
            dv(&[0.0, 1.0, 0.0])
        );
        assert_eq!(
            cartan_rhs(&g, &lv(&[0.0, 0.0, 1.0]), &dv(&[0.0, 1.0, 0.0])),
            dv(&[-1.0, 0.0, 0.0])
        );
        assert!(cartan_rhs(&g, &lv(&[1.0, 2.0, 3.0]), &dv(&[0.0; 3])).is_zero());
        let ab = LieAlgebra::abelian(3).unwrap();
        assert!(cartan_rhs(&ab, &lv(&[1.0, 2.0, 3.0]), &dv(&[4.0, 5.0, 6.0])).is_zero());
    }

    #[test]
    fn rhs_equals_coadjoint_matrix_action() {
        for name in ["su2", "sl2"] {
            let g = LieAlgebra::preset(name).unwrap();
            let w = lv(&[0.3, -1.2, 0.7]);
            let lam = dv(&[1.5, 0.25, -2.0]);
            let via_coad = g.coad_action(&w, &lam).unwrap();
            let rhs = cartan_rhs(&g, &w, &lam);
            for i in 0..3 {
                assert!((via_coad.0[i] - rhs.0[i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn so3_rhs_is_rigid_body_cross_product() {
        // dJ/ds + ω × J = 0 with J = λ and angular velocity ω = −A·v;
        // equivalently the right-hand side is (A·v) × J.
        let g = LieAlgebra::preset("so3").unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let mut w = [0.0; 3];
                w[i] = 1.0;
                let mut l = [0.0; 3];
                l[j] = 1.0;
                let cross = [
                    w[1] * l[2] - w[2] * l[1],
                    w[2] * l[0] - w[0] * l[2],
                    w[0] * l[1] - w[1] * l[0],
                ];
                let omega: Vec<f64> = w.iter().map(|v| -v).collect();
                let rhs = cartan_rhs(&g, &lv(&omega), &dv(&l));
                for k in 0..3 {
                    assert_eq!(rhs.0[k] + cross[k], 0.0);
                }
            }
        }
    }

    #[test]
    fn cfl_examples() {
        let g = su2();
        assert_eq!(cfl_bound(&g, &lv(&[0.0, 0.0, 1.0])), 1.0);
        assert_eq!(cfl_bound(&g, &lv(&[0.0, 0.0, 2.0])), 0.5);
        assert_eq!(
            cfl_bound(&LieAlgebra::abelian(2).unwrap(), &lv(&[5.0, 5.0])),
            f64::INFINITY
        );
    }

    fn integrator<'a>(
        g: &'a LieAlgebra,
        c: &'a Connection,
        scheme: Scheme,
        renormalize: bool,
    ) -> CharacteristicIntegrator<'a, Connection> {
        CharacteristicIntegrator {
            algebra: g,
            connection: c,
            velocity: vec![1.0],
            scheme,
            renormalize,
        }
    }

    #[test]
    fn euler_step_matches_hand_evaluation() {
        let g = su2();
        let c = Connection::constant(lv(&[0.0, 0.0, 1.0]));
        let s0 = CharacteristicState::new(vec![0.0], dv(&[1.0, 0.0, 0.0]));
        let s1 = integrator(&g, &c, Scheme::EulerPaper, false)
            .step(&s0, 0.1)
            .unwrap();
        assert_eq!(s1.lambda, dv(&[1.0, 0.1, 0.0]));
        assert_eq!(s1.x, vec![0.1]);
        assert_eq!(s1.s, 0.1);

        let r = integrator(&g, &c, Scheme::EulerPaper, true)
            .step(&s0, 0.1)
            .unwrap();
        let k = 1.01f64.sqrt();
        assert!((r.lambda.0[0] - 1.0 / k).abs() < 1e-15);
        assert!((r.lambda.0[1] - 0.1 / k).abs() < 1e-15);
        assert_eq!(r.lambda.0[2], 0.0);
    }

    #[test]
    fn abelian_step_is_identity() {
        let g = LieAlgebra::abelian(2).unwrap();
        let c = Connection::abelian_zero(2);
        let s0 = CharacteristicState::new(vec![0.0], dv(&[0.3, -0.7]));
        for scheme in [Scheme::EulerPaper, Scheme::Rk4] {
            let s1 = integrator(&g, &c, scheme, false).step(&s0, 10.0).unwrap();
            assert_eq!(s1.lambda, s0.lambda);
        }
    }

    #[test]
    fn cfl_gate_rejects_before_mutation() {
        let g = su2();
        let c = Connection::constant(lv(&[0.0, 0.0, 1.0]));
        let s0 = CharacteristicState::new(vec![0.0], dv(&[1.0, 0.0, 0.0]));
        let it = integrator(&g, &c, Scheme::Rk4, false);
        assert!(matches!(it.step(&s0, 1.0), Err(Error::CflViolation { .. })));
        assert!(matches!(it.step(&s0, 1.5), Err(Error::CflViolation { .. })));
        assert!(it.step(&s0, 0.999).is_ok());
    }

    #[test]
    fn non_finite_state_is_an_error() {
        let g = su2();
        let c = Connection::constant(lv(&[0.0, 0.0, 1.0]));
        let s0 = CharacteristicState::new(vec![0.0], dv(&[f64::NAN, 0.0, 0.0]));
        assert!(matches!(
            integrator(&g, &c, Scheme::Rk4, false).step(&s0, 0.1),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn rk4_quarter_turn() {
        let g = su2();
        let c = Connection::constant(lv(&[0.0, 0.0, 1.0]));
        let s0 = CharacteristicState::new(vec![0.0], dv(&[1.0, 0.0, 0.0]));
        let traj = integrator(&g, &c, Scheme::Rk4, false)
            .integrate(s0, 1e-3, PI / 2.0)
            .unwrap();
        let last = traj.last().unwrap();
        assert!((last.s - PI / 2.0).abs() < 1e-15);
        assert!((last.lambda.0[0]).abs() < 1e-10);
        assert!((last.lambda.0[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn exact_flow_examples() {
        let g = su2();
        let a = lv(&[0.0, 0.0, 1.0]);
        let l0 = dv(&[1.0, 0.0, 0.0]);
        assert_eq!(coadjoint_flow_exact(&g, &a, &l0, 0.0).unwrap(), l0);
        let q = coadjoint_flow_exact(&g, &a, &l0, PI / 2.0).unwrap();
        assert!(q.0[0].abs() < 1e-14 && (q.0[1] - 1.0).abs() < 1e-14 && q.0[2].abs() < 1e-14);
        let ab = LieAlgebra::abelian(3).unwrap();
        let l = dv(&[1.0, 2.0, 3.0]);
        assert_eq!(
            coadjoint_flow_exact(&ab, &lv(&[4.0, 5.0, 6.0]), &l, 17.0).unwrap(),
            l
        );
    }

    #[test]
    fn exact_flow_preserves_norm_for_compact_algebras() {
        let g = su2();
        let a = lv(&[0.4, -1.1, 0.8]);
        let l0 = dv(&[0.2, 0.9, -1.3]);
        for k in 0..50 {
            let s = 0.37 * k as f64;
            let l = coadjoint_flow_exact(&g, &a, &l0, s).unwrap();
            assert!((l.norm() - l0.norm()).abs() < 1e-13, "s = {s}");
        }
    }

    #[test]
    fn matrix_exp_of_nilpotent() {
        let m = vec![vec![0.0, 3.0], vec![0.0, 0.0]];
        assert_eq!(matrix_exp(&m), vec![vec![1.0, 3.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn euler_linear_in_lambda() {
        let g = su2();
        let c = Connection::constant(lv(&[0.3, 0.2, -0.5]));
        let it = integrator(&g, &c, Scheme::EulerPaper, false);
        let l1 = dv(&[1.0, -2.0, 0.5]);
        let l2 = dv(&[0.25, 0.75, -1.0]);
        let step = |l: &DualVector<f64>| {
            it.step(&CharacteristicState::new(vec![0.0], l.clone()), 0.05)
                .unwrap()
                .lambda
        };
        let sum = step(&l1.add(&l2));
        let parts = step(&l1).add(&step(&l2));
        for i in 0..3 {
            assert!((sum.0[i] - parts.0[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_examples() {
        let g = su2();
        let c = Connection::constant(lv(&[0.0, 0.0, 1.0]));
        let wrong = SampleGrid::sample(vec![0.0], vec![11], 0.1, |_| dv(&[1.0, 0.0, 0.0]));
        assert!((cartan_residual(&g, &c, &wrong, 0.1).unwrap() - 1.0).abs() < 1e-15);

        let ab = LieAlgebra::abelian(2).unwrap();
        let flat = Connection::abelian_zero(2);
        let constant = SampleGrid::sample(vec![0.0, 0.0], vec![5, 5], 0.2, |_| dv(&[2.0, -1.0]));
        assert_eq!(cartan_residual(&ab, &flat, &constant, 0.2).unwrap(), 0.0);

        let res = |h: f64| {
            let grid = SampleGrid::sample(vec![0.0], vec![21], h, |x| {
                dv(&[x[0].cos(), x[0].sin(), 0.0])
            });
            cartan_residual(&g, &c, &grid, h).unwrap()
        };
        let ratio = res(0.02) / res(0.01);
        assert!((3.6..=4.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn residual_rejects_degenerate_grids() {
        let g = su2();
        let c = Connection::constant(lv(&[0.0, 0.0, 1.0]));
        let tiny = SampleGrid::sample(vec![0.0], vec![2], 0.1, |_| dv(&[1.0, 0.0, 0.0]));
        assert!(cartan_residual(&g, &c, &tiny, 0.1).is_err());
        let ok = SampleGrid::sample(vec![0.0], vec![3], 0.1, |_| dv(&[1.0, 0.0, 0.0]));
        assert!(cartan_residual(&g, &c, &ok, 0.0).is_err());
        assert!(cartan_residual(&g, &c, &ok, 0.1).is_ok());
    }

    #[test]
    fn monopole_checks() {
        let z = monopole_radial_check(0.0, 2.0, 0.1).unwrap();
        assert_eq!((z.numeric, z.closed_form, z.difference), (0.0, 0.0, 0.0));
        assert_eq!(
            monopole_radial_check(1.0, 2.0, 0.01).unwrap().closed_form,
            -0.25
        );
        assert!(monopole_radial_check(1.0, 1.0, 1e-4).unwrap().difference <= 1e-7);
        assert!(monopole_radial_check(1.0, 0.1, 0.1).is_err());
        assert!(monopole_radial_check(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn monopole_connection_is_the_northern_patch_form() {
        let c = Connection::wu_yang_monopole(2.0, 3);
        let theta = PI / 3.0;
        let a = c.potential(&[1.0, theta, 0.0], 2);
        assert!((a.0[2] - 2.0 * (1.0 - theta.cos())).abs() < 1e-15);
        assert!(c.potential(&[1.0, theta, 0.0], 0).is_zero());
        assert!(c.potential(&[1.0, 0.0, 0.0], 2).is_zero());
    }

    #[test]
    fn nonholonomy_examples() {
        let g = su2();
        let e3 = lv(&[0.0, 0.0, 1.0]);
        assert_eq!(
            nonholonomy_coefficient(&g, &dv(&[1.0, 0.0, 0.0]), &e3).unwrap(),
            0.0
        );
        assert_eq!(
            nonholonomy_coefficient(&g, &dv(&[0.0, 0.0, 1.0]), &e3).unwrap(),
            1.0
        );
        assert_eq!(
            nonholonomy_coefficient(&g, &dv(&[0.0, 0.0, 2.0]), &e3).unwrap(),
            0.5
        );
        assert!(nonholonomy_coefficient(&g, &dv(&[0.0; 3]), &e3).is_err());
    }
}
