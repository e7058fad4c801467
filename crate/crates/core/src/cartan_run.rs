//! JSON-configured integration of one characteristic, with per-sample
//! residual estimates and an exact-flow comparison where one exists.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cartan::{
    cartan_rhs, cfl_bound, coadjoint_flow_exact, CharacteristicIntegrator, CharacteristicState,
    Connection, ConnectionSampler, Scheme,
};
use crate::error::{Error, Result};
use crate::liealg::{DualVector, LieAlgebra, LieVector};

/// Step count above which a config is refused.
pub const MAX_STEPS: f64 = 1e8;

/// Fraction of the smallest CFL bound on the path used by `auto_ds`.
pub const AUTO_DS_FRACTION: f64 = 0.5;

/// Points at which the straight base path is probed for its CFL bound.
const PATH_PROBES: usize = 1024;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSpec {
    pub preset: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantParams {
    /// One potential per base direction.
    potentials: Option<Vec<Vec<f64>>>,
    /// Shorthand for a single potential on a one-dimensional base.
    a: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct MonopoleParams {
    #[serde(default = "unit_charge")]
    charge: f64,
    generator: Option<usize>,
}

fn unit_charge() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoParams {}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CartanConfig {
    /// Preset name or path to an algebra JSON document.
    pub algebra: String,
    pub connection: ConnectionSpec,
    pub lambda0: Vec<f64>,
    pub v: Vec<f64>,
    pub ds: f64,
    pub s_end: f64,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default)]
    pub renormalize: bool,
    /// Starting base point; zeros when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
}

fn default_scheme() -> Scheme {
    Scheme::Rk4
}

fn params<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    let v = if v.is_null() {
        Value::Object(Default::default())
    } else {
        v.clone()
    };
    Ok(serde_json::from_value(v)?)
}

fn finite(name: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(format!("{name} has non-finite entries")));
    }
    Ok(())
}

impl CartanConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        finite("lambda0", &cfg.lambda0)?;
        finite("v", &cfg.v)?;
        if let Some(x0) = &cfg.x0 {
            finite("x0", x0)?;
        }
        if !(cfg.ds.is_finite() && cfg.ds > 0.0) {
            return Err(Error::InvalidInput(format!(
                "ds must be positive, got {}",
                cfg.ds
            )));
        }
        if !(cfg.s_end.is_finite() && cfg.s_end >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "s_end must be finite and non-negative, got {}",
                cfg.s_end
            )));
        }
        Ok(cfg)
    }

    pub fn connection(&self, g: &LieAlgebra) -> Result<Connection> {
        let dim = g.dim();
        let conn = match self.connection.preset.as_str() {
            "constant" => {
                let p: ConstantParams = params(&self.connection.params)?;
                let potentials = match (p.potentials, p.a) {
                    (Some(list), None) => list,
                    (None, Some(a)) => vec![a],
                    _ => {
                        return Err(Error::InvalidInput(
                            "constant connection needs exactly one of `a` or `potentials`".into(),
                        ))
                    }
                };
                if potentials.is_empty() {
                    return Err(Error::InvalidInput(
                        "constant connection has no potentials".into(),
                    ));
                }
                for a in &potentials {
                    g.check_dim(a.len())?;
                    finite("connection potential", a)?;
                }
                Connection::Constant {
                    potentials: potentials.into_iter().map(LieVector).collect(),
                }
            }
            "abelian_zero" | "zero" => {
                let _: NoParams = params(&self.connection.params)?;
                Connection::abelian_zero(dim)
            }
            "wu_yang" | "wu_yang_monopole" => {
                let p: MonopoleParams = params(&self.connection.params)?;
                finite("charge", &[p.charge])?;
                let generator = p.generator.unwrap_or(dim - 1);
                if generator >= dim {
                    return Err(Error::InvalidInput(format!(
                        "generator {generator} out of range for a {dim}-dimensional algebra"
                    )));
                }
                Connection::WuYangMonopole {
                    charge: p.charge,
                    dim,
                    generator,
                }
            }
            other => {
                return Err(Error::InvalidInput(format!(
                "unknown connection preset '{other}' (expected constant, abelian_zero or wu_yang)"
            )))
            }
        };
        Ok(conn)
    }
}

/// One output row: `s, λ, ‖λ‖, residual estimate`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub s: f64,
    pub lambda: Vec<f64>,
    pub norm: f64,
    pub residual_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CartanSummary {
    pub algebra: String,
    pub ds: f64,
    pub steps: usize,
    pub cfl_bound: f64,
    pub final_lambda: Vec<f64>,
    /// `|‖λ_end‖ − ‖λ_0‖| / ‖λ_0‖` (absolute when `λ_0 = 0`).
    pub norm_drift: f64,
    pub max_residual: f64,
    /// Largest deviation from the exact flow, for connections that do not
    /// depend on the base point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_max_deviation: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct CartanRun {
    pub rows: Vec<TrajectoryRow>,
    pub summary: CartanSummary,
}

/// Smallest CFL bound along `x0 + s·v` for `s ∈ [0, s_end]`.
pub fn path_cfl_bound(g: &LieAlgebra, conn: &Connection, x0: &[f64], v: &[f64], s_end: f64) -> f64 {
    (0..=PATH_PROBES)
        .map(|i| {
            let s = s_end * i as f64 / PATH_PROBES as f64;
            let x: Vec<f64> = x0.iter().zip(v).map(|(a, b)| a + s * b).collect();
            cfl_bound(g, &conn.contract(&x, v, g.dim()))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Estimates `‖dλ/ds − rhs‖` at every sample: central differences inside,
/// one-sided at the ends.
fn residual_estimates<C: ConnectionSampler + ?Sized>(
    g: &LieAlgebra,
    conn: &C,
    v: &[f64],
    states: &[CharacteristicState],
) -> Vec<f64> {
    let n = states.len();
    (0..n)
        .map(|i| {
            if n < 2 {
                return 0.0;
            }
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n - 1));
            let span = states[hi].s - states[lo].s;
            let rhs = cartan_rhs(
                g,
                &conn.contract(&states[i].x, v, g.dim()),
                &states[i].lambda,
            );
            (0..g.dim())
                .map(|a| {
                    let d = (states[hi].lambda.0[a] - states[lo].lambda.0[a]) / span - rhs.0[a];
                    d * d
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// Runs `cfg`. With `auto_ds` an oversized step is reduced to half the
/// smallest CFL bound on the path instead of being rejected.
pub fn run_cartan(cfg: &CartanConfig, auto_ds: bool) -> Result<CartanRun> {
    let g = LieAlgebra::load(&cfg.algebra)?;
    let conn = cfg.connection(&g)?;
    g.check_dim(cfg.lambda0.len())?;
    let x0 = cfg.x0.clone().unwrap_or_else(|| vec![0.0; cfg.v.len()]);
    if x0.len() != cfg.v.len() {
        return Err(Error::DimensionMismatch {
            expected: cfg.v.len(),
            got: x0.len(),
        });
    }

    let bound = path_cfl_bound(&g, &conn, &x0, &cfg.v, cfg.s_end);
    let ds = if auto_ds && cfg.ds >= bound {
        AUTO_DS_FRACTION * bound
    } else {
        cfg.ds
    };
    if cfg.s_end / ds > MAX_STEPS {
        return Err(Error::InvalidInput(format!(
            "s_end/ds = {} exceeds the step limit {MAX_STEPS}",
            cfg.s_end / ds
        )));
    }

    let integrator = CharacteristicIntegrator {
        algebra: &g,
        connection: &conn,
        velocity: cfg.v.clone(),
        scheme: cfg.scheme,
        renormalize: cfg.renormalize,
    };
    let initial = CharacteristicState::new(x0, DualVector(cfg.lambda0.clone()));
    integrator.check(&initial)?;
    let states = if cfg.s_end == 0.0 {
        vec![initial]
    } else {
        integrator.integrate(initial, ds, cfg.s_end)?
    };

    let residuals = residual_estimates(&g, &conn, &cfg.v, &states);
    let exact_max_deviation = match conn.constant_contraction(&cfg.v) {
        Some(w) => {
            let mut worst: f64 = 0.0;
            for st in &states {
                let ex = coadjoint_flow_exact(&g, &w, &states[0].lambda, st.s - states[0].s)?;
                for (a, b) in ex.0.iter().zip(&st.lambda.0) {
                    worst = worst.max((a - b).abs());
                }
            }
            Some(worst)
        }
        None => None,
    };

    let rows: Vec<TrajectoryRow> = states
        .iter()
        .zip(&residuals)
        .map(|(st, &r)| TrajectoryRow {
            s: st.s,
            lambda: st.lambda.0.clone(),
            norm: st.lambda.norm(),
            residual_estimate: r,
        })
        .collect();
    let n0 = rows[0].norm;
    let n1 = rows[rows.len() - 1].norm;
    let summary = CartanSummary {
        algebra: g.name().to_string(),
        ds,
        steps: rows.len() - 1,
        cfl_bound: bound,
        final_lambda: rows[rows.len() - 1].lambda.clone(),
        norm_drift: if n0 > 0.0 { (n1 - n0).abs() / n0 } else { n1 },
        max_residual: residuals.iter().cloned().fold(0.0, f64::max),
        exact_max_deviation,
    };
    Ok(CartanRun { rows, summary })
}
