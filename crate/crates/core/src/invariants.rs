//! Conserved quantities of the vorticity dynamics and their drift over a run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler2d::{
    Fft2, MarkerCurve, SpectralSolver, VelocityField, VelocityInterpolator, VorticityField,
};

/// Floor on the denominator of relative errors.
pub const RELATIVE_EPS: f64 = 1e-30;

/// `I₀ = Σ ζ·(L/N)²`.
pub fn total_vorticity(zeta: &VorticityField) -> f64 {
    zeta.values.iter().sum::<f64>() * zeta.grid.cell_area()
}

/// `I₂ = Σ ζ²·(L/N)²`.
pub fn enstrophy(zeta: &VorticityField) -> f64 {
    zeta.values.iter().map(|v| v * v).sum::<f64>() * zeta.grid.cell_area()
}

/// `Γ = Σ_m u(x_m)·(x_{m+1} − x_{m−1})/2` over the closed loop, with
/// minimal-image differences.
pub fn circulation_with(curve: &MarkerCurve, interp: &VelocityInterpolator, length: f64) -> f64 {
    let m = curve.points.len();
    let img = |d: f64| d - length * (d / length).round();
    (0..m)
        .map(|j| {
            let next = curve.points[(j + 1) % m];
            let prev = curve.points[(j + m - 1) % m];
            let (ux, uy) = interp.at(curve.points[j]);
            0.5 * (ux * img(next.0 - prev.0) + uy * img(next.1 - prev.1))
        })
        .sum()
}

/// Circulation of `u` around `curve`; see [`circulation_with`].
pub fn circulation(curve: &MarkerCurve, u: &VelocityField) -> f64 {
    circulation_with(curve, &VelocityInterpolator::new(u), u.grid.length)
}

/// `max_k |k·û(k)| / max_k |û(k)|`; zero for a zero field.
pub fn divergence_residual(u: &VelocityField) -> f64 {
    divergence_residual_with(u, &Fft2::new(u.grid.n))
}

pub fn divergence_residual_with(u: &VelocityField, fft: &Fft2) -> f64 {
    let n = u.grid.n;
    let ux = fft.forward_real(&u.ux);
    let uy = fft.forward_real(&u.uy);
    let mut div: f64 = 0.0;
    let mut size: f64 = 0.0;
    for idx in 0..n * n {
        let kx = u.grid.wavenumber(crate::euler2d::signed_mode(idx % n, n));
        let ky = u.grid.wavenumber(crate::euler2d::signed_mode(idx / n, n));
        div = div.max((ux[idx] * kx + uy[idx] * ky).norm());
        size = size.max((ux[idx].norm_sqr() + uy[idx].norm_sqr()).sqrt());
    }
    if size == 0.0 {
        0.0
    } else {
        div / size
    }
}

/// One sample of the invariant time series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub t: f64,
    #[serde(rename = "I0")]
    pub i0: f64,
    #[serde(rename = "I1")]
    pub i1: Vec<f64>,
    #[serde(rename = "I2")]
    pub i2: f64,
    pub div_max: f64,
}

impl InvariantRecord {
    /// Measures a state whose velocity and refined interpolator are already
    /// available.
    pub fn measure(
        t: f64,
        zeta: &VorticityField,
        u: &VelocityField,
        interp: &VelocityInterpolator,
        curves: &[MarkerCurve],
        fft: &Fft2,
    ) -> Self {
        Self {
            t,
            i0: total_vorticity(zeta),
            i1: curves
                .iter()
                .map(|c| circulation_with(c, interp, zeta.grid.length))
                .collect(),
            i2: enstrophy(zeta),
            div_max: divergence_residual_with(u, fft),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite()
            && self.i0.is_finite()
            && self.i2.is_finite()
            && self.div_max.is_finite()
            && self.i1.iter().all(|v| v.is_finite())
    }
}

/// `(I₀, I₁, I₂, div_max)` of `ζ` at time zero.
pub fn phi_triple(
    solver: &SpectralSolver,
    zeta: &VorticityField,
    curves: &[MarkerCurve],
) -> Result<InvariantRecord> {
    let u = solver.velocity_from_vorticity(zeta)?;
    let interp = VelocityInterpolator::new(&u);
    Ok(InvariantRecord::measure(
        0.0,
        zeta,
        &u,
        &interp,
        curves,
        solver.fft(),
    ))
}

/// Per-cell count of thresholds at or below `|ζ|`.
#[derive(Clone, Debug, PartialEq)]
pub struct StrataGrid {
    pub n: usize,
    pub labels: Vec<i32>,
}

pub fn strata_classify(zeta: &VorticityField, thresholds: &[f64]) -> Result<StrataGrid> {
    if thresholds.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidInput(
            "thresholds must be finite and non-negative".into(),
        ));
    }
    if thresholds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "thresholds must be strictly ascending".into(),
        ));
    }
    let labels = zeta
        .values
        .iter()
        .map(|v| thresholds.partition_point(|&t| t <= v.abs()) as i32)
        .collect();
    Ok(StrataGrid {
        n: zeta.grid.n,
        labels,
    })
}

/// `|last − first| / max(|first|, ε)`.
pub fn relative_change(first: f64, last: f64) -> f64 {
    (last - first).abs() / first.abs().max(RELATIVE_EPS)
}

/// Relative drift of each invariant between the first and last records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    #[serde(rename = "I0")]
    pub i0: f64,
    #[serde(rename = "I2")]
    pub i2: f64,
    #[serde(rename = "I1")]
    pub i1: Vec<f64>,
    /// Largest divergence residual seen anywhere in the series.
    pub div_max: f64,
    pub samples: usize,
    pub t_final: f64,
}

pub fn conservation_report(series: &[InvariantRecord]) -> Result<ConservationReport> {
    let (first, last) = match series {
        [first, .., last] => (first, last),
        _ => {
            return Err(Error::InvalidInput(format!(
                "a conservation report needs at least 2 records, got {}",
                series.len()
            )))
        }
    };
    if series.iter().any(|r| r.i1.len() != first.i1.len()) {
        return Err(Error::InvalidInput(
            "records disagree on the number of curves".into(),
        ));
    }
    Ok(ConservationReport {
        i0: relative_change(first.i0, last.i0),
        i2: relative_change(first.i2, last.i2),
        i1: first
            .i1
            .iter()
            .zip(&last.i1)
            .map(|(a, b)| relative_change(*a, *b))
            .collect(),
        div_max: series.iter().map(|r| r.div_max).fold(0.0, f64::max),
        samples: series.len(),
        t_final: last.t,
    })
}
