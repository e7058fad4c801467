//! Pseudo-spectral 2D incompressible Euler on the periodic square `[0, L)²`.
//!
//! Conventions: fields are row-major with `values[iy * n + ix]` sampled at
//! `(ix·L/n, iy·L/n)`. Vorticity `ζ = ∂_x u_y − ∂_y u_x`, streamfunction
//! `u = (∂_y ψ, −∂_x ψ)`, so `ζ = −Δψ`. The nonlinear term is evaluated in
//! flux form `∇·(u ζ)` with 2/3-rule truncation.

mod fft;
mod markers;
mod solver;

pub use fft::{mode_index, signed_mode, Fft2};
pub use markers::{
    advect_markers, interpolate_velocity, MarkerCurve, VelocityInterpolator, MIN_MARKERS,
    REFINEMENT,
};
pub use solver::{SpectralSolver, ADVECTIVE_CFL};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest supported grid.
pub const MIN_GRID: usize = 16;
/// Largest supported grid; keeps untrusted configs from requesting absurd
/// allocations.
pub const MAX_GRID: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L", default = "default_length")]
    pub length: f64,
}

fn default_length() -> f64 {
    2.0 * PI
}

impl GridSpec {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        let g = Self { n, length };
        g.validate()?;
        Ok(g)
    }

    /// `n × n` on `[0, 2π)²`.
    pub fn periodic(n: usize) -> Result<Self> {
        Self::new(n, 2.0 * PI)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_power_of_two() || self.n < MIN_GRID || self.n > MAX_GRID {
            return Err(Error::InvalidInput(format!(
                "grid size must be a power of two in {MIN_GRID}..={MAX_GRID}, got {}",
                self.n
            )));
        }
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "domain length must be positive, got {}",
                self.length
            )));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing() * self.spacing()
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Physical coordinates of flat index `k`.
    pub fn point(&self, k: usize) -> (f64, f64) {
        let h = self.spacing();
        ((k % self.n) as f64 * h, (k / self.n) as f64 * h)
    }

    /// Wavenumber `2π m / L` of signed mode `m`.
    pub fn wavenumber(&self, m: i64) -> f64 {
        2.0 * PI * m as f64 / self.length
    }

    /// Coordinate wrapped into `[0, L)`.
    pub fn wrap(&self, v: f64) -> f64 {
        let w = v.rem_euclid(self.length);
        // rem_euclid can round up to exactly L
        if w >= self.length {
            0.0
        } else {
            w
        }
    }

    /// Minimal-image difference `a − b` on the circle of length `L`.
    pub fn min_image(&self, d: f64) -> f64 {
        d - self.length * (d / self.length).round()
    }
}

/// Scalar vorticity field `ζ`.
#[derive(Clone, Debug, PartialEq)]
pub struct VorticityField {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl VorticityField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("vorticity field".into()));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x, y)` at the grid nodes.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                f(x, y)
            })
            .collect();
        Self { grid, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Velocity components on the same grid as the vorticity they came from.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityField {
    pub grid: GridSpec,
    pub ux: Vec<f64>,
    pub uy: Vec<f64>,
}

impl VelocityField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            ux: vec![0.0; grid.len()],
            uy: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let (ux, uy) = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                f(x, y)
            })
            .unzip();
        Self { grid, ux, uy }
    }

    /// `max |u|` over grid nodes.
    pub fn max_speed(&self) -> f64 {
        self.ux
            .iter()
            .zip(&self.uy)
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }
}

/// One Gaussian vortex `α exp(−|x − c|² / 2σ²)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianVortex {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    pub sigma: f64,
}

/// `ζ₀ = Σ α_i exp(−((x−x_i)² + (y−y_i)²) / 2σ_i²)` with minimal-image
/// distances on the torus.
pub fn gaussian_vorticity(
    grid: GridSpec,
    centers: &[(f64, f64)],
    alphas: &[f64],
    sigmas: &[f64],
) -> Result<VorticityField> {
    if centers.len() != alphas.len() || centers.len() != sigmas.len() {
        return Err(Error::InvalidInput(format!(
            "vortex lists differ in length: {} centers, {} alphas, {} sigmas",
            centers.len(),
            alphas.len(),
            sigmas.len()
        )));
    }
    let vortices: Vec<GaussianVortex> = centers
        .iter()
        .zip(alphas)
        .zip(sigmas)
        .map(|((&(x, y), &alpha), &sigma)| GaussianVortex { x, y, alpha, sigma })
        .collect();
    gaussian_vortices(grid, &vortices)
}

pub fn gaussian_vortices(grid: GridSpec, vortices: &[GaussianVortex]) -> Result<VorticityField> {
    grid.validate()?;
    for v in vortices {
        if !(v.sigma > 0.0 && v.sigma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "vortex width must be positive, got {}",
                v.sigma
            )));
        }
        if !(v.x.is_finite() && v.y.is_finite() && v.alpha.is_finite()) {
            return Err(Error::NonFinite("vortex parameters".into()));
        }
    }
    Ok(VorticityField::from_fn(grid, |x, y| {
        vortices
            .iter()
            .map(|v| {
                let dx = grid.min_image(x - v.x);
                let dy = grid.min_image(y - v.y);
                v.alpha * (-(dx * dx + dy * dy) / (2.0 * v.sigma * v.sigma)).exp()
            })
            .sum()
    }))
}
