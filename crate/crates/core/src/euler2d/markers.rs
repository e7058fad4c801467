use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fft::{mode_index, signed_mode, Fft2};
use super::{GridSpec, VelocityField};
use crate::error::{Error, Result};

/// Spectral refinement factor applied before bilinear interpolation.
pub const REFINEMENT: usize = 4;

/// Fewest markers accepted on a closed curve.
pub const MIN_MARKERS: usize = 8;

/// Closed material loop of marker points, kept inside `[0, L)²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkerCurve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl MarkerCurve {
    pub fn new(label: impl Into<String>, grid: GridSpec, points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < MIN_MARKERS {
            return Err(Error::InvalidInput(format!(
                "a marker curve needs at least {MIN_MARKERS} points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::NonFinite("marker positions".into()));
        }
        let points = points
            .into_iter()
            .map(|(x, y)| (grid.wrap(x), grid.wrap(y)))
            .collect();
        Ok(Self {
            label: label.into(),
            points,
        })
    }

    /// `m` equally spaced points, counter-clockwise, on a circle.
    pub fn circle(
        label: impl Into<String>,
        grid: GridSpec,
        center: (f64, f64),
        radius: f64,
        m: usize,
    ) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "curve radius must be positive, got {radius}"
            )));
        }
        let points = (0..m)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / m as f64;
                (center.0 + radius * th.cos(), center.1 + radius * th.sin())
            })
            .collect();
        Self::new(label, grid, points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same loop traversed the other way.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self {
            label: self.label.clone(),
            points,
        }
    }
}

/// Velocity on the `REFINEMENT·N` grid, sampled bilinearly.
#[derive(Clone, Debug)]
pub struct VelocityInterpolator {
    n: usize,
    length: f64,
    ux: Vec<f64>,
    uy: Vec<f64>,
}

/// Zero-pads an `n × n` spectrum into an `m × m` one. A Nyquist coefficient is
/// split evenly between `±n/2` so the refined field stays real.
fn pad_spectrum(spec: &[Complex64], n: usize, m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    let half = n as i64 / 2;
    let targets = |i: usize| -> Vec<(i64, f64)> {
        let s = signed_mode(i, n);
        if s == -half {
            vec![(-half, 0.5), (half, 0.5)]
        } else {
            vec![(s, 1.0)]
        }
    };
    for iy in 0..n {
        for ix in 0..n {
            let v = spec[iy * n + ix];
            if v == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &(my, wy) in &targets(iy) {
                for &(mx, wx) in &targets(ix) {
                    out[mode_index(my, m) * m + mode_index(mx, m)] += v * (wx * wy);
                }
            }
        }
    }
    out
}

impl VelocityInterpolator {
    pub fn new(u: &VelocityField) -> Self {
        let n = u.grid.n;
        Self::with_plans(u, &Fft2::new(n), &Fft2::new(REFINEMENT * n))
    }

    /// As [`new`](Self::new) reusing FFT plans for the coarse and refined grids.
    pub fn with_plans(u: &VelocityField, coarse: &Fft2, fine: &Fft2) -> Self {
        let n = u.grid.n;
        let m = REFINEMENT * n;
        assert_eq!(coarse.n(), n, "coarse plan does not match the field");
        assert_eq!(fine.n(), m, "fine plan does not match the refined grid");
        let scale = (REFINEMENT * REFINEMENT) as f64;
        let refine = |c: &[f64]| -> Vec<f64> {
            let mut spec = pad_spectrum(&coarse.forward_real(c), n, m);
            for v in spec.iter_mut() {
                *v *= scale;
            }
            fine.inverse_real(spec)
        };
        let (ux, uy) = rayon::join(|| refine(&u.ux), || refine(&u.uy));
        Self {
            n: m,
            length: u.grid.length,
            ux,
            uy,
        }
    }

    /// Refined grid size per axis.
    pub fn resolution(&self) -> usize {
        self.n
    }

    /// Bilinear sample at `p`, wrapped periodically.
    pub fn at(&self, p: (f64, f64)) -> (f64, f64) {
        let h = self.length / self.n as f64;
        let sx = (p.0 / h).rem_euclid(self.n as f64);
        let sy = (p.1 / h).rem_euclid(self.n as f64);
        let (i0, j0) = (sx.floor(), sy.floor());
        let (fx, fy) = (sx - i0, sy - j0);
        let i0 = (i0 as usize) % self.n;
        let j0 = (j0 as usize) % self.n;
        let i1 = (i0 + 1) % self.n;
        let j1 = (j0 + 1) % self.n;
        let w = [
            (1.0 - fx) * (1.0 - fy),
            fx * (1.0 - fy),
            (1.0 - fx) * fy,
            fx * fy,
        ];
        let idx = [
            j0 * self.n + i0,
            j0 * self.n + i1,
            j1 * self.n + i0,
            j1 * self.n + i1,
        ];
        let mut out = (0.0, 0.0);
        for (wk, k) in w.iter().zip(idx) {
            out.0 += wk * self.ux[k];
            out.1 += wk * self.uy[k];
        }
        out
    }
}

/// One-off sample of `u` at `p`; builds the refined field on every call.
pub fn interpolate_velocity(u: &VelocityField, p: (f64, f64)) -> Result<(f64, f64)> {
    if !p.0.is_finite() || !p.1.is_finite() {
        return Err(Error::NonFinite("interpolation point".into()));
    }
    Ok(VelocityInterpolator::new(u).at(p))
}

fn rk4_point(interp: &VelocityInterpolator, p: (f64, f64), dt: f64) -> (f64, f64) {
    let shift = |p: (f64, f64), k: (f64, f64), h: f64| (p.0 + h * k.0, p.1 + h * k.1);
    let k1 = interp.at(p);
    let k2 = interp.at(shift(p, k1, 0.5 * dt));
    let k3 = interp.at(shift(p, k2, 0.5 * dt));
    let k4 = interp.at(shift(p, k3, dt));
    (
        p.0 + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        p.1 + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    )
}

/// Moves every marker by one RK4 step in the frozen velocity `interp`.
pub fn advect_markers(
    curves: &[MarkerCurve],
    interp: &VelocityInterpolator,
    dt: f64,
) -> Vec<MarkerCurve> {
    let length = interp.length;
    let wrap = |v: f64| {
        let w = v.rem_euclid(length);
        if w >= length {
            0.0
        } else {
            w
        }
    };
    curves
        .iter()
        .map(|c| MarkerCurve {
            label: c.label.clone(),
            points: c
                .points
                .par_iter()
                .map(|&p| {
                    let q = rk4_point(interp, p, dt);
                    (wrap(q.0), wrap(q.1))
                })
                .collect(),
        })
        .collect()
}
