use num_complex::Complex64;

use super::fft::{signed_mode, Fft2};
use super::{GridSpec, VelocityField, VorticityField};
use crate::error::{Error, Result};

/// Fraction of `dx / max|u|` allowed per time step.
pub const ADVECTIVE_CFL: f64 = 0.5;

/// FFT plans and wavenumber tables for one grid.
#[derive(Clone, Debug)]
pub struct SpectralSolver {
    grid: GridSpec,
    fft: Fft2,
    /// Derivative wavenumbers per axis index; zero at the Nyquist mode.
    k_deriv: Vec<f64>,
    /// `|k|²` per flat mode, with the true Nyquist wavenumber.
    k_squared: Vec<f64>,
    /// 2/3-rule mask per flat mode.
    keep: Vec<bool>,
    /// Modes on a Nyquist row or column; they carry no velocity.
    nyquist: Vec<bool>,
    dealias: bool,
}

impl SpectralSolver {
    pub fn new(grid: GridSpec) -> Result<Self> {
        grid.validate()?;
        let n = grid.n;
        let k_full: Vec<f64> = (0..n).map(|i| grid.wavenumber(signed_mode(i, n))).collect();
        let k_deriv: Vec<f64> = (0..n)
            .map(|i| if i == n / 2 { 0.0 } else { k_full[i] })
            .collect();
        let cutoff = n as i64 / 3;
        let mut k_squared = vec![0.0; n * n];
        let mut keep = vec![false; n * n];
        let mut nyquist = vec![false; n * n];
        for iy in 0..n {
            for ix in 0..n {
                let idx = iy * n + ix;
                k_squared[idx] = k_full[ix] * k_full[ix] + k_full[iy] * k_full[iy];
                keep[idx] =
                    signed_mode(ix, n).abs() <= cutoff && signed_mode(iy, n).abs() <= cutoff;
                nyquist[idx] = ix == n / 2 || iy == n / 2;
            }
        }
        Ok(Self {
            grid,
            fft: Fft2::new(n),
            k_deriv,
            k_squared,
            keep,
            nyquist,
            dealias: true,
        })
    }

    /// Turns 2/3-rule truncation on or off (on by default).
    pub fn with_dealiasing(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn fft(&self) -> &Fft2 {
        &self.fft
    }

    /// Derivative wavenumbers `(k_x, k_y)` of flat mode `idx`.
    pub fn wavevector(&self, idx: usize) -> (f64, f64) {
        let n = self.grid.n;
        (self.k_deriv[idx % n], self.k_deriv[idx / n])
    }

    fn check_grid(&self, other: GridSpec) -> Result<()> {
        if other != self.grid {
            return Err(Error::InvalidInput(format!(
                "field grid {other:?} does not match solver grid {:?}",
                self.grid
            )));
        }
        Ok(())
    }

    fn velocity_spectra(&self, zeta_hat: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.grid.n;
        let mut ux = vec![Complex64::new(0.0, 0.0); n * n];
        let mut uy = vec![Complex64::new(0.0, 0.0); n * n];
        for idx in 0..n * n {
            let k2 = self.k_squared[idx];
            if k2 == 0.0 || self.nyquist[idx] {
                continue;
            }
            let psi = zeta_hat[idx] / k2;
            let (kx, ky) = self.wavevector(idx);
            // û_x = i k_y ψ̂, û_y = −i k_x ψ̂
            ux[idx] = Complex64::new(-ky * psi.im, ky * psi.re);
            uy[idx] = Complex64::new(kx * psi.im, -kx * psi.re);
        }
        (ux, uy)
    }

    /// Spectral Poisson inversion `ψ̂ = ζ̂/|k|²`, `û = (i k_y ψ̂, −i k_x ψ̂)`.
    /// The mean of `ζ` carries no velocity and is dropped.
    pub fn velocity_from_vorticity(&self, zeta: &VorticityField) -> Result<VelocityField> {
        self.check_grid(zeta.grid)?;
        let zeta_hat = self.fft.forward_real(&zeta.values);
        let mean = zeta_hat[0].re / self.grid.len() as f64;
        if mean.abs() > 1e-12 * (1.0 + zeta.max_abs()) {
            log::info!("vorticity mean {mean:e} excluded from the velocity inversion");
        }
        let (ux, uy) = self.velocity_spectra(&zeta_hat);
        Ok(VelocityField {
            grid: self.grid,
            ux: self.fft.inverse_real(ux),
            uy: self.fft.inverse_real(uy),
        })
    }

    /// `−∇·(u ζ) = −(u·∇)ζ`, truncated by the 2/3 rule on input and output.
    pub fn rhs_vorticity(&self, zeta: &VorticityField) -> Result<VorticityField> {
        self.check_grid(zeta.grid)?;
        Ok(VorticityField {
            grid: self.grid,
            values: self.rhs_values(&zeta.values),
        })
    }

    fn truncate(&self, spec: &mut [Complex64]) {
        if !self.dealias {
            return;
        }
        for (v, &keep) in spec.iter_mut().zip(&self.keep) {
            if !keep {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }

    fn rhs_values(&self, values: &[f64]) -> Vec<f64> {
        let mut zeta_hat = self.fft.forward_real(values);
        self.truncate(&mut zeta_hat);
        let (ux_hat, uy_hat) = self.velocity_spectra(&zeta_hat);
        let ux = self.fft.inverse_real(ux_hat);
        let uy = self.fft.inverse_real(uy_hat);
        let z = self.fft.inverse_real(zeta_hat);

        let fx: Vec<f64> = ux.iter().zip(&z).map(|(u, w)| u * w).collect();
        let fy: Vec<f64> = uy.iter().zip(&z).map(|(u, w)| u * w).collect();
        let fx_hat = self.fft.forward_real(&fx);
        let fy_hat = self.fft.forward_real(&fy);

        let mut out: Vec<Complex64> = (0..values.len())
            .map(|idx| {
                let (kx, ky) = self.wavevector(idx);
                // −(i k_x F̂_x + i k_y F̂_y)
                let div = fx_hat[idx] * kx + fy_hat[idx] * ky;
                Complex64::new(div.im, -div.re)
            })
            .collect();
        out[0] = Complex64::new(0.0, 0.0);
        self.truncate(&mut out);
        self.fft.inverse_real(out)
    }

    /// Largest admissible step `0.5·dx / max|u|` for the given velocity;
    /// infinite for a fluid at rest.
    pub fn advective_limit(&self, u: &VelocityField) -> f64 {
        let speed = u.max_speed();
        if speed == 0.0 {
            f64::INFINITY
        } else {
            ADVECTIVE_CFL * self.grid.spacing() / speed
        }
    }

    /// Classical RK4 step on [`rhs_vorticity`](Self::rhs_vorticity).
    pub fn rk4_step(&self, zeta: &VorticityField, dt: f64) -> Result<VorticityField> {
        let u = self.velocity_from_vorticity(zeta)?;
        self.rk4_step_with_velocity(zeta, &u, dt)
    }

    /// As [`rk4_step`](Self::rk4_step) with the velocity of `zeta` already
    /// computed, for callers that also need it.
    pub fn rk4_step_with_velocity(
        &self,
        zeta: &VorticityField,
        u: &VelocityField,
        dt: f64,
    ) -> Result<VorticityField> {
        self.check_grid(zeta.grid)?;
        if !dt.is_finite() || dt < 0.0 {
            return Err(Error::InvalidInput(format!(
                "time step must be finite and non-negative, got {dt}"
            )));
        }
        let limit = self.advective_limit(u);
        if dt > limit {
            return Err(Error::AdvectiveCfl { dt, limit });
        }
        if dt == 0.0 {
            return Ok(zeta.clone());
        }

        let w0 = &zeta.values;
        let stage = |base: &[f64], k: &[f64], h: f64| -> Vec<f64> {
            base.iter().zip(k).map(|(b, k)| b + h * k).collect()
        };
        let k1 = self.rhs_values(w0);
        let k2 = self.rhs_values(&stage(w0, &k1, 0.5 * dt));
        let k3 = self.rhs_values(&stage(w0, &k2, 0.5 * dt));
        let k4 = self.rhs_values(&stage(w0, &k3, dt));
        let values: Vec<f64> = (0..w0.len())
            .map(|i| w0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("vorticity after RK4 step".into()));
        }
        Ok(VorticityField {
            grid: self.grid,
            values,
        })
    }

    /// Observed temporal order `log₂(‖ζ_h − ζ_{h/2}‖ / ‖ζ_{h/2} − ζ_{h/4}‖)`
    /// at `t_end`, from RK4 runs with steps `dt`, `dt/2` and `dt/4`.
    pub fn observed_order(&self, zeta0: &VorticityField, t_end: f64, dt: f64) -> Result<f64> {
        let solve = |h: f64| -> Result<Vec<f64>> {
            let steps = (t_end / h).round().max(1.0) as usize;
            let h = t_end / steps as f64;
            let mut z = zeta0.clone();
            for _ in 0..steps {
                z = self.rk4_step(&z, h)?;
            }
            Ok(z.values)
        };
        let diff = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        };
        let (a, b, c) = (solve(dt)?, solve(0.5 * dt)?, solve(0.25 * dt)?);
        Ok((diff(&a, &b) / diff(&b, &c)).log2())
    }

    /// Spectral curl `∂_x u_y − ∂_y u_x`.
    pub fn curl(&self, u: &VelocityField) -> Result<VorticityField> {
        self.check_grid(u.grid)?;
        let ux = self.fft.forward_real(&u.ux);
        let uy = self.fft.forward_real(&u.uy);
        let spec: Vec<Complex64> = (0..ux.len())
            .map(|idx| {
                let (kx, ky) = self.wavevector(idx);
                let d = uy[idx] * kx - ux[idx] * ky;
                Complex64::new(-d.im, d.re)
            })
            .collect();
        Ok(VorticityField {
            grid: self.grid,
            values: self.fft.inverse_real(spec),
        })
    }
}
