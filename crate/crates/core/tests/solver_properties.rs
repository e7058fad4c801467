use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use spencer_core::euler2d::{
    gaussian_vortices, mode_index, signed_mode, GaussianVortex, GridSpec, SpectralSolver,
    VorticityField,
};
use spencer_core::invariants::divergence_residual;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn vortex_strategy() -> impl Strategy<Value = Vec<GaussianVortex>> {
    proptest::collection::vec(
        (0.0..2.0 * PI, 0.0..2.0 * PI, -6.0f64..6.0, 0.3f64..1.0)
            .prop_map(|(x, y, alpha, sigma)| GaussianVortex { x, y, alpha, sigma }),
        1..4,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn velocity_is_divergence_free(vortices in vortex_strategy()) {
        let g = GridSpec::periodic(64).unwrap();
        let s = SpectralSolver::new(g).unwrap();
        let z = gaussian_vortices(g, &vortices).unwrap();
        let u = s.velocity_from_vorticity(&z).unwrap();
        prop_assert!(divergence_residual(&u) <= 1e-13);
    }

    #[test]
    fn spectra_are_conjugate_symmetric(vortices in vortex_strategy()) {
        let g = GridSpec::periodic(32).unwrap();
        let s = SpectralSolver::new(g).unwrap();
        let z = gaussian_vortices(g, &vortices).unwrap();
        let r = s.rhs_vorticity(&z).unwrap();
        for field in [&z.values, &r.values] {
            let spec = s.fft().forward_real(field);
            let scale = spec.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-300);
            for iy in 0..32 {
                for ix in 0..32 {
                    let a = spec[iy * 32 + ix];
                    let b = spec[mode_index(-signed_mode(iy, 32), 32) * 32 + mode_index(-signed_mode(ix, 32), 32)];
                    prop_assert!((a - b.conj()).norm() <= 1e-13 * scale);
                }
            }
            let mut back = spec.clone();
            s.fft().inverse(&mut back);
            let imag = back.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
            prop_assert!(imag <= 1e-13 * field.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-300));
        }
    }

    #[test]
    fn transform_round_trip(vortices in vortex_strategy()) {
        let g = GridSpec::periodic(64).unwrap();
        let s = SpectralSolver::new(g).unwrap();
        let z = gaussian_vortices(g, &vortices).unwrap();
        let back = s.fft().inverse_real(s.fft().forward_real(&z.values));
        prop_assert!(max_diff(&back, &z.values) <= 1e-13 * z.max_abs());
    }

    #[test]
    fn mean_mode_survives_a_step(vortices in vortex_strategy()) {
        let g = GridSpec::periodic(32).unwrap();
        let s = SpectralSolver::new(g).unwrap();
        let z = gaussian_vortices(g, &vortices).unwrap();
        let u = s.velocity_from_vorticity(&z).unwrap();
        let dt = 0.5 * s.advective_limit(&u);
        let next = s.rk4_step(&z, dt).unwrap();
        let before = s.fft().forward_real(&z.values)[0].re;
        let after = s.fft().forward_real(&next.values)[0].re;
        let scale = z.values.iter().map(|v| v.abs()).sum::<f64>();
        prop_assert!((after - before).abs() <= 1e-14 * scale);
    }
}

#[test]
fn complex_round_trip_of_random_spectrum() {
    let g = GridSpec::periodic(32).unwrap();
    let s = SpectralSolver::new(g).unwrap();
    let data: Vec<Complex64> = (0..g.len())
        .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos()))
        .collect();
    let mut work = data.clone();
    s.fft().forward(&mut work);
    s.fft().inverse(&mut work);
    let err = work
        .iter()
        .zip(&data)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(err <= 1e-13, "{err}");
}

#[test]
fn steady_shear_is_a_fixed_point() {
    let g = GridSpec::periodic(32).unwrap();
    let s = SpectralSolver::new(g).unwrap();
    let start = VorticityField::from_fn(g, |x, _| x.sin());
    let mut z = start.clone();
    for _ in 0..1000 {
        z = s.rk4_step(&z, 1e-3).unwrap();
    }
    assert!(max_diff(&z.values, &start.values) <= 1e-10);
}

#[test]
fn rk4_converges_at_fourth_order() {
    let g = GridSpec::periodic(64).unwrap();
    let s = SpectralSolver::new(g).unwrap();
    let pair = [
        GaussianVortex {
            x: 2.6,
            y: 3.1,
            alpha: 6.0,
            sigma: 0.5,
        },
        GaussianVortex {
            x: 3.8,
            y: 3.3,
            alpha: -4.0,
            sigma: 0.6,
        },
    ];
    let z0 = gaussian_vortices(g, &pair).unwrap();
    let p = s.observed_order(&z0, 0.5, 0.02).unwrap();
    assert!(p >= 3.7, "observed order {p}");
}
