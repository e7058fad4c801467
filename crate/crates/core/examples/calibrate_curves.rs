//! Finds the radius of each circle in the three-vortex preset whose initial
//! circulation equals a target value, by bisection.
//!
//! Usage: calibrate_curves [target...]

use spencer_core::euler2d::{MarkerCurve, SpectralSolver, VelocityInterpolator};
use spencer_core::invariants::circulation_with;
use spencer_core::simulation::EulerConfig;

const DEFAULT_TARGETS: [f64; 3] = [2.398220, -1.595092, 0.770553];

fn main() -> spencer_core::Result<()> {
    let targets: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("targets must be numbers"))
        .collect();
    let targets = if targets.is_empty() {
        DEFAULT_TARGETS.to_vec()
    } else {
        targets
    };

    let cfg = EulerConfig::preset("appendix_d")?;
    let solver = SpectralSolver::new(cfg.grid)?;
    let u = solver.velocity_from_vorticity(&cfg.initial_vorticity()?)?;
    let interp = VelocityInterpolator::new(&u);

    for (spec, target) in cfg.curves.iter().zip(targets) {
        let gamma = |r: f64| -> spencer_core::Result<f64> {
            let c = MarkerCurve::circle("probe", cfg.grid, (spec.cx, spec.cy), r, spec.m)?;
            Ok(circulation_with(&c, &interp, cfg.grid.length))
        };
        let (mut lo, mut hi) = (0.05, 0.85);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if gamma(mid)?.abs() < target.abs() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        println!(
            "center ({:.6}, {:.6}): radius {r:.6} gives {:.6} (target {target})",
            spec.cx,
            spec.cy,
            gamma(r)?
        );
    }
    Ok(())
}
