//! Time loop for vorticity plus material curves, driven by a JSON run config.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler2d::{
    advect_markers, gaussian_vortices, Fft2, GaussianVortex, GridSpec, MarkerCurve, SpectralSolver,
    VelocityField, VelocityInterpolator, VorticityField, REFINEMENT,
};
use crate::invariants::InvariantRecord;

/// Fraction of the initial advective limit used for `"dt": "auto"`.
pub const AUTO_DT_FRACTION: f64 = 0.5;

/// Upper bound on the number of steps a config may request.
pub const MAX_STEPS: usize = 10_000_000;

/// `dt` is either a number or the string `"auto"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeStep {
    Fixed(f64),
    Auto(AutoTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl Default for TimeStep {
    fn default() -> Self {
        TimeStep::Auto(AutoTag::Auto)
    }
}

/// Circle of `M` markers; `label` defaults to `c<index>`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
    #[serde(rename = "M")]
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerConfig {
    pub grid: GridSpec,
    #[serde(default)]
    pub dt: TimeStep,
    pub t_end: f64,
    #[serde(default = "default_true")]
    pub dealias: bool,
    #[serde(default)]
    pub vortices: Vec<GaussianVortex>,
    #[serde(default)]
    pub curves: Vec<CurveSpec>,
    #[serde(default = "default_one")]
    pub output_every: usize,
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

const PRESET_GAUSSIAN: &str = include_str!("../data/euler/gaussian.json");
const PRESET_APPENDIX_D: &str = include_str!("../data/euler/appendix_d.json");

/// Names accepted by [`EulerConfig::preset`].
pub const EULER_PRESETS: [&str; 2] = ["gaussian", "appendix_d"];

impl EulerConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "gaussian" => Self::from_json(PRESET_GAUSSIAN),
            "appendix_d" => Self::from_json(PRESET_APPENDIX_D),
            other => Err(Error::InvalidInput(format!(
                "unknown euler preset '{other}' (expected one of {})",
                EULER_PRESETS.join(", ")
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "t_end must be finite and non-negative, got {}",
                self.t_end
            )));
        }
        if let TimeStep::Fixed(dt) = self.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "dt must be positive, got {dt}"
                )));
            }
            if self.t_end / dt > MAX_STEPS as f64 {
                return Err(Error::InvalidInput(format!(
                    "t_end/dt exceeds {MAX_STEPS} steps"
                )));
            }
        }
        if self.output_every == 0 {
            return Err(Error::InvalidInput(
                "output_every must be at least 1".into(),
            ));
        }
        self.curve_labels()?;
        Ok(())
    }

    pub fn curve_labels(&self) -> Result<Vec<String>> {
        let labels: Vec<String> = self
            .curves
            .iter()
            .enumerate()
            .map(|(i, c)| c.label.clone().unwrap_or_else(|| format!("c{i}")))
            .collect();
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty()
                || !l
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return Err(Error::InvalidInput(format!(
                    "curve label '{l}' must be non-empty ASCII letters, digits, '_' or '-'"
                )));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidInput(format!("duplicate curve label '{l}'")));
            }
        }
        Ok(labels)
    }

    pub fn initial_vorticity(&self) -> Result<VorticityField> {
        gaussian_vortices(self.grid, &self.vortices)
    }

    pub fn initial_curves(&self) -> Result<Vec<MarkerCurve>> {
        self.curve_labels()?
            .into_iter()
            .zip(&self.curves)
            .map(|(label, c)| MarkerCurve::circle(label, self.grid, (c.cx, c.cy), c.radius, c.m))
            .collect()
    }
}

/// State handed to the observer at every recorded sample.
#[derive(Debug)]
pub struct Snapshot<'a> {
    pub step: usize,
    pub zeta: &'a VorticityField,
    pub velocity: &'a VelocityField,
    pub curves: &'a [MarkerCurve],
    pub record: &'a InvariantRecord,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub dt: f64,
    pub steps: usize,
    pub labels: Vec<String>,
    pub series: Vec<InvariantRecord>,
    pub final_vorticity: VorticityField,
    pub final_curves: Vec<MarkerCurve>,
}

/// Resolves the step size and count so that `steps · dt = t_end`.
pub fn plan_steps(
    cfg: &EulerConfig,
    u0: &VelocityField,
    solver: &SpectralSolver,
) -> Result<(f64, usize)> {
    if cfg.t_end == 0.0 {
        return Ok((0.0, 0));
    }
    let target = match cfg.dt {
        TimeStep::Fixed(dt) => dt,
        TimeStep::Auto(_) => {
            let limit = solver.advective_limit(u0);
            if limit.is_finite() {
                AUTO_DT_FRACTION * limit
            } else {
                cfg.t_end
            }
        }
    };
    let steps = (cfg.t_end / target).ceil().max(1.0);
    if steps > MAX_STEPS as f64 {
        return Err(Error::InvalidInput(format!(
            "run would need more than {MAX_STEPS} steps"
        )));
    }
    let steps = steps as usize;
    Ok((cfg.t_end / steps as f64, steps))
}

/// Integrates `cfg` to `t_end`, recording invariants every `output_every`
/// steps and at the end. Markers ride the velocity of the step start.
pub fn run(
    cfg: &EulerConfig,
    mut observe: impl FnMut(&Snapshot) -> Result<()>,
) -> Result<RunSummary> {
    cfg.validate()?;
    let solver = SpectralSolver::new(cfg.grid)?.with_dealiasing(cfg.dealias);
    let fine = Fft2::new(REFINEMENT * cfg.grid.n);
    let labels = cfg.curve_labels()?;

    let mut zeta = cfg.initial_vorticity()?;
    let mut curves = cfg.initial_curves()?;
    let mut u = solver.velocity_from_vorticity(&zeta)?;
    let mut interp = VelocityInterpolator::with_plans(&u, solver.fft(), &fine);
    let (dt, steps) = plan_steps(cfg, &u, &solver)?;
    log::info!("euler run: N={} dt={dt:e} steps={steps}", cfg.grid.n);

    let mut series = Vec::new();
    let mut record = |step: usize,
                      zeta: &VorticityField,
                      u: &VelocityField,
                      interp: &VelocityInterpolator,
                      curves: &[MarkerCurve],
                      series: &mut Vec<InvariantRecord>|
     -> Result<()> {
        let rec = InvariantRecord::measure(step as f64 * dt, zeta, u, interp, curves, solver.fft());
        if !rec.is_finite() {
            return Err(Error::NonFinite(format!("invariants at step {step}")));
        }
        observe(&Snapshot {
            step,
            zeta,
            velocity: u,
            curves,
            record: &rec,
        })?;
        series.push(rec);
        Ok(())
    };
    record(0, &zeta, &u, &interp, &curves, &mut series)?;

    for step in 1..=steps {
        let next = solver.rk4_step_with_velocity(&zeta, &u, dt)?;
        curves = advect_markers(&curves, &interp, dt);
        zeta = next;
        u = solver.velocity_from_vorticity(&zeta)?;
        interp = VelocityInterpolator::with_plans(&u, solver.fft(), &fine);
        if step % cfg.output_every == 0 || step == steps {
            record(step, &zeta, &u, &interp, &curves, &mut series)?;
        }
    }

    Ok(RunSummary {
        dt,
        steps,
        labels,
        series,
        final_vorticity: zeta,
        final_curves: curves,
    })
}
