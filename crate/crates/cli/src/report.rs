use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;
use spencer_core::invariants::{conservation_report, ConservationReport, InvariantRecord};
use spencer_core::io::read_series;
use spencer_core::Result;

use crate::output::emit;
use crate::Ctx;

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Invariant series written by `euler`.
    #[arg(long)]
    series: PathBuf,
}

/// Conservation report together with the curve labels it refers to.
#[derive(Clone, Debug, Serialize)]
pub struct LabelledReport {
    pub labels: Vec<String>,
    #[serde(flatten)]
    pub report: ConservationReport,
}

impl LabelledReport {
    pub fn from_series(labels: &[String], series: &[InvariantRecord]) -> Result<Self> {
        Ok(Self {
            labels: labels.to_vec(),
            report: conservation_report(series)?,
        })
    }

    pub fn render(&self) -> String {
        let r = &self.report;
        let mut text = format!(
            "conservation report: {} samples, t_final = {}\n",
            r.samples, r.t_final
        );
        text += &format!("  {:<24} {:.6e}\n", "I0 relative change", r.i0);
        text += &format!("  {:<24} {:.6e}\n", "I2 relative change", r.i2);
        for (label, v) in self.labels.iter().zip(&r.i1) {
            text += &format!("  {:<24} {:.6e}\n", format!("circ[{label}] relative"), v);
        }
        text += &format!("  {:<24} {:.6e}\n", "max divergence residual", r.div_max);
        text
    }
}

pub fn run(ctx: &Ctx, args: ReportArgs) -> Result<()> {
    let (labels, series) = read_series(BufReader::new(File::open(&args.series)?))?;
    let report = LabelledReport::from_series(&labels, &series)?;
    emit(ctx, "report.json", &report, &report.render())
}
