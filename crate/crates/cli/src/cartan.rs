use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Args;
use spencer_core::cartan_run::{run_cartan, CartanConfig};
use spencer_core::io::write_trajectory;
use spencer_core::Result;

use crate::output::emit;
use crate::Ctx;

#[derive(Debug, Args)]
pub struct CartanArgs {
    /// JSON characteristic configuration.
    #[arg(long)]
    config: PathBuf,
    /// Shrink ds below the CFL bound instead of rejecting the run.
    #[arg(long)]
    auto_ds: bool,
}

pub fn run(ctx: &Ctx, args: CartanArgs) -> Result<()> {
    let cfg = CartanConfig::from_json(&fs::read_to_string(&args.config)?)?;
    let result = run_cartan(&cfg, args.auto_ds)?;
    if let Some(dir) = ctx.out_dir()? {
        write_trajectory(
            BufWriter::new(File::create(dir.join("trajectory.csv"))?),
            &result.rows,
        )?;
    }
    let s = &result.summary;
    let mut text = format!(
        "algebra {}: {} steps of ds = {:e} (CFL bound {:e})\n",
        s.algebra, s.steps, s.ds, s.cfl_bound
    );
    text += &format!("final lambda: {:?}\n", s.final_lambda);
    text += &format!("norm drift: {:.3e}\n", s.norm_drift);
    text += &format!("max residual estimate: {:.3e}\n", s.max_residual);
    if let Some(dev) = s.exact_max_deviation {
        text += &format!("max deviation from exact flow: {dev:.3e}\n");
    }
    emit(ctx, "cartan_summary.json", s, &text)
}
