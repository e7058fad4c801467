use std::fmt::Display;
use std::fs;

use serde::Serialize;
use spencer_core::Result;

use crate::Ctx;

/// Prints `text` (or the JSON form with `--json`) and writes the JSON to
/// `<out>/<file>` when an output directory is set.
pub fn emit<T: Serialize>(ctx: &Ctx, file: &str, value: &T, text: &str) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    if let Some(dir) = ctx.out_dir()? {
        fs::write(dir.join(file), format!("{json}\n"))?;
    }
    if ctx.json {
        println!("{json}");
    } else {
        print!("{text}");
    }
    Ok(())
}

pub fn join<T: Display>(values: &[T]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
