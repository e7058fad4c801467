//! File formats: raw field dumps with a JSON sidecar, invariant and
//! trajectory CSV series, and PGM heatmaps.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cartan_run::TrajectoryRow;
use crate::error::{Error, Result};
use crate::euler2d::{GridSpec, MAX_GRID};
use crate::invariants::InvariantRecord;

/// Payload element type of a field dump.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dtype {
    #[default]
    F64,
    I32,
}

impl Dtype {
    pub fn width(self) -> usize {
        match self {
            Dtype::F64 => 8,
            Dtype::I32 => 4,
        }
    }
}

/// `{N, L, t, quantity, dtype}` describing a row-major little-endian payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSidecar {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub t: f64,
    pub quantity: String,
    #[serde(default)]
    pub dtype: Dtype,
}

impl FieldSidecar {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        if s.n == 0 || s.n > MAX_GRID {
            return Err(Error::InvalidInput(format!(
                "sidecar N = {} out of range",
                s.n
            )));
        }
        if !(s.length.is_finite() && s.length > 0.0) || !s.t.is_finite() {
            return Err(Error::InvalidInput(
                "sidecar L must be positive and t finite".into(),
            ));
        }
        Ok(s)
    }

    pub fn payload_len(&self) -> usize {
        self.n * self.n * self.dtype.width()
    }
}

/// Decoded field values.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldData {
    F64(Vec<f64>),
    I32(Vec<i32>),
}

pub fn encode_f64(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

pub fn encode_i32(values: &[i32]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// Decodes a payload against its sidecar, checking the byte count.
pub fn decode_payload(sidecar: &FieldSidecar, bytes: &[u8]) -> Result<FieldData> {
    if bytes.len() != sidecar.payload_len() {
        return Err(Error::InvalidInput(format!(
            "payload has {} bytes, sidecar implies {}",
            bytes.len(),
            sidecar.payload_len()
        )));
    }
    Ok(match sidecar.dtype {
        Dtype::F64 => FieldData::F64(
            bytes
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect(),
        ),
        Dtype::I32 => FieldData::I32(
            bytes
                .chunks_exact(4)
                .map(|c| i32::from_le_bytes(c.try_into().expect("4-byte chunk")))
                .collect(),
        ),
    })
}

fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

/// Writes `<stem>.bin` and `<stem>.json`; returns the payload path.
pub fn write_field(
    stem: &Path,
    grid: GridSpec,
    t: f64,
    quantity: &str,
    data: &FieldData,
) -> Result<PathBuf> {
    let (dtype, bytes, len) = match data {
        FieldData::F64(v) => (Dtype::F64, encode_f64(v), v.len()),
        FieldData::I32(v) => (Dtype::I32, encode_i32(v), v.len()),
    };
    if len != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: len,
        });
    }
    let sidecar = FieldSidecar {
        n: grid.n,
        length: grid.length,
        t,
        quantity: quantity.to_string(),
        dtype,
    };
    let bin = stem.with_extension("bin");
    fs::write(&bin, bytes)?;
    fs::write(
        sidecar_path(&bin),
        serde_json::to_string_pretty(&sidecar)? + "\n",
    )?;
    Ok(bin)
}

pub fn read_field(bin: &Path) -> Result<(FieldSidecar, FieldData)> {
    let sidecar = FieldSidecar::from_json(&fs::read_to_string(sidecar_path(bin))?)?;
    let mut bytes = Vec::new();
    fs::File::open(bin)?.read_to_end(&mut bytes)?;
    let data = decode_payload(&sidecar, &bytes)?;
    Ok((sidecar, data))
}

/// Round-trip float formatting shared by every CSV writer.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

const SERIES_FIXED: [&str; 4] = ["t", "I0", "I2", "div_max"];
const CIRC_PREFIX: &str = "circ_";

/// Writes `t,I0,I2,div_max,circ_<label>...` rows.
pub fn write_series<W: Write>(out: W, labels: &[String], series: &[InvariantRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = SERIES_FIXED
        .iter()
        .map(|s| s.to_string())
        .chain(labels.iter().map(|l| format!("{CIRC_PREFIX}{l}")))
        .collect();
    w.write_record(&header)?;
    for r in series {
        if r.i1.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: labels.len(),
                got: r.i1.len(),
            });
        }
        let row: Vec<String> = [r.t, r.i0, r.i2, r.div_max]
            .iter()
            .chain(&r.i1)
            .map(|&v| fmt_f64(v))
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a series written by [`write_series`]; returns curve labels and records.
pub fn read_series<R: Read>(input: R) -> Result<(Vec<String>, Vec<InvariantRecord>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers()?.clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < SERIES_FIXED.len() || cols[..SERIES_FIXED.len()] != SERIES_FIXED {
        return Err(Error::Parse(format!(
            "series header must start with {}, got {}",
            SERIES_FIXED.join(","),
            cols.join(",")
        )));
    }
    let labels = cols[SERIES_FIXED.len()..]
        .iter()
        .map(|c| {
            c.strip_prefix(CIRC_PREFIX)
                .filter(|l| !l.is_empty())
                .map(str::to_string)
                .ok_or_else(|| Error::Parse(format!("unexpected series column '{c}'")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut series = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: '{s}': {e}", line + 2)))
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != cols.len() {
            return Err(Error::Parse(format!(
                "row {} has {} fields, expected {}",
                line + 2,
                vals.len(),
                cols.len()
            )));
        }
        let r = InvariantRecord {
            t: vals[0],
            i0: vals[1],
            i2: vals[2],
            div_max: vals[3],
            i1: vals[4..].to_vec(),
        };
        if !r.is_finite() {
            return Err(Error::Parse(format!(
                "row {} has non-finite values",
                line + 2
            )));
        }
        series.push(r);
    }
    Ok((labels, series))
}

/// Writes `s,lambda_0..,norm,residual_estimate` rows.
pub fn write_trajectory<W: Write>(out: W, rows: &[TrajectoryRow]) -> Result<()> {
    let dim = rows.first().map_or(0, |r| r.lambda.len());
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = std::iter::once("s".to_string())
        .chain((0..dim).map(|i| format!("lambda_{i}")))
        .chain(["norm".to_string(), "residual_estimate".to_string()])
        .collect();
    w.write_record(&header)?;
    for r in rows {
        let row: Vec<String> = std::iter::once(r.s)
            .chain(r.lambda.iter().copied())
            .chain([r.norm, r.residual_estimate])
            .map(fmt_f64)
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Binary greyscale PGM (P5), black at `lo` and white at `hi`.
pub fn write_pgm<W: Write>(mut out: W, n: usize, values: &[f64], lo: f64, hi: f64) -> Result<()> {
    if values.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: values.len(),
        });
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    write!(out, "P5\n{n} {n}\n255\n")?;
    // Image rows run top to bottom, so flip y.
    let mut pixels = Vec::with_capacity(n * n);
    for iy in (0..n).rev() {
        for ix in 0..n {
            let v = ((values[iy * n + ix] - lo) / span).clamp(0.0, 1.0);
            pixels.push((v * 255.0).round() as u8);
        }
    }
    out.write_all(&pixels)?;
    Ok(())
}
