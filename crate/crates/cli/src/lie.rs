use clap::{Subcommand, ValueEnum};
use serde::Serialize;
use spencer_core::liealg::{LieAlgebra, LieVector};
use spencer_core::scalar::Rational;
use spencer_core::spencer::{
    ce_cohomology_dims, delta_curvature, delta_structural, nilpotency_report, spencer_betti,
    sym_dimension_factor, whitehead_factor, SpencerReport, SymTensor,
};
use spencer_core::{Error, Result};

use crate::output::{emit, join};
use crate::Ctx;

#[derive(Debug, Subcommand)]
pub enum LieCommand {
    /// Print the bracket table and the exact Jacobi residual.
    Verify {
        /// Preset name (su2, so3, sl2, abelian<N>) or path to an algebra JSON file.
        #[arg(long)]
        algebra: String,
    },
    /// Dimensions of H^q(g, Sym^p g) for q = 0..=max-q.
    Cohomology {
        #[arg(long)]
        algebra: String,
        /// Symmetric degree of the coefficient module.
        #[arg(long, default_value_t = 0)]
        p: usize,
        /// Highest cochain degree; defaults to dim g.
        #[arg(long)]
        max_q: Option<usize>,
    },
    /// Betti numbers from base Betti numbers and a factor preset.
    Betti {
        /// Comma-separated base Betti numbers, e.g. 1,2,1.
        #[arg(long, value_delimiter = ',', required = true)]
        base: Vec<u64>,
        #[arg(long)]
        algebra: String,
        #[arg(long, value_enum, default_value_t = Factor::Sym)]
        factor: Factor,
    },
    /// Apply a Spencer differential to a symmetric tensor.
    Delta {
        #[arg(long)]
        algebra: String,
        /// Tensor such as `e1.e2 - 2*e3.e3`, written in basis labels.
        #[arg(long)]
        tensor: String,
        /// Algebra element Ω for the curvature-twisted differential; the
        /// structural differential is used when absent.
        #[arg(long)]
        curvature: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Factor {
    /// f[p] = dim Sym^p g.
    Sym,
    /// f[p][q] = dim H^q(g, Sym^p g).
    Whitehead,
}

impl Factor {
    fn name(self) -> &'static str {
        match self {
            Factor::Sym => "sym",
            Factor::Whitehead => "whitehead",
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    algebra: String,
    dim: usize,
    labels: Vec<String>,
    brackets: Vec<String>,
    jacobi_residual: String,
    semisimple: bool,
}

#[derive(Serialize)]
struct CohomologyReport {
    algebra: String,
    p: usize,
    dims: Vec<u64>,
}

#[derive(Serialize)]
struct DeltaReport {
    algebra: String,
    differential: &'static str,
    input: String,
    output: String,
    degree: usize,
}

pub fn run(ctx: &Ctx, cmd: LieCommand) -> Result<()> {
    match cmd {
        LieCommand::Verify { algebra } => verify(ctx, &algebra),
        LieCommand::Cohomology { algebra, p, max_q } => cohomology(ctx, &algebra, p, max_q),
        LieCommand::Betti {
            base,
            algebra,
            factor,
        } => betti(ctx, &base, &algebra, factor),
        LieCommand::Delta {
            algebra,
            tensor,
            curvature,
        } => delta(ctx, &algebra, &tensor, curvature.as_deref()),
    }
}

fn verify(ctx: &Ctx, spec: &str) -> Result<()> {
    let g = LieAlgebra::load(spec)?;
    let report = VerifyReport {
        algebra: g.name().to_string(),
        dim: g.dim(),
        labels: g.labels().to_vec(),
        brackets: g.bracket_table(),
        jacobi_residual: g.jacobi_residual().to_string(),
        semisimple: g.is_semisimple(),
    };
    let mut text = format!("algebra {} (dim {})\n", report.algebra, report.dim);
    for line in &report.brackets {
        text += &format!("  {line}\n");
    }
    text += &format!("jacobi residual: {}\n", report.jacobi_residual);
    text += &format!("semisimple: {}\n", report.semisimple);
    emit(ctx, "lie_verify.json", &report, &text)?;
    if report.jacobi_residual != "0" {
        return Err(Error::InvalidAlgebra(format!(
            "Jacobi identity fails with residual {}",
            report.jacobi_residual
        )));
    }
    Ok(())
}

fn cohomology(ctx: &Ctx, spec: &str, p: usize, max_q: Option<usize>) -> Result<()> {
    let g = LieAlgebra::load(spec)?;
    let max_q = max_q.unwrap_or(g.dim());
    if max_q > g.dim() {
        return Err(Error::InvalidInput(format!(
            "max-q {max_q} exceeds dim g = {}",
            g.dim()
        )));
    }
    let mut dims = ce_cohomology_dims(&g, p);
    dims.truncate(max_q + 1);
    let text = format!(
        "dim H^q({}, Sym^{p}) for q = 0..={max_q}\n{}\n",
        g.name(),
        join(&dims)
    );
    let report = CohomologyReport {
        algebra: g.name().to_string(),
        p,
        dims,
    };
    emit(ctx, "lie_cohomology.json", &report, &text)
}

fn betti(ctx: &Ctx, base: &[u64], spec: &str, factor: Factor) -> Result<()> {
    if base.is_empty() {
        return Err(Error::InvalidInput("base Betti numbers are empty".into()));
    }
    let g = LieAlgebra::load(spec)?;
    let max_p = base.len() - 1;
    let table = match factor {
        Factor::Sym => sym_dimension_factor(&g, max_p),
        Factor::Whitehead => whitehead_factor(&g, max_p),
    };
    let values = spencer_betti(base, &table);
    let nilpotency = nilpotency_report(&g, max_p.max(1))
        .into_iter()
        .map(|(k, v)| (k, v.to_string()))
        .collect();
    let report = SpencerReport {
        algebra: g.name().to_string(),
        degrees: (0..values.len()).collect(),
        betti: values,
        factor_preset: factor.name().to_string(),
        nilpotency,
    };
    let mut text = format!(
        "betti numbers over {} with base {} ({} factor)\n{}\n",
        report.algebra,
        join(base),
        report.factor_preset,
        join(&report.betti)
    );
    for (k, v) in &report.nilpotency {
        text += &format!("max |delta^2| on Sym^{k}: {v}\n");
    }
    emit(ctx, "lie_betti.json", &report, &text)
}

fn delta(ctx: &Ctx, spec: &str, tensor: &str, curvature: Option<&str>) -> Result<()> {
    let g = LieAlgebra::load(spec)?;
    let labels = g.labels();
    let x = SymTensor::<Rational>::parse(tensor, labels)?;
    let (differential, y) = match curvature {
        None => ("structural", delta_structural(&g, &x)?),
        Some(text) => {
            let omega = parse_element(text, labels)?;
            ("curvature", delta_curvature(&g, &omega, &x)?)
        }
    };
    let report = DeltaReport {
        algebra: g.name().to_string(),
        differential,
        input: x.display_with(labels).to_string(),
        output: y.display_with(labels).to_string(),
        degree: y.degree(),
    };
    let text = format!(
        "{differential} delta of {} over {}\n{}\n",
        report.input, report.algebra, report.output
    );
    emit(ctx, "lie_delta.json", &report, &text)
}

/// Reads an algebra element written as a degree-1 tensor.
fn parse_element(text: &str, labels: &[String]) -> Result<LieVector<Rational>> {
    let t = SymTensor::<Rational>::parse(text, labels)?;
    if t.is_zero() {
        return Ok(LieVector(vec![
            Rational::from_integer(0.into());
            labels.len()
        ]));
    }
    if t.degree() != 1 {
        return Err(Error::Parse(format!(
            "curvature must be a linear combination of basis elements, got degree {}",
            t.degree()
        )));
    }
    Ok(LieVector(
        (0..labels.len()).map(|i| t.coeff(&[i])).collect(),
    ))
}
