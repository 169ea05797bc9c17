use serde::Serialize;
use subgauss::norms::{ci_half_length_table, HalfLengthRow};
use subgauss::DistributionSpec;

use super::Context;
use crate::args::{CompareArgs, Format};
use crate::error::CliResult;
use crate::output::{fmt_f64, to_csv, to_json};

#[derive(Serialize)]
struct Row {
    mu: f64,
    #[serde(flatten)]
    half_lengths: HalfLengthRow,
}

pub fn run(args: &CompareArgs, ctx: &Context) -> CliResult<()> {
    let mus: Vec<f64> = match args.mu {
        Some(mu) => vec![mu],
        None => (1..=19).map(|i| i as f64 * 0.05).collect(),
    };
    let rows = mus
        .into_iter()
        .map(|mu| {
            let dist = DistributionSpec::bernoulli_centered(mu)?;
            Ok(Row {
                mu,
                half_lengths: ci_half_length_table(&dist, args.delta)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let content = match ctx.format_or(Format::Csv) {
        Format::Json => to_json(&rows),
        Format::Csv => to_csv(
            &["mu", "sigma_opt", "intrinsic", "psi2", "w2", "std_dev"],
            rows.iter().map(|r| {
                let h = r.half_lengths;
                [r.mu, h.sigma_opt, h.intrinsic, h.psi2, h.w2, h.std_dev].map(fmt_f64)
            }),
        ),
    };
    ctx.sink("compare-norms", args, ctx.seed()).emit(&content)
}
