use subgauss::bandit::{run_experiment, ExperimentConfig};

use super::Context;
use crate::args::{BanditArgs, Format};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_f64, to_csv, to_json};

/// `--seed` overrides the config's master seed.
pub fn run(args: &BanditArgs, ctx: &Context) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let mut config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", args.config.display())))?;
    if let Some(seed) = ctx.seed {
        config.master_seed = seed;
    }
    let result = run_experiment(&config)?;
    let content = match ctx.format_or(Format::Csv) {
        Format::Json => to_json(&result),
        Format::Csv => to_csv(
            &["policy", "round", "mean_regret", "se_regret"],
            result.curves.iter().flat_map(|c| {
                c.mean_regret
                    .iter()
                    .zip(&c.se_regret)
                    .enumerate()
                    .map(|(t, (m, s))| vec![c.label.clone(), (t + 1).to_string(), fmt_f64(*m), fmt_f64(*s)])
            }),
        ),
    };
    ctx.sink("bandit", args, config.master_seed).emit(&content)
}
