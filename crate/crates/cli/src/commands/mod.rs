mod bandit;
mod ci;
mod compare;
mod estimate;
mod sgplot;

use std::path::PathBuf;

use clap::Parser;
use serde::Serialize;

use crate::args::{Cli, Command, Format, ReplayArgs};
use crate::error::{CliError, CliResult};
use crate::output::{RunManifest, Sink};

/// Settings shared by every command.
pub struct Context {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub argv: Vec<String>,
}

impl Context {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn sink<P: Serialize>(&self, command: &str, params: &P, master_seed: u64) -> Sink {
        let mut parameters = serde_json::to_value(params).expect("arguments serialize");
        if let serde_json::Value::Object(map) = &mut parameters {
            map.insert("format".into(), serde_json::to_value(self.format).expect("format serializes"));
        }
        Sink {
            out: self.out.clone(),
            manifest: RunManifest {
                command: command.to_string(),
                parameters,
                master_seed,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                argv: self.argv.clone(),
            },
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run(cli: Cli, argv: Vec<String>) -> CliResult<()> {
    let ctx = Context {
        seed: cli.seed,
        out: cli.out,
        format: cli.format,
        argv,
    };
    match &cli.command {
        Command::Estimate(a) => estimate::run(a, &ctx),
        Command::Ci(a) => ci::run(a, &ctx),
        Command::Sgplot(a) => sgplot::run(a, &ctx),
        Command::CompareNorms(a) => compare::run(a, &ctx),
        Command::Bandit(a) => bandit::run(a, &ctx),
        Command::Replay(a) => replay(a, &ctx),
    }
}

/// Re-parses the argv stored in a manifest and runs it; `--out` on the
/// replay redirects the output.
fn replay(args: &ReplayArgs, ctx: &Context) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.manifest).map_err(|e| CliError::io(&args.manifest, e))?;
    let manifest: RunManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Data(format!("{}: invalid manifest: {e}", args.manifest.display())))?;
    let mut cli = Cli::try_parse_from(std::iter::once("subgauss".to_string()).chain(manifest.argv.iter().cloned()))
        .map_err(|e| CliError::Data(format!("manifest arguments do not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::Data("a manifest cannot record a replay".into()));
    }
    if ctx.out.is_some() {
        cli.out = ctx.out.clone();
    }
    run(cli, manifest.argv)
}
