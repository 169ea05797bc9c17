use serde::Serialize;
use subgauss::concentration::{
    be_clt_ci, be_clt_min_n, hoeffding_ci, intrinsic_ci, wrong_hoeffding_gaussian_ci, ConfidenceInterval,
};

use super::{usage, Context};
use crate::args::{CiArgs, CiMethodArg, Format};
use crate::error::{CliError, CliResult};
use crate::input::read_values;
use crate::output::{fmt_f64, to_csv, to_json};

#[derive(Serialize)]
struct CiReport {
    #[serde(flatten)]
    interval: ConfidenceInterval,
    lower: f64,
    upper: f64,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_feasible_n: Option<usize>,
}

/// Rejects flags that belong to other methods.
fn check_flags(args: &CiArgs) -> CliResult<()> {
    let given = [
        ("--norm", args.norm.is_some(), CiMethodArg::Intrinsic),
        ("--symmetric", args.symmetric, CiMethodArg::Intrinsic),
        ("--lower", args.lower.is_some(), CiMethodArg::Hoeffding),
        ("--upper", args.upper.is_some(), CiMethodArg::Hoeffding),
        ("--sigma", args.sigma.is_some(), CiMethodArg::WrongHoeffding),
    ];
    for (flag, present, owner) in given {
        if present && owner != args.method {
            return Err(usage(format!("{flag} does not apply to this method")));
        }
    }
    let centered_at_zero = matches!(args.method, CiMethodArg::BeClt | CiMethodArg::WrongHoeffding);
    if centered_at_zero && (args.input.is_some() || args.mean.is_some()) {
        return Err(usage("this interval is centered at 0 and takes only --n and --delta"));
    }
    if args.input.is_some() && (args.n.is_some() || args.mean.is_some()) {
        return Err(usage("--input supplies n and the center; drop --n and --mean"));
    }
    Ok(())
}

fn required<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| usage(format!("{flag} is required for this method")))
}

pub fn run(args: &CiArgs, ctx: &Context) -> CliResult<()> {
    check_flags(args)?;
    let (n, center) = match &args.input {
        Some(path) => {
            let values = read_values(path)?;
            (values.len(), values.iter().sum::<f64>() / values.len() as f64)
        }
        None => (required(args.n, "--n")?, args.mean.unwrap_or(0.0)),
    };
    let mut min_feasible_n = None;
    let interval = match args.method {
        CiMethodArg::Intrinsic => intrinsic_ci(center, required(args.norm, "--norm")?, n, args.delta, args.symmetric)?,
        CiMethodArg::Hoeffding => hoeffding_ci(
            center,
            required(args.lower, "--lower")?,
            required(args.upper, "--upper")?,
            n,
            args.delta,
        )?,
        CiMethodArg::BeClt => {
            min_feasible_n = Some(be_clt_min_n(args.delta)?);
            be_clt_ci(n, args.delta)?
        }
        CiMethodArg::WrongHoeffding => wrong_hoeffding_gaussian_ci(n, required(args.sigma, "--sigma")?, args.delta)?,
    };
    let report = CiReport {
        lower: interval.lower(),
        upper: interval.upper(),
        interval,
        n,
        min_feasible_n,
    };
    let content = match ctx.format_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let method = serde_json::to_value(interval.method).expect("method serializes");
            to_csv(
                &["method", "center", "half_width", "lower", "upper", "level", "feasible", "n"],
                [vec![
                    method.as_str().unwrap_or_default().to_string(),
                    fmt_f64(interval.center),
                    fmt_f64(interval.half_width),
                    fmt_f64(report.lower),
                    fmt_f64(report.upper),
                    fmt_f64(interval.level),
                    interval.feasible.to_string(),
                    n.to_string(),
                ]],
            )
        }
    };
    ctx.sink("ci", args, ctx.seed()).emit(&content)?;
    if !interval.feasible {
        let min = min_feasible_n.map_or(String::new(), |m| format!("; the smallest feasible n is {m}"));
        return Err(CliError::Infeasible(format!(
            "no finite interval at n = {n}, delta = {}{min}",
            args.delta
        )));
    }
    Ok(())
}
