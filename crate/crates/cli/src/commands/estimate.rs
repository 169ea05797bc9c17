use serde::Serialize;
use subgauss::estimators::{
    bootstrap_median_estimate, de_estimate, default_b_candidates, default_t_grid, kappa_policy, loo_hl_estimate,
    mom_estimate, mom_locv_estimate, sigma_opt_plugin,
};
use subgauss::{NormEstimate, Sample};

use super::{usage, Context};
use crate::args::{EstimateArgs, EstimateMethod, Format};
use crate::error::CliResult;
use crate::input::read_values;
use crate::output::{fmt_f64, to_csv, to_json};

#[derive(Serialize)]
struct NormReport {
    #[serde(flatten)]
    estimate: NormEstimate,
    n: usize,
    b: Option<usize>,
}

#[derive(Serialize)]
struct ProxyReport {
    method: &'static str,
    /// Square root of the variance proxy, in data units.
    value: f64,
    variance_proxy: f64,
    t_at_max: Option<f64>,
    saturated: usize,
    n: usize,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn run(args: &EstimateArgs, ctx: &Context) -> CliResult<()> {
    if args.b.is_some() && args.method != EstimateMethod::Mom {
        return Err(usage("--b only applies to --method mom"));
    }
    if args.kappa.is_some() && args.method == EstimateMethod::Op {
        return Err(usage("--kappa does not apply to --method op"));
    }
    let values = read_values(&args.input)?;
    let n = values.len();
    let mut sample = Sample::new(values)?;
    if let Some(m) = args.known_mean {
        sample = sample.with_known_mean(m)?;
    }
    let kappa = args.kappa.unwrap_or_else(|| kappa_policy(n));
    let seed = ctx.seed();
    let estimate = match args.method {
        EstimateMethod::De => de_estimate(&sample, kappa)?,
        EstimateMethod::Mom => {
            let b = args.b.unwrap_or_else(|| (2 * (n as f64).ln().ceil() as usize).clamp(1, n));
            mom_estimate(&sample, b, kappa, seed)?
        }
        EstimateMethod::MomLocv => mom_locv_estimate(&sample, kappa, &default_b_candidates(n), seed)?,
        EstimateMethod::Boot => bootstrap_median_estimate(&sample, kappa, seed)?,
        EstimateMethod::LooHl => loo_hl_estimate(&sample, kappa)?,
        EstimateMethod::Op => {
            let proxy = sigma_opt_plugin(&sample, &default_t_grid())?;
            let report = ProxyReport {
                method: "OP_PROXY",
                value: proxy.scale(),
                variance_proxy: proxy.variance_proxy,
                t_at_max: proxy.t_at_max,
                saturated: proxy.saturated,
                n,
            };
            let content = match ctx.format_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Csv => to_csv(
                    &["method", "value", "variance_proxy", "t_at_max", "saturated", "n"],
                    [vec![
                        report.method.to_string(),
                        fmt_f64(report.value),
                        fmt_f64(report.variance_proxy),
                        opt(report.t_at_max.map(fmt_f64)),
                        report.saturated.to_string(),
                        n.to_string(),
                    ]],
                ),
            };
            return ctx.sink("estimate", args, seed).emit(&content);
        }
    };
    let report = NormReport {
        b: estimate.block.map(|c| c.b),
        estimate,
        n,
    };
    let content = match ctx.format_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let method = serde_json::to_value(report.estimate.method).expect("method serializes");
            to_csv(
                &["method", "value", "k_star", "kappa_n", "b", "seed", "n"],
                [vec![
                    method.as_str().unwrap_or_default().to_string(),
                    fmt_f64(report.estimate.value),
                    report.estimate.k_star.to_string(),
                    report.estimate.kappa_n.to_string(),
                    opt(report.b),
                    opt(report.estimate.seed),
                    n.to_string(),
                ]],
            )
        }
    };
    ctx.sink("estimate", args, seed).emit(&content)
}
