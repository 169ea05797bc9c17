use serde::Serialize;
use subgauss::diagnostics::{subgauss_plot_data, tendency_fit, PlotRow, TendencyReport, MAX_PLOT_N, MIN_FIT_ROWS};
use subgauss::Sample;

use super::Context;
use crate::args::{Format, SgplotArgs};
use crate::error::{CliError, CliResult};
use crate::input::read_values;
use crate::output::{fmt_f64, to_csv, to_json};

#[derive(Serialize)]
struct PlotReport<'a> {
    n: usize,
    seed: u64,
    report: TendencyReport,
    rows: &'a [PlotRow],
}

/// With `--format csv` the (j, x, y) rows form the output and the verdict
/// goes to stdout (when writing to a file) or stderr.
pub fn run(args: &SgplotArgs, ctx: &Context) -> CliResult<()> {
    let values = read_values(&args.input)?;
    let n = values.len();
    if n < MIN_FIT_ROWS {
        return Err(CliError::Data(format!(
            "the sub-Gaussian plot needs at least {MIN_FIT_ROWS} observations, got {n}"
        )));
    }
    if n > MAX_PLOT_N {
        return Err(CliError::Data(format!(
            "{n} observations exceed the plot cap of {MAX_PLOT_N}"
        )));
    }
    let seed = ctx.seed();
    let data = subgauss_plot_data(&Sample::new(values)?, seed)?;
    let report = tendency_fit(&data)?;
    let sink = ctx.sink("sgplot", args, seed);
    match ctx.format_or(Format::Json) {
        Format::Json => sink.emit(&to_json(&PlotReport {
            n,
            seed,
            report,
            rows: &data.rows,
        })),
        Format::Csv => {
            let rows = data
                .rows
                .iter()
                .map(|r| vec![r.j.to_string(), fmt_f64(r.x), fmt_f64(r.y)]);
            sink.emit(&to_csv(&["j", "x", "y"], rows))?;
            let summary = to_json(&report);
            if ctx.out.is_some() {
                print!("{summary}");
            } else {
                eprint!("{summary}");
            }
            Ok(())
        }
    }
}
