//! Sub-Gaussian plot: resampled maxima against sqrt(ln j + 1), and a crude
//! score of whether they grow like sqrt(log j) or like log j.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sample::Sample;
use crate::seed::rng_from_seed;

/// Largest sample accepted by [`subgauss_plot_data`] (the cost is O(n^2)).
pub const MAX_PLOT_N: usize = 10_000;
/// Minimum rows for [`tendency_fit`].
pub const MIN_FIT_ROWS: usize = 10;
/// Required R^2 advantage for a non-inconclusive verdict.
pub const VERDICT_MARGIN: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub j: usize,
    /// sqrt(ln j + 1)
    pub x: f64,
    /// Maximum of j points resampled from the data.
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubGaussPlotData {
    pub rows: Vec<PlotRow>,
    pub seed: u64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    SubgaussianConsistent,
    HeavierTail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TendencyReport {
    pub r2_sqrtlog: f64,
    pub r2_log: f64,
    pub verdict: Verdict,
}

/// For j = 1..=n, the maximum of j fresh draws with replacement from the sample.
pub fn subgauss_plot_data(sample: &Sample, seed: u64) -> Result<SubGaussPlotData> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::TooFewObservations { required: 2, got: n });
    }
    if n > MAX_PLOT_N {
        return Err(invalid("sample", format!("{n} observations exceed the plot cap of {MAX_PLOT_N}")));
    }
    let values = sample.values();
    let mut rng = rng_from_seed(seed);
    let rows = (1..=n)
        .map(|j| {
            let y = (0..j)
                .map(|_| values[rng.random_range(0..n)])
                .fold(f64::NEG_INFINITY, f64::max);
            PlotRow {
                j,
                x: ((j as f64).ln() + 1.0).sqrt(),
                y,
            }
        })
        .collect();
    Ok(SubGaussPlotData { rows, seed, n })
}

/// R^2 of the ordinary least squares fit of y on (1, x); None if y is constant.
fn r_squared(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if syy == 0.0 || sxx == 0.0 {
        return None;
    }
    Some((sxy * sxy / (sxx * syy)).clamp(0.0, 1.0))
}

/// Compares linear fits of y on sqrt(ln j + 1) and on ln j + 1 over all rows.
pub fn tendency_fit(data: &SubGaussPlotData) -> Result<TendencyReport> {
    if data.rows.len() < MIN_FIT_ROWS {
        return Err(Error::TooFewObservations {
            required: MIN_FIT_ROWS,
            got: data.rows.len(),
        });
    }
    let ys: Vec<f64> = data.rows.iter().map(|r| r.y).collect();
    let sqrt_log: Vec<f64> = data.rows.iter().map(|r| ((r.j as f64).ln() + 1.0).sqrt()).collect();
    let log: Vec<f64> = data.rows.iter().map(|r| (r.j as f64).ln() + 1.0).collect();
    let (Some(r2_sqrtlog), Some(r2_log)) = (r_squared(&sqrt_log, &ys), r_squared(&log, &ys)) else {
        return Ok(TendencyReport {
            r2_sqrtlog: 0.0,
            r2_log: 0.0,
            verdict: Verdict::Inconclusive,
        });
    };
    let verdict = if r2_sqrtlog - r2_log >= VERDICT_MARGIN {
        Verdict::SubgaussianConsistent
    } else if r2_log - r2_sqrtlog >= VERDICT_MARGIN {
        Verdict::HeavierTail
    } else {
        Verdict::Inconclusive
    };
    Ok(TendencyReport {
        r2_sqrtlog,
        r2_log,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(usize) -> f64, n: usize) -> SubGaussPlotData {
        let rows = (1..=n)
            .map(|j| PlotRow {
                j,
                x: ((j as f64).ln() + 1.0).sqrt(),
                y: f(j),
            })
            .collect();
        SubGaussPlotData { rows, seed: 0, n }
    }

    #[test]
    fn exact_models_are_recognized() {
        let d = synthetic(|j| 2.0 * ((j as f64).ln() + 1.0).sqrt() + 0.3, 200);
        let r = tendency_fit(&d).unwrap();
        assert!((r.r2_sqrtlog - 1.0).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::SubgaussianConsistent);
        let d = synthetic(|j| (j as f64).ln() + 1.0, 200);
        let r = tendency_fit(&d).unwrap();
        assert!((r.r2_log - 1.0).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::HeavierTail);
    }

    #[test]
    fn degenerate_and_short_inputs() {
        let d = synthetic(|_| 1.5, 50);
        assert_eq!(tendency_fit(&d).unwrap().verdict, Verdict::Inconclusive);
        assert!(tendency_fit(&synthetic(|j| j as f64, 9)).is_err());
    }

    #[test]
    fn plot_rows_and_caps() {
        let s = Sample::new(vec![2.0; 30]).unwrap();
        let d = subgauss_plot_data(&s, 4).unwrap();
        assert_eq!(d.rows.len(), 30);
        assert!(d.rows.iter().all(|r| r.y == 2.0));
        assert_eq!(d.rows[0].x, 1.0);
        assert!(d.rows.windows(2).all(|w| w[0].x < w[1].x));
        assert!(subgauss_plot_data(&Sample::new(vec![1.0]).unwrap(), 0).is_err());
        let big = Sample::new(vec![0.0; MAX_PLOT_N + 1]).unwrap();
        assert!(subgauss_plot_data(&big, 0).is_err());
    }
}
