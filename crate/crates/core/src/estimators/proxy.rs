//! Plug-in estimate of the optimal variance proxy from the empirical MGF.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sample::Sample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaOptEstimate {
    /// Estimated optimal variance proxy (a squared scale).
    pub variance_proxy: f64,
    /// Grid point attaining the maximum (None if the floor at 0 applied).
    pub t_at_max: Option<f64>,
    /// Number of grid points skipped because exp(t x) overflowed.
    pub saturated: usize,
}

impl SigmaOptEstimate {
    pub fn scale(&self) -> f64 {
        self.variance_proxy.sqrt()
    }
}

/// 200 log-spaced magnitudes in [1e-3, 5], with both signs.
pub fn default_t_grid() -> Vec<f64> {
    let (lo, hi, count) = (1e-3f64.ln(), 5f64.ln(), 200);
    let mut grid = Vec::with_capacity(2 * count);
    for i in 0..count {
        let t = (lo + (hi - lo) * i as f64 / (count - 1) as f64).exp();
        grid.push(-t);
        grid.push(t);
    }
    grid
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(invalid("t_grid", "must not be empty"));
    }
    if let Some(t) = t_grid.iter().find(|t| !(t.abs() >= 1e-3) || !t.is_finite()) {
        return Err(invalid("t_grid", format!("entry {t} is not a finite value with |t| >= 1e-3")));
    }
    let mut pos: Vec<f64> = t_grid.iter().copied().filter(|t| *t > 0.0).collect();
    let mut neg: Vec<f64> = t_grid.iter().filter(|t| **t < 0.0).map(|t| -t).collect();
    pos.sort_unstable_by(f64::total_cmp);
    neg.sort_unstable_by(f64::total_cmp);
    if pos != neg {
        return Err(invalid("t_grid", "must be symmetric about 0"));
    }
    Ok(())
}

/// 2 max_t ln(mean(e^{t X})) / t^2 over the grid, floored at zero.
pub fn sigma_opt_plugin(sample: &Sample, t_grid: &[f64]) -> Result<SigmaOptEstimate> {
    check_grid(t_grid)?;
    let centered = sample.centered();
    let n = centered.len() as f64;
    let mut best: Option<(f64, f64)> = None;
    let mut saturated = 0;
    for &t in t_grid {
        let s: f64 = centered.iter().map(|x| (t * x).exp()).sum();
        if !s.is_finite() {
            saturated += 1;
            continue;
        }
        let v = 2.0 * (s / n).ln() / (t * t);
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, t));
        }
    }
    let Some((v, t)) = best else {
        return Err(Error::AllSaturated);
    };
    Ok(if v > 0.0 {
        SigmaOptEstimate {
            variance_proxy: v,
            t_at_max: Some(t),
            saturated,
        }
    } else {
        SigmaOptEstimate {
            variance_proxy: 0.0,
            t_at_max: None,
            saturated,
        }
    })
}
