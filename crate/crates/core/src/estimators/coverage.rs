//! Finite-sample coverage guarantee for median-of-means norm estimates.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::special::double_factorial_odd_f64;

/// Relative perturbation bounds for the MOM estimate and the probability
/// that they fail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageBound {
    /// Largest downward relative deviation; None when every bracket is negative.
    pub g_bar_max: Option<f64>,
    /// Largest upward relative deviation.
    pub g_under_max: f64,
    pub failure_prob: f64,
    /// Indices k (1-based) whose lower bracket went negative and were skipped.
    pub negative_brackets: Vec<u32>,
    /// True when failure_prob >= 1, so the guarantee says nothing.
    pub vacuous: bool,
}

/// Evaluates the deviation terms of the MOM coverage theorem.
///
/// With a_k = E X^{2k}/(2k-1)!! and d_k = 2 (m/eta)^{-1/2} sigma_k^k / E X^{2k}:
/// g_bar_k = 1 - a_k^{-1/(2k)} max_{k'} (a_{k'} - d_{k'})^{1/(2k')},
/// g_under_k = (d_k + 1)^{1/(2k)} - 1, and the failure probability is
/// kappa_n exp(-2 b eta (1 - 3/(4 eta))^2).
pub fn mom_coverage_bound(
    moments: &[f64],
    sigma_seq: &[f64],
    m: usize,
    b: usize,
    eta: f64,
    kappa_n: u32,
) -> Result<CoverageBound> {
    let kappa = kappa_n as usize;
    if kappa == 0 {
        return Err(invalid("kappa_n", "must be at least 1"));
    }
    if moments.len() < kappa || sigma_seq.len() < kappa {
        return Err(invalid("moments", format!("need at least {kappa} entries")));
    }
    if let Some(v) = moments[..kappa].iter().find(|v| !(**v > 0.0)) {
        return Err(invalid("moments", format!("entries must be positive, got {v}")));
    }
    if let Some(v) = sigma_seq[..kappa].iter().find(|v| !(**v > 0.0)) {
        return Err(invalid("sigma_seq", format!("entries must be positive, got {v}")));
    }
    if m == 0 || b == 0 {
        return Err(invalid("m, b", "must be positive"));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(invalid("eta", format!("must lie in (0, 1], got {eta}")));
    }

    let shrink = 2.0 / (m as f64 / eta).sqrt();
    let mut a = Vec::with_capacity(kappa);
    let mut d = Vec::with_capacity(kappa);
    for j in 0..kappa {
        let k = j as u32 + 1;
        a.push(moments[j] / double_factorial_odd_f64(k));
        d.push(shrink * sigma_seq[j].powi(k as i32) / moments[j]);
    }
    let expo = |j: usize| 0.5 / (j + 1) as f64;

    let mut negative_brackets = Vec::new();
    let mut inner_max: Option<f64> = None;
    for j in 0..kappa {
        let bracket = a[j] - d[j];
        if bracket < 0.0 {
            negative_brackets.push(j as u32 + 1);
            continue;
        }
        let v = bracket.powf(expo(j));
        inner_max = Some(inner_max.map_or(v, |cur: f64| cur.max(v)));
    }
    let g_bar_max = inner_max.map(|inner| {
        (0..kappa)
            .map(|j| 1.0 - a[j].powf(-expo(j)) * inner)
            .fold(f64::NEG_INFINITY, f64::max)
    });
    let g_under_max = (0..kappa)
        .map(|j| (d[j] + 1.0).powf(expo(j)) - 1.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let failure_prob = kappa as f64 * (-2.0 * b as f64 * eta * (1.0 - 0.75 / eta).powi(2)).exp();
    Ok(CoverageBound {
        g_bar_max,
        g_under_max,
        failure_prob,
        negative_brackets,
        vacuous: failure_prob >= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_moments(kappa: usize) -> Vec<f64> {
        (1..=kappa as u32).map(double_factorial_odd_f64).collect()
    }

    #[test]
    fn failure_probability_eta_one() {
        let r = mom_coverage_bound(&gaussian_moments(3), &[1.0; 3], 100, 40, 1.0, 3).unwrap();
        let want = 3.0 * (-5.0f64).exp();
        assert!((r.failure_prob - want).abs() <= 1e-12 * want);
        assert!(!r.vacuous);
    }

    #[test]
    fn eta_three_quarters_is_vacuous() {
        let r = mom_coverage_bound(&gaussian_moments(4), &[1.0; 4], 100, 40, 0.75, 4).unwrap();
        assert_eq!(r.failure_prob, 4.0);
        assert!(r.vacuous);
    }

    #[test]
    fn deviations_vanish_for_large_blocks() {
        let mut prev = f64::INFINITY;
        for m in [10usize, 1_000, 100_000, 10_000_000] {
            let r = mom_coverage_bound(&gaussian_moments(3), &[1.0; 3], m, 10, 1.0, 3).unwrap();
            let g = r.g_bar_max.unwrap();
            assert!(g >= 0.0 && r.g_under_max >= 0.0);
            assert!(r.g_under_max < prev);
            prev = r.g_under_max;
            if m == 10_000_000 {
                assert!(g < 1e-3 && r.g_under_max < 1e-3);
            }
        }
    }

    #[test]
    fn negative_brackets_are_flagged() {
        let r = mom_coverage_bound(&gaussian_moments(2), &[50.0, 50.0], 1, 1, 1.0, 2).unwrap();
        assert_eq!(r.negative_brackets, vec![1, 2]);
        assert_eq!(r.g_bar_max, None);
        assert!(mom_coverage_bound(&[1.0], &[1.0], 1, 1, 1.5, 1).is_err());
        assert!(mom_coverage_bound(&[1.0], &[1.0], 1, 1, 1.0, 2).is_err());
    }
}
