//! Estimators for very small samples: the (n-1)-out-of-n bootstrap median
//! and the leave-one-out Hodges-Lehmann construction.

use rand::Rng;

use super::{de_estimate, de_on_centered, median_in_place, Method, NormEstimate};
use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::seed::rng_from_seed;

/// Median of plug-in estimates over n leave-one-out bootstrap iterations.
///
/// Iteration i draws n-1 points with replacement from the centered sample
/// with X_i removed from the pool.
pub fn bootstrap_median_estimate(sample: &Sample, kappa_n: u32, seed: u64) -> Result<NormEstimate> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::TooFewObservations { required: 2, got: n });
    }
    if kappa_n == 0 {
        return Err(crate::error::invalid("kappa_n", "must be at least 1"));
    }
    let centered = sample.centered();
    let mut rng = rng_from_seed(seed);
    let mut pool = Vec::with_capacity(n - 1);
    let mut draw = Vec::with_capacity(n - 1);
    let mut results: Vec<(f64, u32)> = Vec::with_capacity(n);
    for i in 0..n {
        pool.clear();
        pool.extend(centered.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| *x));
        draw.clear();
        draw.extend((0..n - 1).map(|_| pool[rng.random_range(0..pool.len())]));
        results.push(de_on_centered(&draw, kappa_n));
    }
    let mut values: Vec<f64> = results.iter().map(|r| r.0).collect();
    let value = median_in_place(&mut values);
    results.sort_by(|a, b| a.0.total_cmp(&b.0));
    let k_star = results[(n - 1) / 2].1;
    Ok(NormEstimate {
        value,
        method: Method::Boot,
        k_star,
        kappa_n,
        block: None,
        seed: Some(seed),
    })
}

fn hodges_lehmann(stats: &[f64]) -> f64 {
    let mut pairs = Vec::with_capacity(stats.len() * (stats.len() - 1) / 2);
    for i in 0..stats.len() {
        for j in i + 1..stats.len() {
            pairs.push(0.5 * (stats[i] + stats[j]));
        }
    }
    median_in_place(&mut pairs)
}

/// Median over pairs i < j of the averaged leave-one-out plug-in estimates.
///
/// Each leave-one-out subsample is centered by its own mean unless the sample
/// carries a known mean. The reported `k_star` is the full-sample one.
pub fn loo_hl_estimate(sample: &Sample, kappa_n: u32) -> Result<NormEstimate> {
    let n = sample.len();
    let required = if sample.known_mean().is_some() { 2 } else { 3 };
    if n < required {
        return Err(Error::TooFewObservations { required, got: n });
    }
    let full = de_estimate(sample, kappa_n)?;
    let loo: Vec<f64> = (0..n)
        .map(|i| de_estimate(&sample.without(i), kappa_n).map(|e| e.value))
        .collect::<Result<_>>()?;
    Ok(NormEstimate {
        value: hodges_lehmann(&loo),
        method: Method::LooHl,
        k_star: full.k_star,
        kappa_n,
        block: None,
        seed: None,
    })
}

/// Leave-one-out Hodges-Lehmann estimate of the mean.
pub fn loo_hl_mean(sample: &Sample) -> Result<f64> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::TooFewObservations { required: 2, got: n });
    }
    let total: f64 = sample.values().iter().sum();
    let loo: Vec<f64> = sample
        .values()
        .iter()
        .map(|x| (total - x) / (n - 1) as f64)
        .collect();
    Ok(hodges_lehmann(&loo))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bootstrap_two_point_example() {
        let s = Sample::new(vec![-1.0, 1.0]).unwrap();
        for seed in 0..20 {
            let e = bootstrap_median_estimate(&s, 3, seed).unwrap();
            assert_eq!(e.value, 1.0);
        }
    }

    #[test]
    fn bootstrap_constant_and_small() {
        let s = Sample::new(vec![2.5; 6]).unwrap();
        assert_eq!(bootstrap_median_estimate(&s, 2, 1).unwrap().value, 0.0);
        assert!(bootstrap_median_estimate(&Sample::new(vec![1.0]).unwrap(), 2, 1).is_err());
    }

    #[test]
    fn loo_hl_constant_and_size_rules() {
        let s = Sample::new(vec![3.0; 5]).unwrap();
        assert_eq!(loo_hl_estimate(&s, 2).unwrap().value, 0.0);
        let two = Sample::new(vec![1.0, -1.0]).unwrap();
        assert!(loo_hl_estimate(&two, 2).is_err());
        let two = two.with_known_mean(0.0).unwrap();
        // Each leave-one-out subsample is a single +-1 point.
        assert_eq!(loo_hl_estimate(&two, 2).unwrap().value, 1.0);
    }

    #[test]
    fn loo_hl_mean_pair() {
        let s = Sample::new(vec![0.25, 4.0]).unwrap();
        // Leave-one-out means are 4.0 and 0.25; the single pair averages them.
        assert_eq!(loo_hl_mean(&s).unwrap(), (0.25 + 4.0) / 2.0);
        // Leave-one-out means 4.5, 3, 1.5; pair averages 3.75, 3, 2.25.
        let s = Sample::new(vec![0.0, 3.0, 6.0]).unwrap();
        assert_eq!(loo_hl_mean(&s).unwrap(), 3.0);
    }
}
