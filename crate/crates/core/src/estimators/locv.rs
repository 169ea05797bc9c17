//! Leave-one-out cross-validation for the number of median-of-means blocks.

use super::{median_in_place, mom_with_blocks, BlockConfig, Method, NormEstimate};
use crate::error::{invalid, Result};
use crate::sample::Sample;
use crate::special::double_factorial_odd_f64;

/// {1, ..., floor(sqrt n)} together with 2 ceil(ln n), restricted to [1, n-1].
pub fn default_b_candidates(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=(n as f64).sqrt().floor() as usize).collect();
    if n > 1 {
        out.push(2 * (n as f64).ln().ceil() as usize);
    }
    out.retain(|&b| b >= 1 && b < n);
    out.sort_unstable();
    out.dedup();
    out
}

/// Cross-validation objective for one block count:
/// max over k of sum_j [r_k(X_j) - med_s r_{k,s}^{(-j)}]^2, where the block
/// holding X_j drops it from its sum but keeps the divisor m.
pub fn locv_objective(sample: &Sample, b: usize, kappa_n: u32, seed: u64) -> Result<f64> {
    let n = sample.len();
    if b == 0 || b >= n {
        return Err(invalid("b", format!("candidate {b} must lie in [1, {}]", n - 1)));
    }
    if kappa_n == 0 {
        return Err(invalid("kappa_n", "must be at least 1"));
    }
    let cfg = BlockConfig::new(n, b, seed)?;
    let centered = sample.centered();
    let scale = centered.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    // Observations in block order; the truncated tail sits after b*m.
    let order = cfg.assignment.permutation(n);
    let u: Vec<f64> = order
        .iter()
        .map(|&i| (centered[i] / scale) * (centered[i] / scale))
        .collect();
    let (m, used) = (cfg.m, cfg.b * cfg.m);

    let mut worst = f64::NEG_INFINITY;
    let mut powers = u.clone();
    let mut block_sums = vec![0.0; b];
    let mut others = Vec::with_capacity(b);
    for k in 1..=kappa_n {
        let norm = double_factorial_odd_f64(k);
        let expo = 0.5 / k as f64;
        let root = |s: f64| scale * (s.max(0.0) / norm).powf(expo);
        for (s, chunk) in powers[..used].chunks_exact(m).enumerate() {
            block_sums[s] = chunk.iter().sum();
        }
        let block_roots: Vec<f64> = block_sums.iter().map(|&s| root(s / m as f64)).collect();
        let full_median = median_in_place(&mut block_roots.clone());

        let mut total = 0.0;
        for (pos, &pk) in powers.iter().enumerate() {
            let point = root(pk);
            let med = if pos < used {
                let s = pos / m;
                others.clear();
                others.extend_from_slice(&block_roots);
                others[s] = root((block_sums[s] - pk) / m as f64);
                median_in_place(&mut others)
            } else {
                full_median
            };
            total += (point - med) * (point - med);
        }
        worst = worst.max(total);
        for (p, &ui) in powers.iter_mut().zip(&u) {
            *p *= ui;
        }
    }
    Ok(worst)
}

/// Block count minimizing [`locv_objective`] over `candidates`; ties go to
/// the smallest b.
pub fn locv_select_b(sample: &Sample, kappa_n: u32, candidates: &[usize], seed: u64) -> Result<usize> {
    if candidates.is_empty() {
        return Err(invalid("b_candidates", "must not be empty"));
    }
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut best = (f64::INFINITY, sorted[0]);
    for &b in &sorted {
        let obj = locv_objective(sample, b, kappa_n, seed)?;
        if obj < best.0 {
            best = (obj, b);
        }
    }
    Ok(best.1)
}

/// Median-of-means with the block count chosen by cross-validation.
pub fn mom_locv_estimate(
    sample: &Sample,
    kappa_n: u32,
    candidates: &[usize],
    seed: u64,
) -> Result<NormEstimate> {
    let b = locv_select_b(sample, kappa_n, candidates, seed)?;
    let cfg = BlockConfig::new(sample.len(), b, seed)?;
    let mut est = mom_with_blocks(sample, cfg, kappa_n)?;
    est.method = Method::MomLocv;
    est.seed = Some(seed);
    Ok(est)
}
