//! Data-driven estimators of the intrinsic moment norm and of the optimal
//! variance proxy.

mod coverage;
mod locv;
mod proxy;
mod small_sample;

pub use coverage::{mom_coverage_bound, CoverageBound};
pub use locv::{default_b_candidates, locv_objective, locv_select_b, mom_locv_estimate};
pub use proxy::{default_t_grid, sigma_opt_plugin, SigmaOptEstimate};
pub use small_sample::{bootstrap_median_estimate, loo_hl_estimate, loo_hl_mean};

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sample::Sample;
use crate::seed::rng_from_seed;
use crate::special::double_factorial_odd_f64;

/// Estimation method that produced a [`NormEstimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    De,
    Mom,
    MomLocv,
    Boot,
    LooHl,
    OpProxy,
}

/// How observations are dealt into blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Assignment {
    /// Blocks are contiguous runs of the data in its given order.
    Identity,
    /// Blocks are contiguous runs after a shuffle seeded by `seed`.
    Shuffled { seed: u64 },
}

impl Assignment {
    /// The index order used to deal the first `b*m` observations into blocks.
    pub fn permutation(&self, n: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        if let Assignment::Shuffled { seed } = *self {
            idx.shuffle(&mut rng_from_seed(seed));
        }
        idx
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockConfig {
    /// Number of blocks.
    pub b: usize,
    /// Observations per block.
    pub m: usize,
    pub assignment: Assignment,
}

impl BlockConfig {
    /// Blocks for `n` observations; `b = 1` always uses the identity so that
    /// the single block is the full sample in its original order.
    pub fn new(n: usize, b: usize, seed: u64) -> Result<Self> {
        if b == 0 {
            return Err(invalid("b", "must be at least 1"));
        }
        if b > n {
            return Err(invalid("b", format!("{b} blocks exceed {n} observations")));
        }
        let assignment = if b == 1 {
            Assignment::Identity
        } else {
            Assignment::Shuffled { seed }
        };
        Ok(Self { b, m: n / b, assignment })
    }

    pub fn identity(n: usize, b: usize) -> Result<Self> {
        let mut cfg = Self::new(n, b, 0)?;
        cfg.assignment = Assignment::Identity;
        Ok(cfg)
    }

    /// The first `b*m` values in block order: block `s` is `[s*m, (s+1)*m)`.
    pub(crate) fn arrange(&self, values: &[f64]) -> Vec<f64> {
        match self.assignment {
            Assignment::Identity => values[..self.b * self.m].to_vec(),
            Assignment::Shuffled { .. } => self
                .assignment
                .permutation(values.len())
                .into_iter()
                .take(self.b * self.m)
                .map(|i| values[i])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub method: Method,
    pub k_star: u32,
    pub kappa_n: u32,
    pub block: Option<BlockConfig>,
    pub seed: Option<u64>,
}

/// Moment index cap for `n` observations: max(1, ceil(ln n)), at most 20.
pub fn kappa_policy(n: usize) -> u32 {
    if n == 0 {
        return 1;
    }
    ((n as f64).ln().ceil() as u32).clamp(1, 20)
}

fn check_kappa(kappa_n: u32) -> Result<()> {
    if kappa_n == 0 {
        Err(invalid("kappa_n", "must be at least 1"))
    } else {
        Ok(())
    }
}

/// Writes r_k = [mean(x^{2k}) / (2k-1)!!]^{1/(2k)} for k = 1..=kappa into `out`.
///
/// Powers are taken of x / max|x| so that heavy outliers cannot overflow.
pub(crate) fn normalized_moment_roots(values: &[f64], kappa: u32, out: &mut Vec<f64>) {
    out.clear();
    let scale = values.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        out.resize(kappa as usize, 0.0);
        return;
    }
    out.resize(kappa as usize, 0.0);
    for &x in values {
        let u = (x / scale) * (x / scale);
        let mut p = u;
        for slot in out.iter_mut() {
            *slot += p;
            p *= u;
        }
    }
    let n = values.len() as f64;
    for (j, slot) in out.iter_mut().enumerate() {
        let k = j as u32 + 1;
        let moment = *slot / n / double_factorial_odd_f64(k);
        *slot = scale * moment.powf(0.5 / k as f64);
    }
}

/// First index of the maximum (ties go to the smallest k), 1-based.
pub(crate) fn argmax_first(terms: &[f64]) -> (f64, u32) {
    let mut best = terms[0];
    let mut k_star = 1;
    for (j, &v) in terms.iter().enumerate().skip(1) {
        if v > best {
            best = v;
            k_star = j as u32 + 1;
        }
    }
    (best, k_star)
}

/// Median; an even count takes the midpoint of the two central values.
pub(crate) fn median_in_place(xs: &mut [f64]) -> f64 {
    assert!(!xs.is_empty());
    xs.sort_unstable_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Plug-in estimate on values that are already centered.
pub(crate) fn de_on_centered(values: &[f64], kappa_n: u32) -> (f64, u32) {
    let mut terms = Vec::with_capacity(kappa_n as usize);
    normalized_moment_roots(values, kappa_n, &mut terms);
    argmax_first(&terms)
}

/// Median-of-means estimate on centered values already arranged in block order.
pub(crate) fn mom_on_arranged(arranged: &[f64], b: usize, kappa_n: u32) -> (f64, u32) {
    if b == 1 {
        return de_on_centered(arranged, kappa_n);
    }
    let m = arranged.len() / b;
    let kappa = kappa_n as usize;
    let mut per_block = vec![0.0; b * kappa];
    let mut terms = Vec::with_capacity(kappa);
    for (s, block) in arranged.chunks_exact(m).take(b).enumerate() {
        normalized_moment_roots(block, kappa_n, &mut terms);
        for (j, &t) in terms.iter().enumerate() {
            per_block[j * b + s] = t;
        }
    }
    let medians: Vec<f64> = per_block.chunks_exact_mut(b).map(median_in_place).collect();
    argmax_first(&medians)
}

/// Full-sample plug-in estimator of the intrinsic moment norm.
pub fn de_estimate(sample: &Sample, kappa_n: u32) -> Result<NormEstimate> {
    check_kappa(kappa_n)?;
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let (value, k_star) = de_on_centered(&sample.centered(), kappa_n);
    Ok(NormEstimate {
        value,
        method: Method::De,
        k_star,
        kappa_n,
        block: None,
        seed: None,
    })
}

/// Median-of-means estimator over `b` blocks of a seeded shuffle.
///
/// Data are centered once with the global mean; the last `n mod b`
/// shuffled observations are dropped.
pub fn mom_estimate(sample: &Sample, b: usize, kappa_n: u32, seed: u64) -> Result<NormEstimate> {
    let cfg = BlockConfig::new(sample.len(), b, seed)?;
    mom_with_blocks(sample, cfg, kappa_n)
}

/// Median-of-means estimator with an explicit block configuration.
pub fn mom_with_blocks(sample: &Sample, cfg: BlockConfig, kappa_n: u32) -> Result<NormEstimate> {
    check_kappa(kappa_n)?;
    if cfg.b == 0 || cfg.m == 0 || cfg.b * cfg.m > sample.len() {
        return Err(invalid(
            "block",
            format!("b={} m={} does not fit n={}", cfg.b, cfg.m, sample.len()),
        ));
    }
    let arranged = cfg.arrange(&sample.centered());
    let (value, k_star) = mom_on_arranged(&arranged, cfg.b, kappa_n);
    Ok(NormEstimate {
        value,
        method: Method::Mom,
        k_star,
        kappa_n,
        block: Some(cfg),
        seed: match cfg.assignment {
            Assignment::Identity => None,
            Assignment::Shuffled { seed } => Some(seed),
        },
    })
}
