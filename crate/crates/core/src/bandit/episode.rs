use rand::RngCore;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::env::BanditEnv;
use super::policy::{
    beucb_norm, beucb_phi, quantile_rank, ucb_assemble, thompson_choose, GaussianPosterior, PolicyKind, PolicySpec,
};
use super::argmax_lowest;
use crate::error::{invalid, Result};
use crate::estimators::default_t_grid;
use crate::seed::{derive_seed, rng_from_seed};
use crate::special::inverse_normal_cdf;

/// Outcome of one bandit episode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    /// Entry t is the regret accumulated over rounds 1..=t+1.
    pub cumulative_regret: Vec<f64>,
    pub pulls_per_arm: Vec<usize>,
    pub seed: u64,
}

/// Running statistics of one arm, kept incrementally so that each pull
/// costs O(B + T_k) for BeUCB and O(1) or O(grid) for the baselines.
struct Tracker {
    rewards: Vec<f64>,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
    /// ln sum_i exp(t y_i) per grid point (OP baseline).
    log_mgf: Vec<f64>,
    /// Per bootstrap replicate: sum_i w_i y_i and sum_i w_i (UCB policies).
    weighted_sum: Vec<f64>,
    weight_total: Vec<f64>,
    posterior: GaussianPosterior,
}

impl Tracker {
    fn new(spec: &PolicySpec, grid_len: usize) -> Self {
        let reps = if spec.kind == PolicyKind::Thompson { 0 } else { spec.bootstrap_reps };
        Self {
            rewards: Vec::new(),
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
            log_mgf: vec![f64::NEG_INFINITY; grid_len],
            weighted_sum: vec![0.0; reps],
            weight_total: vec![0.0; reps],
            posterior: GaussianPosterior::from_prior(spec.prior_var),
        }
    }

    fn pulls(&self) -> usize {
        self.rewards.len()
    }

    fn push(&mut self, y: f64, grid: &[f64], rng: &mut ChaCha8Rng) {
        self.rewards.push(y);
        let n = self.rewards.len() as f64;
        let delta = y - self.mean;
        self.mean += delta / n;
        self.m2 += delta * (y - self.mean);
        self.min = self.min.min(y);
        self.max = self.max.max(y);
        for (l, &t) in self.log_mgf.iter_mut().zip(grid) {
            let v = t * y;
            *l = if *l >= v {
                *l + (v - *l).exp().ln_1p()
            } else {
                v + (*l - v).exp().ln_1p()
            };
        }
        // One fresh Rademacher weight per replicate for the new observation.
        let mut bits = 0u64;
        for (b, (s, w)) in self.weighted_sum.iter_mut().zip(self.weight_total.iter_mut()).enumerate() {
            if b % 64 == 0 {
                bits = rng.next_u64();
            }
            if bits & 1 == 1 {
                *s += y;
                *w += 1.0;
            } else {
                *s -= y;
                *w -= 1.0;
            }
            bits >>= 1;
        }
        self.posterior.update(y);
    }

    fn sd(&self) -> f64 {
        (self.m2.max(0.0) / self.pulls() as f64).sqrt()
    }

    /// Bootstrap quantile of the centered mean at exceedance level `level`.
    fn bootstrap_quantile(&self, level: f64, scratch: &mut Vec<f64>) -> f64 {
        let n = self.pulls() as f64;
        scratch.clear();
        scratch.extend(
            self.weighted_sum
                .iter()
                .zip(&self.weight_total)
                .map(|(s, w)| (s - self.mean * w) / n),
        );
        let rank = quantile_rank(level, scratch.len());
        *scratch.select_nth_unstable_by(rank - 1, f64::total_cmp).1
    }

    /// Plug-in optimal variance proxy from the running log-MGF values.
    fn sigma_opt(&self, grid: &[f64]) -> f64 {
        let ln_n = (self.pulls() as f64).ln();
        let best = grid
            .iter()
            .zip(&self.log_mgf)
            .map(|(&t, &l)| 2.0 * (l - ln_n - t * self.mean) / (t * t))
            .fold(0.0f64, f64::max);
        best.sqrt()
    }
}

struct IndexContext {
    alpha: f64,
    clt_quantile: f64,
    grid: Vec<f64>,
}

fn index_of(tracker: &Tracker, spec: &PolicySpec, ctx: &IndexContext, scratch: &mut Vec<f64>) -> f64 {
    let t = tracker.pulls();
    if t < spec.min_pulls.max(2) {
        return f64::INFINITY;
    }
    let tf = t as f64;
    let alpha = ctx.alpha;
    let phi = match spec.kind {
        PolicyKind::Beucb => beucb_phi(beucb_norm(&tracker.rewards, tracker.mean), t, alpha),
        PolicyKind::OpUcb => tracker.sigma_opt(&ctx.grid) * (2.0 * (2.0 / alpha).ln() / tf).sqrt(),
        PolicyKind::CltUcb => tracker.sd() * ctx.clt_quantile / tf.sqrt(),
        PolicyKind::HoeffdingUcb => (tracker.max - tracker.min) * ((2.0 / alpha).ln() / (2.0 * tf)).sqrt(),
        PolicyKind::Thompson => unreachable!("Thompson sampling has no index"),
    };
    let q = tracker.bootstrap_quantile(alpha / 2.0, scratch);
    ucb_assemble(tracker.mean, q, phi, t, alpha)
}

/// Plays `policy` for `horizon` rounds.
///
/// Every arm is first pulled `min_pulls` times in round-robin order; after
/// that the arm with the largest index is pulled (ties to the lowest index).
/// Rewards of arm k come from a stream seeded by the environment, so all
/// policies face the same reward sequence per arm; `seed` drives the
/// policy's own randomness.
pub fn run_episode(env: &BanditEnv, policy: &PolicySpec, horizon: usize, seed: u64) -> Result<RegretTrace> {
    policy.validate()?;
    let k = env.k();
    if horizon < k * policy.min_pulls {
        return Err(invalid(
            "T",
            format!("horizon {horizon} is shorter than the {} initial pulls", k * policy.min_pulls),
        ));
    }
    let alpha = policy.alpha_rule.alpha(horizon);
    let ctx = IndexContext {
        alpha,
        clt_quantile: inverse_normal_cdf(1.0 - alpha / 2.0)?,
        grid: if policy.kind == PolicyKind::OpUcb { default_t_grid() } else { Vec::new() },
    };
    let mut reward_rngs: Vec<ChaCha8Rng> = (0..k).map(|a| rng_from_seed(env.arm_stream_seed(a))).collect();
    let mut policy_rng = rng_from_seed(derive_seed(seed, "policy", 0));
    let mut trackers: Vec<Tracker> = (0..k).map(|_| Tracker::new(policy, ctx.grid.len())).collect();
    let mut index = vec![f64::INFINITY; k];
    let mut scratch = Vec::new();

    let gaps: Vec<f64> = env.means().iter().map(|m| env.best_mean() - m).collect();
    let mut cumulative = Vec::with_capacity(horizon);
    let mut regret = 0.0;
    let warmup = k * policy.min_pulls;
    for round in 0..horizon {
        let arm = if round < warmup {
            round % k
        } else if policy.kind == PolicyKind::Thompson {
            let posteriors: Vec<GaussianPosterior> = trackers.iter().map(|t| t.posterior).collect();
            thompson_choose(&posteriors, &mut policy_rng)
        } else {
            argmax_lowest(&index)
        };
        let y = env.draw(arm, &mut reward_rngs[arm]);
        trackers[arm].push(y, &ctx.grid, &mut policy_rng);
        if policy.kind != PolicyKind::Thompson {
            index[arm] = index_of(&trackers[arm], policy, &ctx, &mut scratch);
        }
        regret += gaps[arm];
        cumulative.push(regret);
    }
    Ok(RegretTrace {
        cumulative_regret: cumulative,
        pulls_per_arm: trackers.iter().map(Tracker::pulls).collect(),
        seed,
    })
}
