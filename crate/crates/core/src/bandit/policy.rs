use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimators::{default_t_grid, kappa_policy, mom_on_arranged, sigma_opt_plugin};
use crate::sample::Sample;
use crate::seed::rng_from_seed;
use crate::special::inverse_normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PolicyKind {
    Beucb,
    OpUcb,
    CltUcb,
    HoeffdingUcb,
    Thompson,
}

impl PolicyKind {
    pub fn name(&self) -> &'static str {
        match self {
            PolicyKind::Beucb => "BEUCB",
            PolicyKind::OpUcb => "OP_UCB",
            PolicyKind::CltUcb => "CLT_UCB",
            PolicyKind::HoeffdingUcb => "HOEFFDING_UCB",
            PolicyKind::Thompson => "THOMPSON",
        }
    }
}

/// Confidence level schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    Fixed(f64),
    /// alpha = 4 / T^2 for horizon T.
    Theorem,
}

impl AlphaRule {
    pub fn alpha(&self, horizon: usize) -> f64 {
        match *self {
            AlphaRule::Fixed(a) => a,
            AlphaRule::Theorem => (4.0 / (horizon as f64 * horizon as f64)).min(0.5),
        }
    }
}

/// Prior variances tried when tuning Thompson sampling: 2^3, ..., 2^-2.
pub const THOMPSON_PRIOR_GRID: [f64; 6] = [8.0, 4.0, 2.0, 1.0, 0.5, 0.25];

pub const DEFAULT_BOOTSTRAP_REPS: usize = 500;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub alpha_rule: AlphaRule,
    pub bootstrap_reps: usize,
    pub min_pulls: usize,
    /// Thompson prior variance.
    pub prior_var: f64,
}

impl PolicySpec {
    /// Defaults: alpha 0.05, 500 bootstrap replicates, two initial pulls per
    /// arm (one for Thompson), unit prior variance.
    pub fn new(kind: PolicyKind) -> Self {
        Self {
            kind,
            alpha_rule: AlphaRule::Fixed(DEFAULT_ALPHA),
            bootstrap_reps: DEFAULT_BOOTSTRAP_REPS,
            min_pulls: if kind == PolicyKind::Thompson { 1 } else { 2 },
            prior_var: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let AlphaRule::Fixed(a) = self.alpha_rule {
            if !(a > 0.0 && a < 1.0) {
                return Err(invalid("alpha", format!("must lie in (0, 1), got {a}")));
            }
        }
        match self.kind {
            PolicyKind::Beucb => {
                if self.bootstrap_reps < 100 {
                    return Err(invalid("bootstrap_reps", "BeUCB needs at least 100 replicates"));
                }
                if self.min_pulls < 2 {
                    return Err(invalid("min_pulls", "BeUCB needs at least 2 initial pulls"));
                }
            }
            PolicyKind::OpUcb | PolicyKind::CltUcb | PolicyKind::HoeffdingUcb => {
                if self.bootstrap_reps == 0 {
                    return Err(invalid("bootstrap_reps", "must be positive"));
                }
                if self.min_pulls < 2 {
                    return Err(invalid("min_pulls", "baseline widths need at least 2 pulls"));
                }
            }
            PolicyKind::Thompson => {
                if !(self.prior_var > 0.0 && self.prior_var.is_finite()) {
                    return Err(invalid("prior_var", "must be positive"));
                }
                if self.min_pulls == 0 {
                    return Err(invalid("min_pulls", "must be at least 1"));
                }
            }
        }
        Ok(())
    }
}

/// Reward history of one arm.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ArmState {
    pub rewards: Vec<f64>,
}

impl ArmState {
    pub fn new(rewards: Vec<f64>) -> Self {
        Self { rewards }
    }

    pub fn pulls(&self) -> usize {
        self.rewards.len()
    }

    pub fn mean(&self) -> f64 {
        self.rewards.iter().sum::<f64>() / self.rewards.len() as f64
    }
}

/// Position (1-based) of the bootstrap quantile among `reps` sorted replicates.
pub(crate) fn quantile_rank(alpha: f64, reps: usize) -> usize {
    (((1.0 - alpha) * reps as f64).ceil() as usize).clamp(1, reps)
}

/// Multiplier bootstrap quantile of the centered mean with Rademacher weights:
/// the ceil((1-alpha) B)-th smallest of B replicates n^-1 sum w_i (Y_i - Ybar).
pub fn bootstrap_quantile(data: &[f64], alpha: f64, reps: usize, seed: u64) -> Result<f64> {
    if data.len() < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            got: data.len(),
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    if reps == 0 {
        return Err(invalid("B", "must be positive"));
    }
    let n = data.len() as f64;
    let mean = data.iter().sum::<f64>() / n;
    let mut rng = rng_from_seed(seed);
    let mut replicates: Vec<f64> = (0..reps)
        .map(|_| {
            data.iter()
                .map(|y| if rng.random::<bool>() { y - mean } else { mean - y })
                .sum::<f64>()
                / n
        })
        .collect();
    let rank = quantile_rank(alpha, reps);
    let (_, q, _) = replicates.select_nth_unstable_by(rank - 1, f64::total_cmp);
    Ok(*q)
}

/// Number of MOM blocks for an arm pulled `pulls` times: 2 ceil(ln T), within [1, T].
pub fn beucb_block_count(pulls: usize) -> usize {
    let b = 2 * (pulls as f64).ln().ceil() as usize;
    b.clamp(1, pulls.max(1))
}

/// MOM norm of the arm's rewards centered by their running mean, with
/// blocks taken in arrival order.
pub(crate) fn beucb_norm(rewards: &[f64], mean: f64) -> f64 {
    let t = rewards.len();
    let b = beucb_block_count(t);
    let used = (t / b) * b;
    let centered: Vec<f64> = rewards[..used].iter().map(|y| y - mean).collect();
    mom_on_arranged(&centered, b, kappa_policy(t)).0
}

/// Ybar + q_{alpha/2} + sqrt(2 ln(4/alpha) / T) * phi, the index shared by
/// BeUCB and the baselines, which differ only in phi.
pub(crate) fn ucb_assemble(mean: f64, quantile: f64, phi: f64, pulls: usize, alpha: f64) -> f64 {
    mean + quantile + (2.0 * (4.0 / alpha).ln() / pulls as f64).sqrt() * phi
}

/// phi_G = sqrt(2 ln(4/alpha)) / (sqrt T - 1) * norm.
pub(crate) fn beucb_phi(norm: f64, pulls: usize, alpha: f64) -> f64 {
    (2.0 * (4.0 / alpha).ln()).sqrt() / ((pulls as f64).sqrt() - 1.0) * norm
}

fn check_index_args(alpha: f64, spec: &PolicySpec) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    spec.validate()
}

/// BeUCB upper confidence index of an arm; +inf until it has `min_pulls`
/// (at least 2) rewards.
pub fn beucb_index(arm: &ArmState, alpha: f64, spec: &PolicySpec, seed: u64) -> Result<f64> {
    check_index_args(alpha, spec)?;
    let t = arm.pulls();
    if t < spec.min_pulls.max(2) {
        return Ok(f64::INFINITY);
    }
    let mean = arm.mean();
    let q = bootstrap_quantile(&arm.rewards, alpha / 2.0, spec.bootstrap_reps, seed)?;
    let phi = beucb_phi(beucb_norm(&arm.rewards, mean), t, alpha);
    Ok(ucb_assemble(mean, q, phi, t, alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BaselineKind {
    /// Plug-in optimal variance proxy.
    Op,
    /// Normal approximation with the sample standard deviation.
    Clt,
    /// Hoeffding with the observed range.
    Hoeff,
}

/// Width phi of a baseline, used in place of phi_G in the BeUCB index.
pub fn baseline_phi(arm: &ArmState, kind: BaselineKind, alpha: f64) -> Result<f64> {
    let t = arm.pulls();
    if t < 2 {
        return Err(Error::TooFewObservations { required: 2, got: t });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    let tf = t as f64;
    Ok(match kind {
        BaselineKind::Op => {
            let sample = Sample::new(arm.rewards.clone())?;
            let proxy = sigma_opt_plugin(&sample, &default_t_grid())?;
            proxy.scale() * (2.0 * (2.0 / alpha).ln() / tf).sqrt()
        }
        BaselineKind::Clt => {
            let mean = arm.mean();
            let sd = (arm.rewards.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / tf).sqrt();
            sd * inverse_normal_cdf(1.0 - alpha / 2.0)? / tf.sqrt()
        }
        BaselineKind::Hoeff => {
            let (lo, hi) = arm
                .rewards
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| (lo.min(y), hi.max(y)));
            (hi - lo) * ((2.0 / alpha).ln() / (2.0 * tf)).sqrt()
        }
    })
}

/// Upper confidence index of a baseline arm: the BeUCB index with phi_G
/// replaced by the baseline's phi; +inf until `min_pulls` (at least 2) rewards.
pub fn baseline_index(arm: &ArmState, kind: BaselineKind, alpha: f64, spec: &PolicySpec, seed: u64) -> Result<f64> {
    check_index_args(alpha, spec)?;
    let t = arm.pulls();
    if t < spec.min_pulls.max(2) {
        return Ok(f64::INFINITY);
    }
    let q = bootstrap_quantile(&arm.rewards, alpha / 2.0, spec.bootstrap_reps, seed)?;
    Ok(ucb_assemble(arm.mean(), q, baseline_phi(arm, kind, alpha)?, t, alpha))
}

/// Gaussian posterior of an arm mean under unit-variance Gaussian rewards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianPosterior {
    pub mean: f64,
    pub var: f64,
}

impl GaussianPosterior {
    /// Prior N(0, prior_var).
    pub fn from_prior(prior_var: f64) -> Self {
        Self {
            mean: 0.0,
            var: prior_var,
        }
    }

    /// Conjugate update with one unit-variance observation.
    pub fn update(&mut self, reward: f64) {
        let precision = 1.0 / self.var + 1.0;
        self.mean = (self.mean / self.var + reward) / precision;
        self.var = 1.0 / precision;
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        self.mean + self.var.sqrt() * z
    }
}

pub(crate) fn thompson_choose<R: Rng + ?Sized>(posteriors: &[GaussianPosterior], rng: &mut R) -> usize {
    let draws: Vec<f64> = posteriors.iter().map(|p| p.draw(rng)).collect();
    super::argmax_lowest(&draws)
}

/// One Thompson sampling decision: a posterior draw per arm, then the argmax.
pub fn thompson_step(posteriors: &[GaussianPosterior], seed: u64) -> Result<usize> {
    if posteriors.is_empty() {
        return Err(invalid("posteriors", "need at least one arm"));
    }
    Ok(thompson_choose(posteriors, &mut rng_from_seed(seed)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_rank_convention() {
        assert_eq!(quantile_rank(0.25, 4), 3);
        assert_eq!(quantile_rank(0.05, 500), 475);
        assert_eq!(quantile_rank(0.999, 100), 1);
        assert_eq!(quantile_rank(1e-9, 100), 100);
    }

    #[test]
    fn bootstrap_constant_data_is_zero() {
        for alpha in [0.01, 0.5, 0.99] {
            assert_eq!(bootstrap_quantile(&[3.0; 10], alpha, 200, 1).unwrap(), 0.0);
        }
        assert!(bootstrap_quantile(&[1.0], 0.1, 10, 0).is_err());
    }

    #[test]
    fn block_count_rule() {
        assert_eq!(beucb_block_count(1), 1);
        assert_eq!(beucb_block_count(2), 2);
        assert_eq!(beucb_block_count(3), 3);
        assert_eq!(beucb_block_count(10), 6);
        assert_eq!(beucb_block_count(1000), 14);
    }

    #[test]
    fn beucb_guard_and_constant_rewards() {
        let spec = PolicySpec::new(PolicyKind::Beucb);
        assert_eq!(beucb_index(&ArmState::new(vec![1.0]), 0.05, &spec, 0).unwrap(), f64::INFINITY);
        let arm = ArmState::new(vec![2.0; 50]);
        assert_eq!(beucb_index(&arm, 0.05, &spec, 0).unwrap(), 2.0);
    }

    #[test]
    fn baseline_examples() {
        let arm = ArmState::new(vec![0.0, 1.0]);
        let h = baseline_phi(&arm, BaselineKind::Hoeff, 0.05).unwrap();
        assert!((h - 0.960_322_791_319_920_8).abs() < 1e-12);
        let c = baseline_phi(&arm, BaselineKind::Clt, 0.05).unwrap();
        assert!((c - 0.5 * 1.959_963_984_540_054 / 2f64.sqrt()).abs() < 1e-9);
        let flat = ArmState::new(vec![4.0; 5]);
        assert_eq!(baseline_phi(&flat, BaselineKind::Clt, 0.05).unwrap(), 0.0);
        assert_eq!(baseline_phi(&flat, BaselineKind::Hoeff, 0.05).unwrap(), 0.0);
        assert_eq!(baseline_phi(&flat, BaselineKind::Op, 0.05).unwrap(), 0.0);
        assert!(baseline_phi(&ArmState::new(vec![1.0]), BaselineKind::Clt, 0.05).is_err());
    }

    #[test]
    fn baseline_index_guard_and_constant_rewards() {
        for (kind, base) in [
            (PolicyKind::OpUcb, BaselineKind::Op),
            (PolicyKind::CltUcb, BaselineKind::Clt),
            (PolicyKind::HoeffdingUcb, BaselineKind::Hoeff),
        ] {
            let spec = PolicySpec::new(kind);
            let one = ArmState::new(vec![1.0]);
            assert_eq!(baseline_index(&one, base, 0.05, &spec, 0).unwrap(), f64::INFINITY);
            let flat = ArmState::new(vec![-1.5; 30]);
            assert_eq!(baseline_index(&flat, base, 0.05, &spec, 0).unwrap(), -1.5);
        }
    }

    #[test]
    fn thompson_examples() {
        let single = [GaussianPosterior::from_prior(1.0)];
        for seed in 0..10 {
            assert_eq!(thompson_step(&single, seed).unwrap(), 0);
        }
        let sharp = [
            GaussianPosterior { mean: 0.3, var: 1e-30 },
            GaussianPosterior { mean: 0.9, var: 1e-30 },
            GaussianPosterior { mean: 0.5, var: 1e-30 },
        ];
        for seed in 0..10 {
            assert_eq!(thompson_step(&sharp, seed).unwrap(), 1);
        }
        assert_eq!(THOMPSON_PRIOR_GRID, [2f64.powi(3), 4.0, 2.0, 1.0, 0.5, 2f64.powi(-2)]);
    }

    #[test]
    fn posterior_update_matches_batch_formula() {
        let mut p = GaussianPosterior::from_prior(4.0);
        let ys = [0.5, 1.5, -0.2];
        for y in ys {
            p.update(y);
        }
        let precision = 0.25 + 3.0;
        assert!((p.var - 1.0 / precision).abs() < 1e-15);
        assert!((p.mean - ys.iter().sum::<f64>() / precision).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        let mut s = PolicySpec::new(PolicyKind::Beucb);
        assert!(s.validate().is_ok());
        s.bootstrap_reps = 50;
        assert!(s.validate().is_err());
        let mut s = PolicySpec::new(PolicyKind::Beucb);
        s.min_pulls = 1;
        assert!(s.validate().is_err());
        let mut s = PolicySpec::new(PolicyKind::Thompson);
        s.prior_var = 0.0;
        assert!(s.validate().is_err());
        assert_eq!(AlphaRule::Theorem.alpha(100), 4e-4);
    }
}
