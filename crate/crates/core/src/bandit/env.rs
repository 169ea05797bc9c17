use rand::Rng;
use rand_distr::{Cauchy, Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::seed::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnvKind {
    /// Unit-variance Gaussian rewards.
    EG1,
    /// Two-component Gaussian mixture rewards with the arm mean preserved.
    EG2,
}

/// Reward distribution of a single arm (before contamination).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RewardModel {
    Gaussian { mean: f64, sd: f64 },
    /// p N(high, sd^2) + (1-p) N(low, sd^2)
    Mixture { p: f64, high: f64, low: f64, sd: f64 },
}

impl RewardModel {
    pub fn mean(&self) -> f64 {
        match *self {
            RewardModel::Gaussian { mean, .. } => mean,
            RewardModel::Mixture { p, high, low, .. } => p * high + (1.0 - p) * low,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        match *self {
            RewardModel::Gaussian { mean, sd } => mean + sd * z,
            RewardModel::Mixture { p, high, low, sd } => {
                let center = if rng.random::<f64>() < p { high } else { low };
                center + sd * z
            }
        }
    }

    /// Mixture with weight p on N(2 mu, 1) and the other component placed so
    /// that the mean stays mu.
    pub fn eg2(mu: f64, p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid("p", format!("must lie in (0, 1), got {p}")));
        }
        let model = RewardModel::Mixture {
            p,
            high: 2.0 * mu,
            low: (1.0 - 2.0 * p) / (1.0 - p) * mu,
            sd: 1.0,
        };
        let drift = (model.mean() - mu).abs();
        assert!(drift <= 1e-12 * mu.abs().max(1.0), "mixture mean drifted by {drift}");
        Ok(model)
    }
}

/// A K-armed environment with optional heavy-tailed contamination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditEnv {
    arms: Vec<RewardModel>,
    means: Vec<f64>,
    best: usize,
    contamination_prob: f64,
    cauchy_scale: f64,
    seed: u64,
}

impl BanditEnv {
    pub fn new(arms: Vec<RewardModel>, contamination_prob: f64, cauchy_scale: f64, seed: u64) -> Result<Self> {
        if arms.len() < 2 {
            return Err(invalid("K", "need at least 2 arms"));
        }
        if !(0.0..1.0).contains(&contamination_prob) {
            return Err(invalid("contamination_prob", "must lie in [0, 1)"));
        }
        if !(cauchy_scale > 0.0 && cauchy_scale.is_finite()) {
            return Err(invalid("cauchy_scale", "must be positive"));
        }
        let means: Vec<f64> = arms.iter().map(RewardModel::mean).collect();
        if means.iter().any(|m| !m.is_finite()) {
            return Err(invalid("arms", "means must be finite"));
        }
        let best = crate::bandit::argmax_lowest(&means);
        Ok(Self {
            arms,
            means,
            best,
            contamination_prob,
            cauchy_scale,
            seed,
        })
    }

    /// Unit-variance Gaussian arms with the given means.
    pub fn from_means(means: &[f64], contamination_prob: f64, cauchy_scale: f64, seed: u64) -> Result<Self> {
        let arms = means.iter().map(|&mean| RewardModel::Gaussian { mean, sd: 1.0 }).collect();
        Self::new(arms, contamination_prob, cauchy_scale, seed)
    }

    pub fn arms(&self) -> &[RewardModel] {
        &self.arms
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn k(&self) -> usize {
        self.arms.len()
    }

    pub fn best_arm(&self) -> usize {
        self.best
    }

    pub fn best_mean(&self) -> f64 {
        self.means[self.best]
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn contamination_prob(&self) -> f64 {
        self.contamination_prob
    }

    pub fn cauchy_scale(&self) -> f64 {
        self.cauchy_scale
    }

    /// One reward from `arm`: with probability `contamination_prob` an
    /// independent Cauchy(0, scale) value replaces the clean draw.
    pub fn draw<R: Rng + ?Sized>(&self, arm: usize, rng: &mut R) -> f64 {
        if self.contamination_prob > 0.0 && rng.random::<f64>() < self.contamination_prob {
            Cauchy::new(0.0, self.cauchy_scale)
                .expect("scale validated at construction")
                .sample(rng)
        } else {
            self.arms[arm].sample(rng)
        }
    }

    /// Seed of the reward stream for `arm`; shared by every policy run on
    /// this environment.
    pub(crate) fn arm_stream_seed(&self, arm: usize) -> u64 {
        derive_seed(self.seed, "arm-rewards", arm as u64)
    }
}

/// Environment with means drawn i.i.d. from Exp(1) (and mixture weights from
/// U(0, 1/2) for EG2).
pub fn make_env(kind: EnvKind, k: usize, contamination_prob: f64, cauchy_scale: f64, seed: u64) -> Result<BanditEnv> {
    if k < 2 {
        return Err(invalid("K", "need at least 2 arms"));
    }
    let mut rng = rng_from_seed(derive_seed(seed, "arm-means", 0));
    let arms = (0..k)
        .map(|_| {
            let mu: f64 = Exp1.sample(&mut rng);
            match kind {
                EnvKind::EG1 => Ok(RewardModel::Gaussian { mean: mu, sd: 1.0 }),
                EnvKind::EG2 => {
                    // U(0, 1/2], avoiding p = 0.
                    let p = 0.5 * (1.0 - rng.random::<f64>());
                    RewardModel::eg2(mu, p)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    BanditEnv::new(arms, contamination_prob, cauchy_scale, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eg2_preserves_means() {
        for &(mu, p) in &[(0.3, 0.1), (2.5, 0.49), (1e-3, 0.25), (7.0, 1e-6)] {
            let m = RewardModel::eg2(mu, p).unwrap();
            assert!((m.mean() - mu).abs() <= 1e-12 * mu.max(1.0));
        }
        let env = make_env(EnvKind::EG2, 8, 0.0, 1.0, 5).unwrap();
        for (arm, &mean) in env.arms().iter().zip(env.means()) {
            assert!((arm.mean() - mean).abs() < 1e-12);
        }
    }

    #[test]
    fn make_env_is_reproducible() {
        let a = make_env(EnvKind::EG1, 10, 0.15, 0.01, 42).unwrap();
        let b = make_env(EnvKind::EG1, 10, 0.15, 0.01, 42).unwrap();
        assert_eq!(a, b);
        let c = make_env(EnvKind::EG1, 10, 0.15, 0.01, 43).unwrap();
        assert_ne!(a.means(), c.means());
        assert!(a.means().iter().all(|m| *m > 0.0));
        assert_eq!(a.best_mean(), a.means().iter().copied().fold(f64::MIN, f64::max));
    }

    #[test]
    fn validation() {
        assert!(make_env(EnvKind::EG1, 1, 0.0, 1.0, 0).is_err());
        assert!(BanditEnv::from_means(&[0.0, 1.0], 1.0, 1.0, 0).is_err());
        assert!(BanditEnv::from_means(&[0.0, 1.0], 0.1, 0.0, 0).is_err());
    }

    #[test]
    fn zero_contamination_gives_clean_rewards() {
        let env = BanditEnv::from_means(&[0.0, 0.0], 0.0, 1e6, 0).unwrap();
        let mut rng = rng_from_seed(1);
        // Without contamination a unit normal never exceeds 10 in 1e4 draws.
        assert!((0..10_000).all(|_| env.draw(0, &mut rng).abs() < 10.0));
    }
}
