//! K-armed bandit harness: contaminated Gaussian environments, the BeUCB
//! index with its baselines and Thompson sampling, and regret experiments.

mod env;
mod episode;
mod experiment;
mod policy;

pub use env::{make_env, BanditEnv, EnvKind, RewardModel};
pub use episode::{run_episode, RegretTrace};
pub use experiment::{run_experiment, Contamination, ExperimentConfig, ExperimentResult, PolicyCurve, PolicyEntry};
pub use policy::{
    baseline_index, baseline_phi, beucb_block_count, beucb_index, bootstrap_quantile, thompson_step, AlphaRule, ArmState,
    BaselineKind, GaussianPosterior, PolicyKind, PolicySpec, DEFAULT_ALPHA, DEFAULT_BOOTSTRAP_REPS,
    THOMPSON_PRIOR_GRID,
};

/// Index of the largest value, lowest index among ties.
pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}
