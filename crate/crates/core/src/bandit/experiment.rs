use serde::{Deserialize, Serialize};

use super::env::{make_env, BanditEnv, EnvKind};
use super::episode::{run_episode, RegretTrace};
use super::policy::{AlphaRule, PolicyKind, PolicySpec, THOMPSON_PRIOR_GRID};
use crate::error::{Error, Result};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contamination {
    pub prob: f64,
    pub scale: f64,
}

impl Default for Contamination {
    fn default() -> Self {
        Self { prob: 0.0, scale: 1.0 }
    }
}

/// A policy entry: either a bare kind name or an object with overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolicyEntry {
    Kind(PolicyKind),
    Detailed {
        kind: PolicyKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<AlphaRule>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bootstrap_reps: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_pulls: Option<usize>,
        /// Thompson prior variance; tuned over the standard grid when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prior_var: Option<f64>,
    },
}

/// Replication sweep over several policies on freshly drawn environments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub env: EnvKind,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub policies: Vec<PolicyEntry>,
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub contamination: Contamination,
    /// Default confidence rule for every policy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap_reps: Option<usize>,
    /// Fixed unit-variance Gaussian arm means instead of Exp(1) draws.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm_means: Option<Vec<f64>>,
}

/// A resolved policy: its label, spec, and whether the Thompson prior is tuned.
#[derive(Debug, Clone, PartialEq)]
struct Resolved {
    label: String,
    spec: PolicySpec,
    tune_prior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyCurve {
    pub label: String,
    pub kind: PolicyKind,
    pub mean_regret: Vec<f64>,
    pub se_regret: Vec<f64>,
    pub final_regrets: Vec<f64>,
    /// Thompson prior variance used (the tuned one when tuning applied).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prior_var: Option<f64>,
}

impl PolicyCurve {
    pub fn final_mean(&self) -> f64 {
        *self.mean_regret.last().expect("non-empty horizon")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub curves: Vec<PolicyCurve>,
}

impl ExperimentResult {
    pub fn curve(&self, label: &str) -> Option<&PolicyCurve> {
        self.curves.iter().find(|c| c.label == label)
    }
}

impl ExperimentConfig {
    fn resolve(&self) -> Result<Vec<Resolved>> {
        let mut out: Vec<Resolved> = Vec::new();
        for entry in &self.policies {
            let (kind, label, alpha, reps, min_pulls, prior) = match entry {
                PolicyEntry::Kind(kind) => (*kind, None, None, None, None, None),
                PolicyEntry::Detailed {
                    kind,
                    label,
                    alpha,
                    bootstrap_reps,
                    min_pulls,
                    prior_var,
                } => (*kind, label.clone(), *alpha, *bootstrap_reps, *min_pulls, *prior_var),
            };
            let mut spec = PolicySpec::new(kind);
            if let Some(a) = alpha.or(self.alpha) {
                spec.alpha_rule = a;
            }
            if let Some(b) = reps.or(self.bootstrap_reps) {
                spec.bootstrap_reps = b;
            }
            if let Some(m) = min_pulls {
                spec.min_pulls = m;
            }
            if let Some(p) = prior {
                spec.prior_var = p;
            }
            spec.validate()?;
            let label = label.unwrap_or_else(|| match (kind, prior) {
                (PolicyKind::Thompson, Some(p)) => format!("THOMPSON(prior_var={p})"),
                _ => kind.name().to_string(),
            });
            if out.iter().any(|r| r.label == label) {
                return Err(Error::InvalidConfig(format!("duplicate policy label `{label}`")));
            }
            out.push(Resolved {
                label,
                spec,
                tune_prior: kind == PolicyKind::Thompson && prior.is_none(),
            });
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.k < 2 {
            return bad(format!("K must be at least 2, got {}", self.k));
        }
        if self.replications == 0 {
            return bad("replications must be positive".into());
        }
        if self.policies.is_empty() {
            return bad("policies must not be empty".into());
        }
        if !(0.0..1.0).contains(&self.contamination.prob) {
            return bad(format!("contamination.prob must lie in [0, 1), got {}", self.contamination.prob));
        }
        if !(self.contamination.scale > 0.0) {
            return bad("contamination.scale must be positive".into());
        }
        if let Some(means) = &self.arm_means {
            if means.len() != self.k {
                return bad(format!("arm_means has {} entries but K = {}", means.len(), self.k));
            }
            if means.iter().any(|m| !m.is_finite()) {
                return bad("arm_means must be finite".into());
            }
        }
        for r in self.resolve()? {
            if self.horizon < self.k * r.spec.min_pulls {
                return bad(format!(
                    "T = {} is below the {} initial pulls of {}",
                    self.horizon,
                    self.k * r.spec.min_pulls,
                    r.label
                ));
            }
        }
        Ok(())
    }

    /// Environment of replication `rep`.
    pub fn environment(&self, rep: usize) -> Result<BanditEnv> {
        let seed = derive_seed(self.master_seed, "env", rep as u64);
        let c = self.contamination;
        match &self.arm_means {
            Some(means) => BanditEnv::from_means(means, c.prob, c.scale, seed),
            None => make_env(self.env, self.k, c.prob, c.scale, seed),
        }
    }
}

/// Per-round mean and standard error across traces.
fn aggregate(traces: &[RegretTrace], horizon: usize) -> (Vec<f64>, Vec<f64>) {
    let r = traces.len() as f64;
    let mut mean = vec![0.0; horizon];
    let mut se = vec![0.0; horizon];
    for t in 0..horizon {
        let m = traces.iter().map(|tr| tr.cumulative_regret[t]).sum::<f64>() / r;
        mean[t] = m;
        if traces.len() > 1 {
            let var = traces
                .iter()
                .map(|tr| (tr.cumulative_regret[t] - m).powi(2))
                .sum::<f64>()
                / (r - 1.0);
            se[t] = (var / r).sqrt();
        }
    }
    (mean, se)
}

fn run_policy(config: &ExperimentConfig, envs: &[BanditEnv], label: &str, spec: &PolicySpec) -> Result<Vec<RegretTrace>> {
    envs.iter()
        .enumerate()
        .map(|(rep, env)| {
            let seed = derive_seed(config.master_seed, label, rep as u64);
            run_episode(env, spec, config.horizon, seed)
        })
        .collect()
}

/// Runs every policy on every replication and aggregates regret curves.
///
/// Replication r uses the environment seeded by (master_seed, "env", r) and
/// the policy seed (master_seed, label, r), so a policy's curve does not
/// depend on which other policies are listed or in what order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let envs: Vec<BanditEnv> = (0..config.replications)
        .map(|rep| config.environment(rep))
        .collect::<Result<_>>()?;
    let mut curves = Vec::new();
    for policy in config.resolve()? {
        let (traces, prior_var) = if policy.tune_prior {
            let mut best: Option<(f64, f64, Vec<RegretTrace>)> = None;
            for &prior in &THOMPSON_PRIOR_GRID {
                let mut spec = policy.spec;
                spec.prior_var = prior;
                let traces = run_policy(config, &envs, &policy.label, &spec)?;
                let final_mean =
                    traces.iter().map(|t| *t.cumulative_regret.last().unwrap()).sum::<f64>() / traces.len() as f64;
                if best.as_ref().is_none_or(|b| final_mean < b.0) {
                    best = Some((final_mean, prior, traces));
                }
            }
            let (_, prior, traces) = best.expect("non-empty prior grid");
            (traces, Some(prior))
        } else {
            let prior = (policy.spec.kind == PolicyKind::Thompson).then_some(policy.spec.prior_var);
            (run_policy(config, &envs, &policy.label, &policy.spec)?, prior)
        };
        let (mean_regret, se_regret) = aggregate(&traces, config.horizon);
        curves.push(PolicyCurve {
            label: policy.label,
            kind: policy.spec.kind,
            mean_regret,
            se_regret,
            final_regrets: traces.iter().map(|t| *t.cumulative_regret.last().unwrap()).collect(),
            prior_var,
        });
    }
    Ok(ExperimentResult { curves })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(policies: Vec<PolicyEntry>) -> ExperimentConfig {
        ExperimentConfig {
            env: EnvKind::EG1,
            k: 3,
            horizon: 200,
            policies,
            replications: 3,
            master_seed: 17,
            contamination: Contamination { prob: 0.1, scale: 0.5 },
            alpha: None,
            bootstrap_reps: None,
            arm_means: None,
        }
    }

    #[test]
    fn parses_json_config() {
        let json = r#"{
            "env": "EG1", "K": 10, "T": 1000, "replications": 2, "master_seed": 3,
            "policies": ["BEUCB", "CLT_UCB", {"kind": "THOMPSON", "prior_var": 2.0}],
            "contamination": {"prob": 0.15, "scale": 0.01},
            "alpha": {"fixed": 0.05}
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.k, 10);
        assert_eq!(cfg.alpha, Some(AlphaRule::Fixed(0.05)));
        cfg.validate().unwrap();
        let labels: Vec<String> = cfg.resolve().unwrap().into_iter().map(|r| r.label).collect();
        assert_eq!(labels, ["BEUCB", "CLT_UCB", "THOMPSON(prior_var=2)"]);
        let bad = r#"{"env": "EG1", "K": 10, "T": 1000, "replications": 2, "policies": [], "extra": 1}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(bad).is_err());
    }

    #[test]
    fn validation_failures() {
        let mut c = config(vec![PolicyEntry::Kind(PolicyKind::Beucb)]);
        c.k = 1;
        assert!(run_experiment(&c).is_err());
        let mut c = config(vec![PolicyEntry::Kind(PolicyKind::Beucb), PolicyEntry::Kind(PolicyKind::Beucb)]);
        assert!(c.validate().is_err());
        c.policies.pop();
        c.horizon = 5;
        assert!(c.validate().is_err());
        let mut c = config(vec![PolicyEntry::Kind(PolicyKind::Beucb)]);
        c.arm_means = Some(vec![1.0]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn single_replication_equals_episode() {
        let mut c = config(vec![PolicyEntry::Kind(PolicyKind::CltUcb)]);
        c.replications = 1;
        let res = run_experiment(&c).unwrap();
        let env = c.environment(0).unwrap();
        let spec = PolicySpec::new(PolicyKind::CltUcb);
        let trace = run_episode(&env, &spec, c.horizon, derive_seed(c.master_seed, "CLT_UCB", 0)).unwrap();
        assert_eq!(res.curves[0].mean_regret, trace.cumulative_regret);
        assert!(res.curves[0].se_regret.iter().all(|s| *s == 0.0));
    }

    #[test]
    fn policy_order_does_not_matter() {
        let a = run_experiment(&config(vec![
            PolicyEntry::Kind(PolicyKind::Beucb),
            PolicyEntry::Kind(PolicyKind::HoeffdingUcb),
        ]))
        .unwrap();
        let b = run_experiment(&config(vec![
            PolicyEntry::Kind(PolicyKind::HoeffdingUcb),
            PolicyEntry::Kind(PolicyKind::Beucb),
        ]))
        .unwrap();
        for curve in &a.curves {
            assert_eq!(Some(curve), b.curve(&curve.label));
        }
    }

    #[test]
    fn thompson_tuning_picks_from_grid() {
        let res = run_experiment(&config(vec![PolicyEntry::Kind(PolicyKind::Thompson)])).unwrap();
        let prior = res.curves[0].prior_var.unwrap();
        assert!(THOMPSON_PRIOR_GRID.contains(&prior));
    }
}
