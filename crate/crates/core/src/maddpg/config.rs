use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-agent prior over actions and hidden-layer widths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSpec {
    /// Target mean action distribution, in action index order.
    pub prior: Vec<f64>,
    pub actor_hidden: Vec<usize>,
    pub critic_hidden: Vec<usize>,
}

impl AgentSpec {
    pub fn new(prior: Vec<f64>, actor_hidden: Vec<usize>, critic_hidden: Vec<usize>) -> Result<Self> {
        let spec = Self {
            prior,
            actor_hidden,
            critic_hidden,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.prior.is_empty() {
            return Err(Error::Config("prior must not be empty".into()));
        }
        if self.prior.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config(format!(
                "prior entries must lie in [0, 1]: {:?}",
                self.prior
            )));
        }
        let sum: f64 = self.prior.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "prior must sum to 1, sums to {sum}: {:?}",
                self.prior
            )));
        }
        if self.actor_hidden.contains(&0) || self.critic_hidden.contains(&0) {
            return Err(Error::Config("hidden layers must be non-empty".into()));
        }
        Ok(())
    }

    /// `M_i`, the length of the prior.
    pub fn action_count(&self) -> usize {
        self.prior.len()
    }

    pub fn actor_layer_sizes(&self, obs_dim: usize) -> Vec<usize> {
        let mut sizes = vec![obs_dim];
        sizes.extend(&self.actor_hidden);
        sizes.push(self.action_count());
        sizes
    }

    /// Own observation followed by every agent's action vector.
    pub fn critic_layer_sizes(&self, obs_dim: usize, joint_action_dim: usize) -> Vec<usize> {
        let mut sizes = vec![obs_dim + joint_action_dim];
        sizes.extend(&self.critic_hidden);
        sizes.push(1);
        sizes
    }
}

/// Exploration noise standard deviation per iteration: linear from
/// `sigma_start` to `sigma_end` over the first `decay_fraction` of the run,
/// then held at `sigma_end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSchedule {
    pub sigma_start: f64,
    pub sigma_end: f64,
    pub decay_fraction: f64,
}

impl Default for NoiseSchedule {
    fn default() -> Self {
        Self {
            sigma_start: 0.5,
            sigma_end: 0.0,
            decay_fraction: 0.8,
        }
    }
}

impl NoiseSchedule {
    pub fn constant(sigma: f64) -> Self {
        Self {
            sigma_start: sigma,
            sigma_end: sigma,
            decay_fraction: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_start >= self.sigma_end && self.sigma_end >= 0.0) {
            return Err(Error::Config(format!(
                "noise needs sigma_start >= sigma_end >= 0, got {} and {}",
                self.sigma_start, self.sigma_end
            )));
        }
        if !(0.0..=1.0).contains(&self.decay_fraction) {
            return Err(Error::Config(format!(
                "decay_fraction must be in [0, 1], got {}",
                self.decay_fraction
            )));
        }
        Ok(())
    }

    /// σ for zero-based `iteration` out of `total`.
    pub fn sigma(&self, iteration: usize, total: usize) -> f64 {
        let horizon = self.decay_fraction * total as f64;
        let progress = iteration as f64;
        if horizon <= 0.0 || progress >= horizon {
            return self.sigma_end;
        }
        self.sigma_start + (self.sigma_end - self.sigma_start) * (progress / horizon)
    }
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerConfig {
    /// Weight of the prior-matching penalty.
    pub lambda: f64,
    pub gamma: f64,
    pub tau: f64,
    pub actor_lr: f64,
    pub critic_lr: f64,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    pub iterations: usize,
    pub steps_per_iteration: usize,
    pub epochs_per_iteration: usize,
    #[serde(default)]
    pub noise: NoiseSchedule,
    pub seed: u64,
    /// Drop the bootstrap term on terminal transitions.
    #[serde(default = "default_true")]
    pub mask_terminal: bool,
    /// `false` runs the plain MADDPG actor objective (no penalty code path).
    #[serde(default = "default_true")]
    pub regularized: bool,
    /// Global gradient-norm cap applied before every SGD step; `None` disables.
    #[serde(default = "default_max_grad_norm")]
    pub max_grad_norm: Option<f64>,
}

pub fn default_max_grad_norm() -> Option<f64> {
    Some(DEFAULT_MAX_GRAD_NORM)
}

pub const DEFAULT_MAX_GRAD_NORM: f64 = 0.5;

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            lambda: 2.0,
            gamma: 0.95,
            tau: 0.06,
            actor_lr: 0.04,
            critic_lr: 0.06,
            batch_size: 256,
            buffer_capacity: 2048,
            iterations: 3000,
            steps_per_iteration: 256,
            epochs_per_iteration: 2,
            noise: NoiseSchedule::default(),
            seed: 0,
            mask_terminal: true,
            regularized: true,
            max_grad_norm: default_max_grad_norm(),
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: String| if ok { Ok(()) } else { Err(Error::Config(msg)) };
        check(
            (0.0..=1.0).contains(&self.gamma),
            format!("gamma must be in [0, 1], got {}", self.gamma),
        )?;
        check(
            self.tau > 0.0 && self.tau <= 1.0,
            format!("tau must be in (0, 1], got {}", self.tau),
        )?;
        check(self.lambda >= 0.0, format!("lambda must be >= 0, got {}", self.lambda))?;
        check(
            self.actor_lr >= 0.0 && self.critic_lr >= 0.0,
            "learning rates must be >= 0".into(),
        )?;
        for (name, v) in [
            ("batch_size", self.batch_size),
            ("buffer_capacity", self.buffer_capacity),
            ("iterations", self.iterations),
            ("steps_per_iteration", self.steps_per_iteration),
            ("epochs_per_iteration", self.epochs_per_iteration),
        ] {
            check(v >= 1, format!("{name} must be >= 1"))?;
        }
        if let Some(max) = self.max_grad_norm {
            check(
                max > 0.0 && max.is_finite(),
                format!("max_grad_norm must be positive, got {max}"),
            )?;
        }
        self.noise.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prior_validation() {
        assert!(AgentSpec::new(vec![0.0, 0.6, 0.4], vec![8], vec![8]).is_ok());
        assert!(AgentSpec::new(vec![0.5, 0.6, 0.0], vec![8], vec![8]).is_err());
        assert!(AgentSpec::new(vec![-0.1, 0.6, 0.5], vec![8], vec![8]).is_err());
        assert!(AgentSpec::new(vec![], vec![8], vec![8]).is_err());
    }

    #[test]
    fn layer_sizes() {
        let spec = AgentSpec::new(vec![0.0, 0.6, 0.4], vec![700, 700], vec![700, 700]).unwrap();
        assert_eq!(spec.action_count(), 3);
        assert_eq!(spec.actor_layer_sizes(2), vec![2, 700, 700, 3]);
        assert_eq!(spec.critic_layer_sizes(2, 6), vec![8, 700, 700, 1]);
    }

    #[test]
    fn noise_decays_linearly_then_stops() {
        let s = NoiseSchedule::default();
        assert_eq!(s.sigma(0, 100), 0.5);
        assert!((s.sigma(40, 100) - 0.25).abs() < 1e-12);
        assert_eq!(s.sigma(80, 100), 0.0);
        assert_eq!(s.sigma(99, 100), 0.0);
        assert_eq!(NoiseSchedule::constant(0.2).sigma(7, 10), 0.2);
    }

    #[test]
    fn config_validation() {
        assert!(TrainerConfig::default().validate().is_ok());
        let bad = [
            TrainerConfig { gamma: 1.5, ..Default::default() },
            TrainerConfig { tau: 0.0, ..Default::default() },
            TrainerConfig { lambda: -1.0, ..Default::default() },
            TrainerConfig { batch_size: 0, ..Default::default() },
            TrainerConfig {
                noise: NoiseSchedule { sigma_start: 0.1, sigma_end: 0.2, decay_fraction: 0.5 },
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }
}
