use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridnav::{GridEnv, DEFAULT_GRID_SIZE, DEFAULT_MAX_STEPS};
use crate::maddpg::{default_max_grad_norm, AgentSpec, NoiseSchedule, TrainerConfig};

fn default_grid_size() -> usize {
    DEFAULT_GRID_SIZE
}
fn default_max_steps() -> usize {
    DEFAULT_MAX_STEPS
}
fn default_eval_every() -> usize {
    10
}
fn default_eval_episodes() -> usize {
    20
}
fn default_true() -> bool {
    true
}
fn default_sigma_start() -> f64 {
    0.5
}
fn default_decay_fraction() -> f64 {
    0.8
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}

/// Everything needed to reproduce one training run. Loaded from TOML with
/// one key per hyperparameter and an `[[agents]]` table per agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub label: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_grid_size")]
    pub grid_size: usize,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,

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

    #[serde(default = "default_sigma_start")]
    pub sigma_start: f64,
    #[serde(default)]
    pub sigma_end: f64,
    #[serde(default = "default_decay_fraction")]
    pub sigma_decay_fraction: f64,
    #[serde(default = "default_true")]
    pub mask_terminal: bool,
    #[serde(default = "default_true")]
    pub regularized: bool,
    #[serde(default = "default_max_grad_norm")]
    pub max_grad_norm: Option<f64>,

    #[serde(default = "default_eval_every")]
    pub eval_every: usize,
    #[serde(default = "default_eval_episodes")]
    pub eval_episodes: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,

    pub agents: Vec<AgentSpec>,
}

impl ExperimentConfig {
    /// One agent that never turns left (prior `[0.0, 0.6, 0.4]`), 200-wide nets.
    pub fn single_agent() -> Self {
        let spec = AgentSpec {
            prior: vec![0.0, 0.6, 0.4],
            actor_hidden: vec![200, 200],
            critic_hidden: vec![200, 200],
        };
        Self::with_agents("single", vec![spec])
    }

    /// A right-turner (`[0.0, 0.6, 0.4]`) and a left-turner (`[0.4, 0.6, 0.0]`),
    /// 700-wide nets.
    pub fn dual_agent() -> Self {
        let spec = |prior: Vec<f64>| AgentSpec {
            prior,
            actor_hidden: vec![700, 700],
            critic_hidden: vec![700, 700],
        };
        Self::with_agents(
            "dual",
            vec![spec(vec![0.0, 0.6, 0.4]), spec(vec![0.4, 0.6, 0.0])],
        )
    }

    fn with_agents(label: &str, agents: Vec<AgentSpec>) -> Self {
        let t = TrainerConfig::default();
        Self {
            label: label.into(),
            seed: t.seed,
            grid_size: DEFAULT_GRID_SIZE,
            max_steps: DEFAULT_MAX_STEPS,
            lambda: t.lambda,
            gamma: t.gamma,
            tau: t.tau,
            actor_lr: t.actor_lr,
            critic_lr: t.critic_lr,
            batch_size: t.batch_size,
            buffer_capacity: t.buffer_capacity,
            iterations: t.iterations,
            steps_per_iteration: t.steps_per_iteration,
            epochs_per_iteration: t.epochs_per_iteration,
            sigma_start: t.noise.sigma_start,
            sigma_end: t.noise.sigma_end,
            sigma_decay_fraction: t.noise.decay_fraction,
            mask_terminal: t.mask_terminal,
            regularized: t.regularized,
            max_grad_norm: t.max_grad_norm,
            eval_every: default_eval_every(),
            eval_episodes: default_eval_episodes(),
            output_dir: default_output_dir().join(label),
            agents,
        }
    }

    pub fn from_toml_str(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config = Self::from_toml_str(&text).map_err(|message| Error::format(path, message))?;
        config
            .validate()
            .map_err(|e| Error::format(path, e.to_string()))?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is plain data")
    }

    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn trainer_config(&self) -> TrainerConfig {
        TrainerConfig {
            lambda: self.lambda,
            gamma: self.gamma,
            tau: self.tau,
            actor_lr: self.actor_lr,
            critic_lr: self.critic_lr,
            batch_size: self.batch_size,
            buffer_capacity: self.buffer_capacity,
            iterations: self.iterations,
            steps_per_iteration: self.steps_per_iteration,
            epochs_per_iteration: self.epochs_per_iteration,
            noise: NoiseSchedule {
                sigma_start: self.sigma_start,
                sigma_end: self.sigma_end,
                decay_fraction: self.sigma_decay_fraction,
            },
            seed: self.seed,
            mask_terminal: self.mask_terminal,
            regularized: self.regularized,
            max_grad_norm: self.max_grad_norm,
        }
    }

    pub fn env(&self) -> Result<GridEnv> {
        GridEnv::new(self.grid_size, self.max_steps)
    }

    pub fn validate(&self) -> Result<()> {
        if self.agents.is_empty() {
            return Err(Error::Config("at least one [[agents]] entry is required".into()));
        }
        for spec in &self.agents {
            spec.validate()?;
        }
        if self.eval_every == 0 {
            return Err(Error::Config("eval_every must be >= 1".into()));
        }
        if self.eval_episodes == 0 {
            return Err(Error::Config("eval_episodes must be >= 1".into()));
        }
        self.env()?;
        self.trainer_config().validate()
    }
}
