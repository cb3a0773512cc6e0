//! Action-regularized MADDPG.
//!
//! Every agent `i` has an actor `μ_i` (softmax over its `M_i` actions), a
//! critic `Q_i(o_i, a_1, …, a_N)` and target copies of both. One update round
//! on a sampled batch does, for each agent in index order:
//!
//! 1. critic regression toward `r_i + γ (1 − terminal) Q'_i(o'_i, μ'_1(o'_1), …)`;
//! 2. an actor step on `−mean Q_i(o_i, μ_1(o_1), …) + λ/M_i Σ_j (mean μ_i(o_i)_j − π_j)²`,
//!    where the mean runs over the batch and `π` is the agent's prior;
//! 3. Polyak averaging of both target networks.

mod batch;
mod config;
mod trainer;
mod update;

pub use batch::Batch;
pub use config::{
    default_max_grad_norm, AgentSpec, NoiseSchedule, TrainerConfig, DEFAULT_MAX_GRAD_NORM,
};
pub use trainer::{
    perturb_and_pick, select_action, AgentIterationMetrics, IterationMetrics, Trainer,
};
pub use update::{
    actor_loss, actor_loss_and_grads, actor_update, critic_input, critic_loss_and_grads,
    critic_target, critic_update, plain_actor_loss_and_grads, regularization_penalty,
    soft_update, target_actions, update_round, RoundLosses,
};

use crate::error::Result;
use crate::gridnav::Observation;
use crate::numcore::{MlpNetwork, OutputActivation};

/// Live and target networks of one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentRuntime {
    pub actor: MlpNetwork,
    pub critic: MlpNetwork,
    pub target_actor: MlpNetwork,
    pub target_critic: MlpNetwork,
}

impl AgentRuntime {
    /// Random live networks; targets start as exact copies.
    pub fn new<R: rand::Rng + ?Sized>(
        spec: &AgentSpec,
        joint_action_dim: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let actor = MlpNetwork::new(
            &spec.actor_layer_sizes(Observation::DIM),
            OutputActivation::Softmax,
            rng,
        )?;
        let critic = MlpNetwork::new(
            &spec.critic_layer_sizes(Observation::DIM, joint_action_dim),
            OutputActivation::Identity,
            rng,
        )?;
        Ok(Self::from_live(actor, critic))
    }

    pub fn from_live(actor: MlpNetwork, critic: MlpNetwork) -> Self {
        Self {
            target_actor: actor.clone(),
            target_critic: critic.clone(),
            actor,
            critic,
        }
    }

    pub fn action_count(&self) -> usize {
        self.actor.output_size()
    }
}
