//! Action-regularized multi-agent deep deterministic policy gradients.
//!
//! Each agent owns an actor, a critic, and their target copies. Actors are
//! trained to maximize their critic while the batch-mean of their softmax
//! output is pulled toward a fixed, state-independent prior over actions.
//! The prior is what gives a trained agent its recognizable behaviour, for
//! example an agent that never turns left on the grid task in [`gridnav`].
//!
//! Layout:
//!
//! - [`numcore`]: dense networks, backprop, SGD and finite-difference checks.
//! - [`gridnav`]: the multi-agent grid navigation environment.
//! - [`replay`]: fixed-capacity replay buffer.
//! - [`maddpg`]: the trainer (critic regression, regularized actor step,
//!   soft target updates).
//! - [`harness`]: configs, evaluation, checkpoints, CSV export and SVG plots.

pub mod error;
pub mod gradcheck;
pub mod gridnav;
pub mod harness;
pub mod maddpg;
pub mod numcore;
pub mod replay;

pub use error::{Error, Result};
pub use gridnav::{Action, GridEnv, GridState, Heading, Observation};
pub use maddpg::{AgentRuntime, AgentSpec, NoiseSchedule, Trainer, TrainerConfig};
pub use numcore::{GradientSet, Matrix, MlpNetwork, OutputActivation};
pub use replay::{ReplayBuffer, Transition};

/// Seeded random source used everywhere a run needs randomness.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Builds the crate's random source from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}
