use log::debug;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{update_round, AgentRuntime, AgentSpec, Batch, TrainerConfig};
use crate::error::{Error, Result};
use crate::gridnav::{Action, GridEnv, GridState, Observation};
use crate::numcore::{Matrix, MlpNetwork};
use crate::replay::{ReplayBuffer, Transition};

/// Adds `noise` to `output`, clips to `[0, 1]` and picks the argmax
/// (lowest index wins ties).
pub fn perturb_and_pick(output: &[f64], noise: &[f64]) -> (Vec<f64>, Action) {
    let action_vec: Vec<f64> = output
        .iter()
        .zip(noise)
        .map(|(a, n)| (a + n).clamp(0.0, 1.0))
        .collect();
    let mut best = 0;
    for (j, v) in action_vec.iter().enumerate() {
        if *v > action_vec[best] {
            best = j;
        }
    }
    let action = Action::from_index(best).expect("grid actions have three entries");
    (action_vec, action)
}

/// Actor output plus i.i.d. `N(0, σ²)` noise per component. No noise is
/// drawn when `sigma` is zero.
pub fn select_action<R: Rng + ?Sized>(
    actor: &MlpNetwork,
    obs: &Observation,
    sigma: f64,
    rng: &mut R,
) -> Result<(Vec<f64>, Action)> {
    let input = Matrix::from_vec(1, Observation::DIM, obs.0.to_vec())?;
    let output = actor.predict(&input)?;
    let noise: Vec<f64> = if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).map_err(|e| Error::Config(e.to_string()))?;
        (0..output.cols()).map(|_| normal.sample(rng)).collect()
    } else if sigma == 0.0 {
        vec![0.0; output.cols()]
    } else {
        return Err(Error::Config(format!("sigma must be >= 0, got {sigma}")));
    };
    Ok(perturb_and_pick(output.data(), &noise))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentIterationMetrics {
    /// Mean undiscounted return of episodes that finished this iteration.
    pub train_return: Option<f64>,
    pub actor_loss: Option<f64>,
    pub critic_loss: Option<f64>,
    /// Executed actions of unfinished agents, by action index.
    pub action_counts: [usize; Action::COUNT],
}

impl AgentIterationMetrics {
    pub fn action_frequencies(&self) -> [f64; Action::COUNT] {
        let total: usize = self.action_counts.iter().sum();
        if total == 0 {
            return [0.0; Action::COUNT];
        }
        self.action_counts.map(|c| c as f64 / total as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationMetrics {
    pub iteration: usize,
    pub sigma: f64,
    pub agents: Vec<AgentIterationMetrics>,
    pub updates: usize,
}

/// Owns the environment, replay buffer, networks and random source of one run.
#[derive(Debug, Clone)]
pub struct Trainer {
    env: GridEnv,
    specs: Vec<AgentSpec>,
    priors: Vec<Vec<f64>>,
    agents: Vec<AgentRuntime>,
    buffer: ReplayBuffer,
    config: TrainerConfig,
    rng: crate::Rng,
    state: GridState,
    obs: Vec<Observation>,
    episode_returns: Vec<f64>,
}

impl Trainer {
    pub fn new(env: GridEnv, specs: Vec<AgentSpec>, config: TrainerConfig) -> Result<Self> {
        let mut rng = crate::seeded_rng(config.seed);
        let agents = Self::init_agents(&specs, &mut rng)?;
        Self::with_agents(env, specs, config, agents, rng)
    }

    fn init_agents(specs: &[AgentSpec], rng: &mut crate::Rng) -> Result<Vec<AgentRuntime>> {
        if specs.is_empty() {
            return Err(Error::Config("need at least one agent".into()));
        }
        for spec in specs {
            spec.validate()?;
            if spec.action_count() != Action::COUNT {
                return Err(Error::Config(format!(
                    "grid agents have {} actions, prior has {}",
                    Action::COUNT,
                    spec.action_count()
                )));
            }
        }
        let joint: usize = specs.iter().map(AgentSpec::action_count).sum();
        specs
            .iter()
            .map(|spec| AgentRuntime::new(spec, joint, rng))
            .collect()
    }

    /// Starts from existing networks, e.g. to replay a run with a variant config.
    pub fn with_agents(
        env: GridEnv,
        specs: Vec<AgentSpec>,
        config: TrainerConfig,
        agents: Vec<AgentRuntime>,
        mut rng: crate::Rng,
    ) -> Result<Self> {
        config.validate()?;
        if agents.len() != specs.len() {
            return Err(Error::AgentCount {
                expected: specs.len(),
                actual: agents.len(),
            });
        }
        let buffer = ReplayBuffer::new(config.buffer_capacity, specs.len())?;
        let (state, obs) = env.reset(specs.len(), &mut rng)?;
        Ok(Self {
            env,
            priors: specs.iter().map(|s| s.prior.clone()).collect(),
            episode_returns: vec![0.0; specs.len()],
            specs,
            agents,
            buffer,
            config,
            rng,
            state,
            obs,
        })
    }

    pub fn env(&self) -> &GridEnv {
        &self.env
    }

    pub fn specs(&self) -> &[AgentSpec] {
        &self.specs
    }

    pub fn agents(&self) -> &[AgentRuntime] {
        &self.agents
    }

    pub fn agents_mut(&mut self) -> &mut [AgentRuntime] {
        &mut self.agents
    }

    pub fn config(&self) -> &TrainerConfig {
        &self.config
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    pub fn rng(&self) -> &crate::Rng {
        &self.rng
    }

    pub fn actors(&self) -> Vec<&MlpNetwork> {
        self.agents.iter().map(|a| &a.actor).collect()
    }

    pub fn sigma(&self, iteration: usize) -> f64 {
        self.config.noise.sigma(iteration, self.config.iterations)
    }

    /// Collects `steps_per_iteration` joint steps, then runs
    /// `epochs_per_iteration` update rounds once the buffer holds a batch.
    pub fn train_iteration(&mut self, iteration: usize) -> Result<IterationMetrics> {
        let n = self.agents.len();
        let sigma = self.sigma(iteration);
        let mut counts = vec![[0usize; Action::COUNT]; n];
        let mut finished: Vec<Vec<f64>> = vec![Vec::new(); n];

        for _ in 0..self.config.steps_per_iteration {
            let mut action_vecs = Vec::with_capacity(n);
            let mut actions = Vec::with_capacity(n);
            for (i, agent) in self.agents.iter().enumerate() {
                let (vec, action) = select_action(&agent.actor, &self.obs[i], sigma, &mut self.rng)?;
                if !self.state.agents[i].reached {
                    counts[i][action.index()] += 1;
                }
                action_vecs.push(vec);
                actions.push(action);
            }
            let out = self.env.step(&self.state, &actions)?;
            for (ret, r) in self.episode_returns.iter_mut().zip(&out.rewards) {
                *ret += r;
            }
            self.buffer.push(Transition {
                obs: std::mem::take(&mut self.obs),
                action_vecs,
                rewards: out.rewards,
                next_obs: out.observations.clone(),
                terminal: out.done,
            })?;
            if out.done {
                for (done, ret) in finished.iter_mut().zip(&mut self.episode_returns) {
                    done.push(*ret);
                    *ret = 0.0;
                }
                let (state, obs) = self.env.reset(n, &mut self.rng)?;
                self.state = state;
                self.obs = obs;
            } else {
                self.state = out.state;
                self.obs = out.observations;
            }
        }

        let mut critic_sums = vec![0.0; n];
        let mut actor_sums = vec![0.0; n];
        let mut updates = 0;
        for _ in 0..self.config.epochs_per_iteration {
            if self.buffer.len() < self.config.batch_size {
                break;
            }
            let batch = {
                let sample = self.buffer.sample(self.config.batch_size, &mut self.rng)?;
                Batch::from_transitions(&sample)?
            };
            let losses = update_round(&batch, &mut self.agents, &self.priors, &self.config)?;
            for i in 0..n {
                critic_sums[i] += losses.critic[i];
                actor_sums[i] += losses.actor[i];
            }
            updates += 1;
        }

        let agents = (0..n)
            .map(|i| AgentIterationMetrics {
                train_return: (!finished[i].is_empty())
                    .then(|| finished[i].iter().sum::<f64>() / finished[i].len() as f64),
                actor_loss: (updates > 0).then(|| actor_sums[i] / updates as f64),
                critic_loss: (updates > 0).then(|| critic_sums[i] / updates as f64),
                action_counts: counts[i],
            })
            .collect();
        debug!("iteration {iteration}: sigma {sigma:.3}, {updates} update rounds");
        Ok(IterationMetrics {
            iteration,
            sigma,
            agents,
            updates,
        })
    }
}
