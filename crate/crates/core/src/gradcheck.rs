//! Finite-difference checks of the trainer's analytic gradients on random
//! small configurations.

use rand::Rng;

use crate::error::Result;
use crate::gridnav::Observation;
use crate::maddpg::{actor_loss, actor_loss_and_grads, critic_loss_and_grads, AgentRuntime, AgentSpec, Batch};
use crate::numcore::{
    gradient_check, max_relative_error, randomize_biases, Matrix, MlpNetwork, MseLoss,
    OutputActivation,
};
use crate::replay::Transition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradcheckReport {
    pub cases: usize,
    /// Plain network under an MSE loss.
    pub network_max: f64,
    /// Critic regression loss.
    pub critic_max: f64,
    /// Regularized actor loss through the critic.
    pub actor_max: f64,
}

impl GradcheckReport {
    pub fn max(&self) -> f64 {
        self.network_max.max(self.critic_max).max(self.actor_max)
    }
}

fn random_simplex<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.random_range(0.05..1.0)).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, scale: f64, rng: &mut R) -> Matrix {
    let data = (0..rows * cols).map(|_| rng.random_range(-scale..scale)).collect();
    Matrix::from_vec(rows, cols, data).expect("sized")
}

/// A random multi-agent setup with a random batch.
pub struct RandomCase {
    pub specs: Vec<AgentSpec>,
    pub agents: Vec<AgentRuntime>,
    pub batch: Batch,
    pub lambda: f64,
}

impl RandomCase {
    pub fn generate<R: Rng + ?Sized>(rng: &mut R) -> Result<Self> {
        let n_agents = rng.random_range(1..=2);
        let specs: Vec<AgentSpec> = (0..n_agents)
            .map(|_| {
                let m = rng.random_range(2..=4);
                AgentSpec::new(
                    random_simplex(m, rng),
                    vec![rng.random_range(3..=8)],
                    vec![rng.random_range(3..=8), rng.random_range(3..=8)],
                )
            })
            .collect::<Result<_>>()?;
        let joint: usize = specs.iter().map(AgentSpec::action_count).sum();
        let mut agents = specs
            .iter()
            .map(|s| AgentRuntime::new(s, joint, rng))
            .collect::<Result<Vec<_>>>()?;
        for agent in &mut agents {
            randomize_biases(&mut agent.actor, 0.5, rng);
            randomize_biases(&mut agent.critic, 0.5, rng);
        }
        let batch_size = rng.random_range(2..=6);
        let obs = |rng: &mut R| Observation([rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]);
        let transitions: Vec<Transition> = (0..batch_size)
            .map(|_| Transition {
                obs: (0..n_agents).map(|_| obs(rng)).collect(),
                action_vecs: specs
                    .iter()
                    .map(|s| (0..s.action_count()).map(|_| rng.random_range(0.0..1.0)).collect())
                    .collect(),
                rewards: (0..n_agents).map(|_| rng.random_range(-7.0..0.0)).collect(),
                next_obs: (0..n_agents).map(|_| obs(rng)).collect(),
                terminal: rng.random_bool(0.2),
            })
            .collect();
        let refs: Vec<&Transition> = transitions.iter().collect();
        Ok(Self {
            specs,
            agents,
            batch: Batch::from_transitions(&refs)?,
            lambda: rng.random_range(0.0..5.0),
        })
    }

    /// Relative error of the critic regression gradient for `agent`.
    pub fn critic_error(&self, agent: usize, targets: &[f64], epsilon: f64) -> Result<f64> {
        let critic = &self.agents[agent].critic;
        let (_, grads) = critic_loss_and_grads(&self.batch, critic, agent, targets)?;
        Ok(max_relative_error(critic, &grads, epsilon, |probe| {
            critic_loss_and_grads(&self.batch, probe, agent, targets)
                .expect("shapes fixed")
                .0
        }))
    }

    /// Relative error of the regularized actor gradient for `agent`.
    pub fn actor_error(&self, agent: usize, epsilon: f64) -> Result<f64> {
        let prior = &self.specs[agent].prior;
        let (_, grads) = actor_loss_and_grads(&self.batch, &self.agents, agent, prior, self.lambda)?;
        let mut agents = self.agents.clone();
        Ok(max_relative_error(&self.agents[agent].actor, &grads, epsilon, |probe| {
            agents[agent].actor = probe.clone();
            actor_loss(&self.batch, &agents, agent, prior, self.lambda).expect("shapes fixed")
        }))
    }
}

/// Runs `cases` random configurations and reports the worst errors.
pub fn run_suite(cases: usize, seed: u64, epsilon: f64) -> Result<GradcheckReport> {
    let mut rng = crate::seeded_rng(seed);
    let mut report = GradcheckReport {
        cases,
        network_max: 0.0,
        critic_max: 0.0,
        actor_max: 0.0,
    };
    for _ in 0..cases {
        let sizes = [
            rng.random_range(1..=4),
            rng.random_range(2..=6),
            rng.random_range(2..=6),
            rng.random_range(1..=4),
        ];
        let activation = if rng.random_bool(0.5) {
            OutputActivation::Softmax
        } else {
            OutputActivation::Identity
        };
        let mut net = MlpNetwork::new(&sizes, activation, &mut rng)?;
        randomize_biases(&mut net, 0.5, &mut rng);
        let rows = rng.random_range(1..=5);
        let input = random_matrix(rows, sizes[0], 2.0, &mut rng);
        let loss = MseLoss {
            target: random_matrix(rows, sizes[3], 1.0, &mut rng),
        };
        report.network_max = report.network_max.max(gradient_check(&net, &input, &loss, epsilon)?);

        let case = RandomCase::generate(&mut rng)?;
        for agent in 0..case.agents.len() {
            let targets: Vec<f64> = (0..case.batch.len())
                .map(|_| rng.random_range(-10.0..0.0))
                .collect();
            report.critic_max = report.critic_max.max(case.critic_error(agent, &targets, epsilon)?);
            report.actor_max = report.actor_max.max(case.actor_error(agent, epsilon)?);
        }
    }
    Ok(report)
}
