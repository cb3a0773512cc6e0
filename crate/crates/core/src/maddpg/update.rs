use super::{AgentRuntime, Batch, TrainerConfig};
use crate::error::{Error, Result};
use crate::numcore::{GradientSet, Matrix, MlpNetwork};

/// `[own observation | a_1 | … | a_N]`.
pub fn critic_input(own_obs: &Matrix, actions: &[Matrix]) -> Result<Matrix> {
    let mut parts = Vec::with_capacity(actions.len() + 1);
    parts.push(own_obs);
    parts.extend(actions.iter());
    Matrix::hstack(&parts)
}

/// Target-actor actions at the next observations, `μ'_k(o'_k)` for every k.
pub fn target_actions(agents: &[AgentRuntime], batch: &Batch) -> Result<Vec<Matrix>> {
    agents
        .iter()
        .zip(&batch.next_obs)
        .map(|(a, o)| a.target_actor.predict(o))
        .collect()
}

fn current_actions(agents: &[AgentRuntime], batch: &Batch) -> Result<Vec<Matrix>> {
    agents
        .iter()
        .zip(&batch.obs)
        .map(|(a, o)| a.actor.predict(o))
        .collect()
}

/// Regression targets `r_i + γ (1 − terminal) Q'_i(o'_i, μ'_1(o'_1), …, μ'_N(o'_N))`.
/// With `mask_terminal` off the bootstrap term is always kept.
pub fn critic_target(
    batch: &Batch,
    agents: &[AgentRuntime],
    agent: usize,
    gamma: f64,
    mask_terminal: bool,
) -> Result<Vec<f64>> {
    let next_actions = target_actions(agents, batch)?;
    critic_target_with(batch, agents, agent, gamma, mask_terminal, &next_actions)
}

fn critic_target_with(
    batch: &Batch,
    agents: &[AgentRuntime],
    agent: usize,
    gamma: f64,
    mask_terminal: bool,
    next_actions: &[Matrix],
) -> Result<Vec<f64>> {
    let input = critic_input(&batch.next_obs[agent], next_actions)?;
    let next_q = agents[agent].target_critic.predict(&input)?;
    Ok(batch.rewards[agent]
        .iter()
        .zip(next_q.data())
        .zip(&batch.terminal)
        .map(|((r, q), &terminal)| {
            if mask_terminal && terminal {
                *r
            } else {
                r + gamma * q
            }
        })
        .collect())
}

/// Mean squared error of the critic against `targets`, with its gradients.
pub fn critic_loss_and_grads(
    batch: &Batch,
    critic: &MlpNetwork,
    agent: usize,
    targets: &[f64],
) -> Result<(f64, GradientSet)> {
    let input = critic_input(&batch.obs[agent], &batch.actions)?;
    let cache = critic.forward_cache(&input)?;
    let q = cache.output();
    let n = batch.len() as f64;
    let mut loss = 0.0;
    let mut grad = Matrix::zeros(q.rows(), 1);
    for (r, t) in targets.iter().enumerate() {
        let diff = q.get(r, 0) - t;
        loss += diff * diff;
        grad.set(r, 0, 2.0 * diff / n);
    }
    let (grads, _) = critic.backward(&cache, &grad)?;
    Ok((loss / n, grads))
}

/// One SGD step on agent `agent`'s critic. Returns the loss before the step.
pub fn critic_update(
    batch: &Batch,
    agents: &mut [AgentRuntime],
    agent: usize,
    gamma: f64,
    critic_lr: f64,
    mask_terminal: bool,
    max_grad_norm: Option<f64>,
) -> Result<f64> {
    let targets = critic_target(batch, agents, agent, gamma, mask_terminal)?;
    apply_critic_step(batch, agents, agent, &targets, critic_lr, max_grad_norm)
}

fn apply_critic_step(
    batch: &Batch,
    agents: &mut [AgentRuntime],
    agent: usize,
    targets: &[f64],
    critic_lr: f64,
    max_grad_norm: Option<f64>,
) -> Result<f64> {
    let (loss, mut grads) = critic_loss_and_grads(batch, &agents[agent].critic, agent, targets)?;
    if !loss.is_finite() {
        return Err(Error::NonFiniteLoss {
            agent,
            what: "critic loss",
        });
    }
    if let Some(max) = max_grad_norm {
        grads.clip_norm(max);
    }
    agents[agent].critic.sgd_step(&grads, critic_lr)?;
    Ok(loss)
}

/// `λ / M · Σ_j (mean_j − prior_j)²`.
pub fn regularization_penalty(mean_output: &[f64], prior: &[f64], lambda: f64) -> f64 {
    assert_eq!(mean_output.len(), prior.len(), "prior length must match actions");
    let m = prior.len() as f64;
    lambda / m
        * mean_output
            .iter()
            .zip(prior)
            .map(|(a, p)| (a - p).powi(2))
            .sum::<f64>()
}

/// Pieces of the actor objective shared by the plain and regularized forms.
struct ActorPass {
    actor_cache: crate::numcore::ForwardCache,
    /// `−mean Q_i`.
    q_loss: f64,
    /// Gradient of `q_loss` with respect to agent `i`'s actor output.
    q_grad: Matrix,
}

fn actor_pass(batch: &Batch, agents: &[AgentRuntime], agent: usize) -> Result<ActorPass> {
    let actor_cache = agents[agent].actor.forward_cache(&batch.obs[agent])?;
    let mut actions = Vec::with_capacity(agents.len());
    for (k, a) in agents.iter().enumerate() {
        if k == agent {
            actions.push(actor_cache.output().clone());
        } else {
            actions.push(a.actor.predict(&batch.obs[k])?);
        }
    }
    let input = critic_input(&batch.obs[agent], &actions)?;
    let critic = &agents[agent].critic;
    let critic_cache = critic.forward_cache(&input)?;
    let n = batch.len() as f64;
    let q_loss = -critic_cache.output().data().iter().sum::<f64>() / n;
    let dq = Matrix::from_vec(batch.len(), 1, vec![-1.0 / n; batch.len()])?;
    let d_input = critic.input_gradient(&critic_cache, &dq)?;
    let offset = batch.obs[agent].cols()
        + actions[..agent].iter().map(Matrix::cols).sum::<usize>();
    let q_grad = d_input.columns(offset, actions[agent].cols());
    Ok(ActorPass {
        actor_cache,
        q_loss,
        q_grad,
    })
}

/// Unregularized MADDPG actor objective `−mean Q_i(o_i, μ_1(o_1), …, μ_N(o_N))`
/// and its gradient with respect to agent `i`'s actor.
pub fn plain_actor_loss_and_grads(
    batch: &Batch,
    agents: &[AgentRuntime],
    agent: usize,
) -> Result<(f64, GradientSet)> {
    let pass = actor_pass(batch, agents, agent)?;
    let (grads, _) = agents[agent].actor.backward(&pass.actor_cache, &pass.q_grad)?;
    Ok((pass.q_loss, grads))
}

/// Regularized actor objective and its gradient with respect to agent `i`'s
/// actor. Other agents' actors and every critic are held fixed.
pub fn actor_loss_and_grads(
    batch: &Batch,
    agents: &[AgentRuntime],
    agent: usize,
    prior: &[f64],
    lambda: f64,
) -> Result<(f64, GradientSet)> {
    let mut pass = actor_pass(batch, agents, agent)?;
    let output = pass.actor_cache.output();
    let means = output.column_means();
    let penalty = regularization_penalty(&means, prior, lambda);
    let n = batch.len() as f64;
    let m = prior.len() as f64;
    let coeff: Vec<f64> = means
        .iter()
        .zip(prior)
        .map(|(mean, p)| lambda / m * 2.0 * (mean - p) / n)
        .collect();
    for r in 0..pass.q_grad.rows() {
        pass.q_grad
            .row_mut(r)
            .iter_mut()
            .zip(&coeff)
            .for_each(|(g, c)| *g += c);
    }
    let (grads, _) = agents[agent].actor.backward(&pass.actor_cache, &pass.q_grad)?;
    Ok((pass.q_loss + penalty, grads))
}

/// Value of the regularized actor objective.
pub fn actor_loss(
    batch: &Batch,
    agents: &[AgentRuntime],
    agent: usize,
    prior: &[f64],
    lambda: f64,
) -> Result<f64> {
    let actions = current_actions(agents, batch)?;
    let input = critic_input(&batch.obs[agent], &actions)?;
    let q = agents[agent].critic.predict(&input)?;
    let mean_q = q.data().iter().sum::<f64>() / batch.len() as f64;
    Ok(-mean_q + regularization_penalty(&actions[agent].column_means(), prior, lambda))
}

/// One SGD step on the actor objective; `prior = None` selects the plain
/// MADDPG objective. Returns the loss before the step.
pub fn actor_update(
    batch: &Batch,
    agents: &mut [AgentRuntime],
    agent: usize,
    prior: Option<&[f64]>,
    lambda: f64,
    actor_lr: f64,
    max_grad_norm: Option<f64>,
) -> Result<f64> {
    let (loss, mut grads) = match prior {
        Some(prior) => actor_loss_and_grads(batch, agents, agent, prior, lambda)?,
        None => plain_actor_loss_and_grads(batch, agents, agent)?,
    };
    if !loss.is_finite() {
        return Err(Error::NonFiniteLoss {
            agent,
            what: "actor loss",
        });
    }
    if let Some(max) = max_grad_norm {
        grads.clip_norm(max);
    }
    agents[agent].actor.sgd_step(&grads, actor_lr)?;
    Ok(loss)
}

/// `target ← τ · live + (1 − τ) · target`.
pub fn soft_update(live: &MlpNetwork, target: &mut MlpNetwork, tau: f64) -> Result<()> {
    target.soft_update_from(live, tau)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoundLosses {
    pub critic: Vec<f64>,
    pub actor: Vec<f64>,
}

/// Critic step, actor step and target sync for every agent in index order.
pub fn update_round(
    batch: &Batch,
    agents: &mut [AgentRuntime],
    priors: &[Vec<f64>],
    config: &TrainerConfig,
) -> Result<RoundLosses> {
    let mut losses = RoundLosses::default();
    for i in 0..agents.len() {
        let critic_loss = critic_update(
            batch,
            agents,
            i,
            config.gamma,
            config.critic_lr,
            config.mask_terminal,
            config.max_grad_norm,
        )?;
        let prior = config.regularized.then(|| priors[i].as_slice());
        let actor_loss = actor_update(
            batch,
            agents,
            i,
            prior,
            config.lambda,
            config.actor_lr,
            config.max_grad_norm,
        )?;
        let runtime = &mut agents[i];
        soft_update(&runtime.actor, &mut runtime.target_actor, config.tau)?;
        soft_update(&runtime.critic, &mut runtime.target_critic, config.tau)?;
        losses.critic.push(critic_loss);
        losses.actor.push(actor_loss);
    }
    Ok(losses)
}
