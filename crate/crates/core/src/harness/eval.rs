use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridnav::{Action, GridEnv, GridState, Observation};
use crate::maddpg::select_action;
use crate::numcore::MlpNetwork;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentEval {
    pub mean_return: f64,
    pub success_rate: f64,
    /// Executed-action frequencies (left, straight, right) before arrival.
    pub action_frequencies: Vec<f64>,
    /// Steps until arrival, or the step cap for failed episodes.
    pub mean_episode_length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub episodes: usize,
    pub agents: Vec<AgentEval>,
}

/// One agent's move within a greedy episode.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub agent: usize,
    pub action: Action,
    pub reward: f64,
}

/// Plays one noise-free episode; `on_step` sees every non-frozen agent move
/// together with the state after it.
pub fn greedy_episode<F>(
    env: &GridEnv,
    actors: &[&MlpNetwork],
    initial: GridState,
    mut on_step: F,
) -> Result<GridState>
where
    F: FnMut(&StepRecord, &GridState),
{
    let mut state = initial;
    let mut obs: Vec<Observation> = env.observe_all(&state);
    // σ = 0 never draws from the random source.
    let mut no_rng = crate::seeded_rng(0);
    loop {
        let actions = actors
            .iter()
            .zip(&obs)
            .map(|(actor, o)| select_action(actor, o, 0.0, &mut no_rng).map(|(_, a)| a))
            .collect::<Result<Vec<_>>>()?;
        let before = state.clone();
        let out = env.step(&state, &actions)?;
        for (i, &action) in actions.iter().enumerate() {
            if before.agents[i].reached {
                continue;
            }
            let record = StepRecord {
                step: out.state.step_count,
                agent: i,
                action,
                reward: out.rewards[i],
            };
            on_step(&record, &out.state);
        }
        state = out.state;
        obs = out.observations;
        if out.done {
            return Ok(state);
        }
    }
}

/// Noise-free evaluation on `episodes` fresh random destination sets.
pub fn evaluate<R: Rng + ?Sized>(
    env: &GridEnv,
    actors: &[&MlpNetwork],
    episodes: usize,
    rng: &mut R,
) -> Result<EvalReport> {
    if episodes == 0 {
        return Err(Error::Config("episodes must be >= 1".into()));
    }
    let n = actors.len();
    let mut returns = vec![0.0; n];
    let mut successes = vec![0usize; n];
    let mut lengths = vec![0usize; n];
    let mut counts = vec![[0usize; Action::COUNT]; n];
    for _ in 0..episodes {
        let (state, _) = env.reset(n, rng)?;
        let end = greedy_episode(env, actors, state, |record, _| {
            returns[record.agent] += record.reward;
            lengths[record.agent] += 1;
            counts[record.agent][record.action.index()] += 1;
        })?;
        for (i, agent) in end.agents.iter().enumerate() {
            if agent.reached {
                successes[i] += 1;
            }
        }
    }
    let e = episodes as f64;
    let agents = (0..n)
        .map(|i| {
            let total: usize = counts[i].iter().sum();
            AgentEval {
                mean_return: returns[i] / e,
                success_rate: successes[i] as f64 / e,
                action_frequencies: counts[i]
                    .iter()
                    .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
                    .collect(),
                mean_episode_length: lengths[i] as f64 / e,
            }
        })
        .collect();
    Ok(EvalReport { episodes, agents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{Matrix, OutputActivation};
    use crate::seeded_rng;

    /// Actor whose softmax always prefers `action`.
    fn fixed_actor(action: Action) -> MlpNetwork {
        let mut bias = vec![0.0; 3];
        bias[action.index()] = 5.0;
        MlpNetwork::from_parameters(
            &[2, 3],
            OutputActivation::Softmax,
            vec![Matrix::zeros(3, 2)],
            vec![bias],
        )
        .unwrap()
    }

    #[test]
    fn straight_actor_reaches_only_its_column() {
        let env = GridEnv::default();
        let actor = fixed_actor(Action::Straight);
        let (state, _) = env.reset_with(&[(3, 4)]);
        let mut steps = Vec::new();
        let end = greedy_episode(&env, &[&actor], state, |r, s| {
            steps.push((r.action, s.agents[0].position))
        })
        .unwrap();
        assert!(end.agents[0].reached);
        assert_eq!(
            steps,
            vec![
                (Action::Straight, (3, 1)),
                (Action::Straight, (3, 2)),
                (Action::Straight, (3, 3)),
                (Action::Straight, (3, 4)),
            ]
        );
    }

    #[test]
    fn report_is_a_valid_distribution() {
        let env = GridEnv::default();
        let actor = fixed_actor(Action::Right);
        let report = evaluate(&env, &[&actor, &fixed_actor(Action::Straight)], 10, &mut seeded_rng(3)).unwrap();
        for agent in &report.agents {
            let sum: f64 = agent.action_frequencies.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            assert!(agent.mean_return <= 0.0);
            assert!((0.0..=1.0).contains(&agent.success_rate));
            assert!(agent.mean_episode_length <= 50.0);
        }
        assert_eq!(report.agents[0].action_frequencies, vec![0.0, 0.0, 1.0]);
        assert!(evaluate(&env, &[&actor], 0, &mut seeded_rng(3)).is_err());
    }

    #[test]
    fn same_seed_same_report() {
        let env = GridEnv::default();
        let actor = MlpNetwork::new(&[2, 16, 3], OutputActivation::Softmax, &mut seeded_rng(1)).unwrap();
        let a = evaluate(&env, &[&actor], 20, &mut seeded_rng(5)).unwrap();
        let b = evaluate(&env, &[&actor], 20, &mut seeded_rng(5)).unwrap();
        assert_eq!(a, b);
    }
}
