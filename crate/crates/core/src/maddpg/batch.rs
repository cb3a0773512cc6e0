use crate::error::{Error, Result};
use crate::numcore::Matrix;
use crate::replay::Transition;

/// A sampled batch rearranged into per-agent matrices (batch-first rows).
#[derive(Debug, Clone)]
pub struct Batch {
    pub obs: Vec<Matrix>,
    pub actions: Vec<Matrix>,
    pub rewards: Vec<Vec<f64>>,
    pub next_obs: Vec<Matrix>,
    pub terminal: Vec<bool>,
}

impl Batch {
    pub fn from_transitions(transitions: &[&Transition]) -> Result<Self> {
        let first = transitions
            .first()
            .ok_or_else(|| Error::Config("empty batch".into()))?;
        let n = first.n_agents();
        let rows = transitions.len();
        let mut obs = Vec::with_capacity(n);
        let mut actions = Vec::with_capacity(n);
        let mut rewards = Vec::with_capacity(n);
        let mut next_obs = Vec::with_capacity(n);
        for i in 0..n {
            let width = first.action_vecs[i].len();
            let mut o = Vec::with_capacity(rows * 2);
            let mut a = Vec::with_capacity(rows * width);
            let mut r = Vec::with_capacity(rows);
            let mut o2 = Vec::with_capacity(rows * 2);
            for t in transitions {
                if t.n_agents() != n || t.action_vecs[i].len() != width {
                    return Err(Error::AgentCount {
                        expected: n,
                        actual: t.n_agents(),
                    });
                }
                o.extend_from_slice(t.obs[i].as_slice());
                a.extend_from_slice(&t.action_vecs[i]);
                r.push(t.rewards[i]);
                o2.extend_from_slice(t.next_obs[i].as_slice());
            }
            obs.push(Matrix::from_vec(rows, 2, o)?);
            actions.push(Matrix::from_vec(rows, width, a)?);
            rewards.push(r);
            next_obs.push(Matrix::from_vec(rows, 2, o2)?);
        }
        Ok(Self {
            obs,
            actions,
            rewards,
            next_obs,
            terminal: transitions.iter().map(|t| t.terminal).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.terminal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terminal.is_empty()
    }

    pub fn n_agents(&self) -> usize {
        self.obs.len()
    }
}
