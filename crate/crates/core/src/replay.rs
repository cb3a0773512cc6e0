//! Fixed-capacity FIFO replay buffer with uniform sampling (with replacement).

use rand::Rng;

use crate::error::{Error, Result};
use crate::gridnav::Observation;

/// One joint step of all agents.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub obs: Vec<Observation>,
    /// Exploration-perturbed actor outputs, one vector per agent.
    pub action_vecs: Vec<Vec<f64>>,
    pub rewards: Vec<f64>,
    pub next_obs: Vec<Observation>,
    pub terminal: bool,
}

impl Transition {
    pub fn n_agents(&self) -> usize {
        self.obs.len()
    }

    fn consistent(&self) -> bool {
        let n = self.obs.len();
        self.action_vecs.len() == n && self.rewards.len() == n && self.next_obs.len() == n
    }
}

#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    n_agents: usize,
    slots: Vec<Transition>,
    /// Slot that the next push overwrites once the buffer is full.
    cursor: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize, n_agents: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::Config("replay capacity must be >= 1".into()));
        }
        Ok(Self {
            capacity,
            n_agents,
            slots: Vec::with_capacity(capacity),
            cursor: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn push(&mut self, transition: Transition) -> Result<()> {
        if transition.n_agents() != self.n_agents || !transition.consistent() {
            return Err(Error::AgentCount {
                expected: self.n_agents,
                actual: transition.n_agents(),
            });
        }
        if self.slots.len() < self.capacity {
            self.slots.push(transition);
        } else {
            self.slots[self.cursor] = transition;
            self.cursor = (self.cursor + 1) % self.capacity;
        }
        Ok(())
    }

    /// Stored transitions, oldest first.
    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        let (newer, older) = self.slots.split_at(self.cursor);
        older.iter().chain(newer)
    }

    /// Uniform slot indices, with replacement.
    pub fn sample_indices<R: Rng + ?Sized>(&self, batch_size: usize, rng: &mut R) -> Result<Vec<usize>> {
        if self.slots.len() < batch_size || self.slots.is_empty() {
            return Err(Error::BufferTooSmall {
                available: self.slots.len(),
                requested: batch_size,
            });
        }
        Ok((0..batch_size)
            .map(|_| rng.random_range(0..self.slots.len()))
            .collect())
    }

    pub fn sample<R: Rng + ?Sized>(&self, batch_size: usize, rng: &mut R) -> Result<Vec<&Transition>> {
        Ok(self
            .sample_indices(batch_size, rng)?
            .into_iter()
            .map(|i| &self.slots[i])
            .collect())
    }

    pub fn get(&self, slot: usize) -> Option<&Transition> {
        self.slots.get(slot)
    }
}
