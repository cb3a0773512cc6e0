//! Grid navigation task: agents start at the bottom edge facing north and
//! steer with relative turns toward randomly placed destinations.
//!
//! Every action first rotates the heading (left, none, right) and then moves
//! one cell along the new heading, clamped to the grid. Rewards are the
//! negated Euclidean distance to the destination after the move; agents that
//! have reached their destination stay frozen there with reward 0.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID_SIZE: usize = 6;
pub const DEFAULT_MAX_STEPS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Heading {
    North,
    East,
    South,
    West,
}

impl Heading {
    pub const ALL: [Heading; 4] = [Heading::North, Heading::East, Heading::South, Heading::West];

    pub fn turn_left(self) -> Self {
        match self {
            Heading::North => Heading::West,
            Heading::West => Heading::South,
            Heading::South => Heading::East,
            Heading::East => Heading::North,
        }
    }

    pub fn turn_right(self) -> Self {
        match self {
            Heading::North => Heading::East,
            Heading::East => Heading::South,
            Heading::South => Heading::West,
            Heading::West => Heading::North,
        }
    }

    /// Unit step; north increases the second coordinate.
    pub fn delta(self) -> (i64, i64) {
        match self {
            Heading::North => (0, 1),
            Heading::East => (1, 0),
            Heading::South => (0, -1),
            Heading::West => (-1, 0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Heading::North => "N",
            Heading::East => "E",
            Heading::South => "S",
            Heading::West => "W",
        }
    }
}

impl fmt::Display for Heading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relative turn. The index order matches the prior vectors: left, straight, right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Left = 0,
    Straight = 1,
    Right = 2,
}

impl Action {
    pub const ALL: [Action; 3] = [Action::Left, Action::Straight, Action::Right];
    pub const COUNT: usize = 3;

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn apply(self, heading: Heading) -> Heading {
        match self {
            Action::Left => heading.turn_left(),
            Action::Straight => heading,
            Action::Right => heading.turn_right(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Action::Left => "left",
            Action::Straight => "straight",
            Action::Right => "right",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Action {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "left" => Ok(Action::Left),
            "straight" => Ok(Action::Straight),
            "right" => Ok(Action::Right),
            other => Err(format!("unknown action {other:?}")),
        }
    }
}

pub type Cell = (i64, i64);

/// Offset from an agent to its destination, `D − L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation(pub [f64; 2]);

impl Observation {
    pub const DIM: usize = 2;

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentState {
    pub position: Cell,
    pub heading: Heading,
    pub destination: Cell,
    pub reached: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridState {
    pub agents: Vec<AgentState>,
    pub step_count: usize,
}

impl GridState {
    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn all_reached(&self) -> bool {
        self.agents.iter().all(|a| a.reached)
    }
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub state: GridState,
    pub observations: Vec<Observation>,
    pub rewards: Vec<f64>,
    pub done: bool,
}

/// Environment parameters. The dynamics themselves are pure functions of
/// `(state, actions)`; randomness only enters through [`GridEnv::reset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridEnv {
    pub grid_size: usize,
    pub max_steps: usize,
}

impl Default for GridEnv {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID_SIZE,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

impl GridEnv {
    pub fn new(grid_size: usize, max_steps: usize) -> Result<Self> {
        if grid_size < 2 {
            return Err(Error::Config(format!("grid_size must be >= 2, got {grid_size}")));
        }
        if max_steps == 0 {
            return Err(Error::Config("max_steps must be >= 1".into()));
        }
        Ok(Self {
            grid_size,
            max_steps,
        })
    }

    /// Start cell, `(3, 0)` on the 6×6 grid.
    pub fn start(&self) -> Cell {
        ((self.grid_size / 2) as i64, 0)
    }

    fn clamp(&self, v: i64) -> i64 {
        v.clamp(0, self.grid_size as i64 - 1)
    }

    /// Rotate by `action`, then advance one clamped cell along the new heading.
    pub fn transition(&self, position: Cell, heading: Heading, action: Action) -> (Cell, Heading) {
        let heading = action.apply(heading);
        let (dx, dy) = heading.delta();
        let position = (self.clamp(position.0 + dx), self.clamp(position.1 + dy));
        (position, heading)
    }

    /// Places a destination uniformly on any cell except the start.
    pub fn sample_destination<R: Rng + ?Sized>(&self, rng: &mut R) -> Cell {
        let n = self.grid_size as i64;
        let start = self.start();
        let start_index = start.0 * n + start.1;
        let mut k = rng.random_range(0..n * n - 1);
        if k >= start_index {
            k += 1;
        }
        (k / n, k % n)
    }

    pub fn reset<R: Rng + ?Sized>(
        &self,
        n_agents: usize,
        rng: &mut R,
    ) -> Result<(GridState, Vec<Observation>)> {
        if n_agents == 0 {
            return Err(Error::Config("need at least one agent".into()));
        }
        let destinations: Vec<Cell> = (0..n_agents).map(|_| self.sample_destination(rng)).collect();
        Ok(self.reset_with(&destinations))
    }

    /// Deterministic reset with explicit destinations.
    pub fn reset_with(&self, destinations: &[Cell]) -> (GridState, Vec<Observation>) {
        let state = GridState {
            agents: destinations
                .iter()
                .map(|&destination| AgentState {
                    position: self.start(),
                    heading: Heading::North,
                    destination,
                    reached: false,
                })
                .collect(),
            step_count: 0,
        };
        let obs = self.observe_all(&state);
        (state, obs)
    }

    pub fn observe(&self, state: &GridState, agent: usize) -> Observation {
        let a = &state.agents[agent];
        Observation([
            (a.destination.0 - a.position.0) as f64,
            (a.destination.1 - a.position.1) as f64,
        ])
    }

    pub fn observe_all(&self, state: &GridState) -> Vec<Observation> {
        (0..state.n_agents()).map(|i| self.observe(state, i)).collect()
    }

    /// Negated Euclidean distance to the destination.
    pub fn reward_of(&self, state: &GridState, agent: usize) -> f64 {
        let a = &state.agents[agent];
        let dx = (a.destination.0 - a.position.0) as f64;
        let dy = (a.destination.1 - a.position.1) as f64;
        -dx.hypot(dy)
    }

    pub fn is_done(&self, state: &GridState) -> bool {
        state.all_reached() || state.step_count >= self.max_steps
    }

    pub fn step(&self, state: &GridState, actions: &[Action]) -> Result<StepOutcome> {
        if actions.len() != state.n_agents() {
            return Err(Error::AgentCount {
                expected: state.n_agents(),
                actual: actions.len(),
            });
        }
        if self.is_done(state) {
            return Err(Error::Config("step called on a finished episode".into()));
        }
        let mut next = state.clone();
        for (agent, &action) in next.agents.iter_mut().zip(actions) {
            if agent.reached {
                continue;
            }
            let (position, heading) = self.transition(agent.position, agent.heading, action);
            agent.position = position;
            agent.heading = heading;
            agent.reached = position == agent.destination;
        }
        next.step_count += 1;
        let rewards = (0..next.n_agents()).map(|i| self.reward_of(&next, i)).collect();
        Ok(StepOutcome {
            observations: self.observe_all(&next),
            done: self.is_done(&next),
            state: next,
            rewards,
        })
    }
}
