//! Trajectory CSV: one row per agent move, header
//! `episode,step,agent,x,y,heading,action,reward,dest_x,dest_y`.
//! Positions are after the move; rows stop once an agent has arrived.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::eval::greedy_episode;
use crate::error::{Error, Result};
use crate::gridnav::{GridEnv, Heading};
use crate::numcore::MlpNetwork;

pub const TRAJECTORY_HEADER: [&str; 10] = [
    "episode", "step", "agent", "x", "y", "heading", "action", "reward", "dest_x", "dest_y",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub episode: usize,
    pub step: usize,
    pub agent: usize,
    pub x: i64,
    pub y: i64,
    pub heading: String,
    pub action: String,
    pub reward: f64,
    pub dest_x: i64,
    pub dest_y: i64,
}

fn heading_name(h: Heading) -> String {
    h.as_str().to_string()
}

/// Rolls out `episodes` greedy episodes on random destinations.
pub fn collect_trajectories<R: Rng + ?Sized>(
    env: &GridEnv,
    actors: &[&MlpNetwork],
    episodes: usize,
    rng: &mut R,
) -> Result<Vec<TrajectoryRow>> {
    let mut rows = Vec::new();
    for episode in 0..episodes {
        let (state, _) = env.reset(actors.len(), rng)?;
        greedy_episode(env, actors, state, |record, after| {
            let agent = &after.agents[record.agent];
            rows.push(TrajectoryRow {
                episode,
                step: record.step,
                agent: record.agent,
                x: agent.position.0,
                y: agent.position.1,
                heading: heading_name(agent.heading),
                action: record.action.to_string(),
                reward: record.reward,
                dest_x: agent.destination.0,
                dest_y: agent.destination.1,
            });
        })?;
    }
    Ok(rows)
}

pub fn write_trajectories(path: &Path, rows: &[TrajectoryRow]) -> Result<()> {
    let io = |e: csv::Error| Error::format(path, e.to_string());
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(io)?;
    writer.write_record(TRAJECTORY_HEADER).map_err(io)?;
    for row in rows {
        writer.serialize(row).map_err(io)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

pub fn export_trajectories<R: Rng + ?Sized>(
    env: &GridEnv,
    actors: &[&MlpNetwork],
    episodes: usize,
    rng: &mut R,
    path: &Path,
) -> Result<Vec<TrajectoryRow>> {
    let rows = collect_trajectories(env, actors, episodes, rng)?;
    write_trajectories(path, &rows)?;
    Ok(rows)
}

pub fn read_trajectories(path: &Path) -> Result<Vec<TrajectoryRow>> {
    super::read_csv(path, &TRAJECTORY_HEADER)
}
