//! Experiment orchestration: configs, training loop with periodic
//! evaluation, metrics CSV, checkpoints, trajectory export and SVG plots.

mod checkpoint;
mod config;
mod eval;
mod metrics;
mod plot;
mod run;
mod trajectory;

use std::path::Path;

pub use checkpoint::{AgentRecord, Checkpoint, NetworkRecord, RngState, CHECKPOINT_VERSION};
pub use config::ExperimentConfig;
pub use eval::{evaluate, greedy_episode, AgentEval, EvalReport, StepRecord};
pub use metrics::{read_metrics, MetricsRow, MetricsWriter, METRICS_HEADER};
pub use plot::{render_plots, returns_svg, trajectory_svg};
pub use run::{run_training, TrainingOutcome, CHECKPOINT_FILE, EVAL_SEED_OFFSET, METRICS_FILE};
pub use trajectory::{
    collect_trajectories, export_trajectories, read_trajectories, write_trajectories,
    TrajectoryRow, TRAJECTORY_HEADER,
};

use crate::error::{Error, Result};

/// Reads a headed CSV, insisting on the exact header.
fn read_csv<T: serde::de::DeserializeOwned>(path: &Path, header: &[&str]) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::format(path, format!("{other:?}")),
        })?;
    let found = reader
        .headers()
        .map_err(|e| Error::format(path, e.to_string()))?
        .clone();
    if found.is_empty() {
        return Err(Error::format(path, "empty file"));
    }
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("expected header {:?}", header.join(",")),
        });
    }
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        match record {
            Ok(row) => rows.push(row),
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: e.to_string(),
                });
            }
        }
    }
    Ok(rows)
}
