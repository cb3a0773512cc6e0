use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maddpg::IterationMetrics;

pub const METRICS_HEADER: [&str; 10] = [
    "iteration",
    "sigma",
    "agent",
    "train_return",
    "eval_return",
    "actor_loss",
    "critic_loss",
    "freq_left",
    "freq_straight",
    "freq_right",
];

/// One agent's numbers for one (1-based) iteration. Missing values are
/// written as empty fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub iteration: usize,
    pub sigma: f64,
    pub agent: usize,
    pub train_return: Option<f64>,
    pub eval_return: Option<f64>,
    pub actor_loss: Option<f64>,
    pub critic_loss: Option<f64>,
    pub freq_left: f64,
    pub freq_straight: f64,
    pub freq_right: f64,
}

impl MetricsRow {
    pub fn from_iteration(metrics: &IterationMetrics, eval_returns: Option<&[f64]>) -> Vec<Self> {
        metrics
            .agents
            .iter()
            .enumerate()
            .map(|(agent, m)| {
                let [freq_left, freq_straight, freq_right] = m.action_frequencies();
                MetricsRow {
                    iteration: metrics.iteration + 1,
                    sigma: metrics.sigma,
                    agent,
                    train_return: m.train_return,
                    eval_return: eval_returns.map(|r| r[agent]),
                    actor_loss: m.actor_loss,
                    critic_loss: m.critic_loss,
                    freq_left,
                    freq_straight,
                    freq_right,
                }
            })
            .collect()
    }
}

/// Appends rows to a metrics CSV, flushing after every iteration.
pub struct MetricsWriter {
    path: PathBuf,
    writer: csv::Writer<File>,
}

impl MetricsWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(path)
            .map_err(|e| Error::format(path, e.to_string()))?;
        writer
            .write_record(METRICS_HEADER)
            .map_err(|e| Error::format(path, e.to_string()))?;
        Ok(Self {
            path: path.to_path_buf(),
            writer,
        })
    }

    pub fn write(&mut self, rows: &[MetricsRow]) -> Result<()> {
        for row in rows {
            self.writer
                .serialize(row)
                .map_err(|e| Error::format(&self.path, e.to_string()))?;
        }
        self.writer.flush().map_err(|e| Error::io(&self.path, e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRow>> {
    super::read_csv(path, &METRICS_HEADER)
}
