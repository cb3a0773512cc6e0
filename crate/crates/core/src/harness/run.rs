use std::path::PathBuf;

use log::info;

use super::{evaluate, Checkpoint, ExperimentConfig, MetricsRow, MetricsWriter};
use crate::error::{Error, Result};
use crate::maddpg::Trainer;

pub const METRICS_FILE: &str = "metrics.csv";
pub const CHECKPOINT_FILE: &str = "checkpoint.json";

/// Periodic evaluations use a random source seeded with `seed + EVAL_SEED_OFFSET`,
/// re-created each time so every evaluation sees the same destinations.
pub const EVAL_SEED_OFFSET: u64 = 0x5eed_e7a1;

#[derive(Debug, Clone)]
pub struct TrainingOutcome {
    pub checkpoint: Checkpoint,
    pub metrics_path: PathBuf,
    pub checkpoint_path: PathBuf,
}

/// Trains for `config.iterations` iterations, writing `metrics.csv` as it
/// goes and `checkpoint.json` at the end, both under `config.output_dir`.
pub fn run_training(config: &ExperimentConfig) -> Result<TrainingOutcome> {
    config.validate()?;
    let out_dir = &config.output_dir;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let metrics_path = out_dir.join(METRICS_FILE);
    let checkpoint_path = out_dir.join(CHECKPOINT_FILE);

    let env = config.env()?;
    let mut trainer = Trainer::new(env, config.agents.clone(), config.trainer_config())?;
    let mut writer = MetricsWriter::create(&metrics_path)?;
    info!(
        "training {} ({} agents, seed {}) for {} iterations",
        config.label,
        config.n_agents(),
        config.seed,
        config.iterations
    );

    for iteration in 0..config.iterations {
        let metrics = trainer.train_iteration(iteration)?;
        let eval_returns = if (iteration + 1) % config.eval_every == 0 {
            let mut rng = crate::seeded_rng(config.seed.wrapping_add(EVAL_SEED_OFFSET));
            let report = evaluate(&env, &trainer.actors(), config.eval_episodes, &mut rng)?;
            Some(report.agents.iter().map(|a| a.mean_return).collect::<Vec<_>>())
        } else {
            None
        };
        writer.write(&MetricsRow::from_iteration(&metrics, eval_returns.as_deref()))?;
        if (iteration + 1) % 100 == 0 {
            info!(
                "iteration {}: sigma {:.3}, eval {:?}",
                iteration + 1,
                metrics.sigma,
                eval_returns
            );
        }
    }

    let checkpoint = Checkpoint::new(config, config.iterations, trainer.rng(), trainer.agents());
    checkpoint.save(&checkpoint_path)?;
    Ok(TrainingOutcome {
        checkpoint,
        metrics_path,
        checkpoint_path,
    })
}
