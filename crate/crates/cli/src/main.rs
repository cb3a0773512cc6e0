use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use log::info;
use regmarl::harness::{
    evaluate, export_trajectories, render_plots, run_training, Checkpoint, EvalReport,
    ExperimentConfig, EVAL_SEED_OFFSET,
};
use regmarl::{gradcheck, seeded_rng, MlpNetwork};

#[derive(Parser, Debug)]
#[command(name = "regmarl", version, about = "Action-regularized MADDPG on grid navigation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train from a TOML config; writes metrics.csv and checkpoint.json.
    Train {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, conflicts_with = "seeds")]
        seed: Option<u64>,
        /// Comma-separated seeds, each trained in its own thread and
        /// written to `<out>/seed-<n>`.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Noise-free evaluation of a checkpoint.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        episodes: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Writes greedy trajectories as CSV.
    Export {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        episodes: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Renders SVG plots from metrics and trajectory CSVs.
    Plot {
        #[arg(long)]
        metrics: PathBuf,
        #[arg(long)]
        trajectories: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Finite-difference checks of the network and trainer gradients.
    Gradcheck {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-5)]
        epsilon: f64,
    },
}

const GRADCHECK_TOLERANCE: f64 = 1e-4;

fn load_checkpoint(path: &Path) -> Result<(Checkpoint, Vec<MlpNetwork>)> {
    if !path.exists() {
        bail!("checkpoint not found: {}", path.display());
    }
    let checkpoint = Checkpoint::load(path)?;
    let actors = checkpoint
        .actors()
        .map_err(anyhow::Error::msg)
        .with_context(|| format!("decoding {}", path.display()))?;
    Ok((checkpoint, actors))
}

fn train_one(mut config: ExperimentConfig, seed: Option<u64>, out: Option<PathBuf>) -> Result<()> {
    if let Some(seed) = seed {
        config.seed = seed;
    }
    if let Some(out) = out {
        config.output_dir = out;
    }
    let outcome = run_training(&config)?;
    println!("metrics: {}", outcome.metrics_path.display());
    println!("checkpoint: {}", outcome.checkpoint_path.display());
    Ok(())
}

fn print_report(report: &EvalReport) {
    println!("episodes: {}", report.episodes);
    for (i, agent) in report.agents.iter().enumerate() {
        let f = &agent.action_frequencies;
        println!(
            "agent {}: mean_return {:.4} success_rate {:.3} mean_length {:.2} freq left {:.3} straight {:.3} right {:.3}",
            i + 1,
            agent.mean_return,
            agent.success_rate,
            agent.mean_episode_length,
            f[0],
            f[1],
            f[2]
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Train {
            config,
            seed,
            seeds,
            out,
        } => {
            let base = ExperimentConfig::load(&config)?;
            match seeds {
                Some(seeds) => {
                    let root = out.unwrap_or_else(|| base.output_dir.clone());
                    std::thread::scope(|scope| {
                        let handles: Vec<_> = seeds
                            .iter()
                            .map(|&s| {
                                let cfg = base.clone();
                                let dir = root.join(format!("seed-{s}"));
                                scope.spawn(move || train_one(cfg, Some(s), Some(dir)))
                            })
                            .collect();
                        handles
                            .into_iter()
                            .map(|h| h.join().expect("training thread panicked"))
                            .collect::<Result<Vec<_>>>()
                    })?;
                }
                None => train_one(base, seed, out)?,
            }
        }
        Command::Eval {
            checkpoint,
            episodes,
            seed,
        } => {
            let (ckpt, actors) = load_checkpoint(&checkpoint)?;
            let env = ckpt.config.env()?;
            let seed = seed.unwrap_or(ckpt.config.seed.wrapping_add(EVAL_SEED_OFFSET));
            let refs: Vec<&MlpNetwork> = actors.iter().collect();
            let report = evaluate(&env, &refs, episodes, &mut seeded_rng(seed))?;
            print_report(&report);
        }
        Command::Export {
            checkpoint,
            episodes,
            out,
            seed,
        } => {
            let (ckpt, actors) = load_checkpoint(&checkpoint)?;
            let env = ckpt.config.env()?;
            let seed = seed.unwrap_or(ckpt.config.seed.wrapping_add(EVAL_SEED_OFFSET));
            let refs: Vec<&MlpNetwork> = actors.iter().collect();
            let rows = export_trajectories(&env, &refs, episodes, &mut seeded_rng(seed), &out)?;
            println!("{} rows written to {}", rows.len(), out.display());
        }
        Command::Plot {
            metrics,
            trajectories,
            out,
        } => {
            for path in render_plots(&metrics, trajectories.as_deref(), &out)? {
                println!("{}", path.display());
            }
        }
        Command::Gradcheck {
            cases,
            seed,
            epsilon,
        } => {
            if !(epsilon > 0.0 && epsilon <= 1e-2) {
                bail!("epsilon must be in (0, 1e-2], got {epsilon}");
            }
            info!("running {cases} random gradient checks");
            let report = gradcheck::run_suite(cases, seed, epsilon)?;
            println!("cases: {}", report.cases);
            println!("network max relative error: {:.3e}", report.network_max);
            println!("critic max relative error: {:.3e}", report.critic_max);
            println!("actor max relative error: {:.3e}", report.actor_max);
            if report.max() >= GRADCHECK_TOLERANCE {
                bail!(
                    "max relative error {:.3e} exceeds {GRADCHECK_TOLERANCE:e}",
                    report.max()
                );
            }
            println!("ok");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("REGMARL_LOG", "info"))
        .format_timestamp(None)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
