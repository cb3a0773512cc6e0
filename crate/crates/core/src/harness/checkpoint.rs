//! Versioned JSON checkpoints. Network parameters are stored as base64 of
//! little-endian `f64` blocks so a load reproduces them bit for bit.

use std::path::Path;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use crate::error::{Error, Result};
use crate::maddpg::AgentRuntime;
use crate::numcore::{Matrix, MlpNetwork, OutputActivation};

pub const CHECKPOINT_VERSION: u32 = 1;

fn encode(values: &[f64]) -> String {
    let bytes: Vec<u8> = values.iter().flat_map(|v| v.to_le_bytes()).collect();
    STANDARD.encode(bytes)
}

fn decode(text: &str) -> std::result::Result<Vec<f64>, String> {
    let bytes = STANDARD.decode(text).map_err(|e| e.to_string())?;
    if bytes.len() % 8 != 0 {
        return Err(format!("parameter block of {} bytes is not a multiple of 8", bytes.len()));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub layer_sizes: Vec<usize>,
    pub output_activation: OutputActivation,
    pub weights: Vec<String>,
    pub biases: Vec<String>,
}

impl NetworkRecord {
    pub fn from_network(net: &MlpNetwork) -> Self {
        Self {
            layer_sizes: net.layer_sizes().to_vec(),
            output_activation: net.output_activation(),
            weights: net.weights().iter().map(|w| encode(w.data())).collect(),
            biases: net.biases().iter().map(|b| encode(b)).collect(),
        }
    }

    pub fn to_network(&self) -> std::result::Result<MlpNetwork, String> {
        let sizes = &self.layer_sizes;
        if self.weights.len() + 1 != sizes.len() {
            return Err(format!("{} weight blocks for layers {sizes:?}", self.weights.len()));
        }
        let weights = self
            .weights
            .iter()
            .zip(sizes.windows(2))
            .map(|(text, w)| {
                decode(text).and_then(|data| Matrix::from_vec(w[1], w[0], data).map_err(|e| e.to_string()))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let biases = self
            .biases
            .iter()
            .map(|text| decode(text))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        MlpNetwork::from_parameters(sizes, self.output_activation, weights, biases)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentRecord {
    pub actor: NetworkRecord,
    pub critic: NetworkRecord,
    pub target_actor: NetworkRecord,
    pub target_critic: NetworkRecord,
}

/// Position of the run's ChaCha8 stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngState {
    pub seed: String,
    pub stream: u64,
    /// Word position as a decimal string (it is a `u128`).
    pub word_pos: String,
}

impl RngState {
    pub fn capture(rng: &crate::Rng) -> Self {
        Self {
            seed: rng.get_seed().iter().map(|b| format!("{b:02x}")).collect(),
            stream: rng.get_stream(),
            word_pos: rng.get_word_pos().to_string(),
        }
    }

    pub fn restore(&self) -> std::result::Result<crate::Rng, String> {
        use rand::SeedableRng;
        if self.seed.len() != 64 {
            return Err("rng seed must be 32 hex-encoded bytes".into());
        }
        let mut seed = [0u8; 32];
        for (i, byte) in seed.iter_mut().enumerate() {
            *byte = u8::from_str_radix(&self.seed[2 * i..2 * i + 2], 16).map_err(|e| e.to_string())?;
        }
        let mut rng = crate::Rng::from_seed(seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(self.word_pos.parse().map_err(|e: std::num::ParseIntError| e.to_string())?);
        Ok(rng)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub config: ExperimentConfig,
    /// Completed training iterations.
    pub iteration: usize,
    pub rng: RngState,
    pub agents: Vec<AgentRecord>,
}

impl Checkpoint {
    pub fn new(
        config: &ExperimentConfig,
        iteration: usize,
        rng: &crate::Rng,
        agents: &[AgentRuntime],
    ) -> Self {
        Self {
            format_version: CHECKPOINT_VERSION,
            config: config.clone(),
            iteration,
            rng: RngState::capture(rng),
            agents: agents
                .iter()
                .map(|a| AgentRecord {
                    actor: NetworkRecord::from_network(&a.actor),
                    critic: NetworkRecord::from_network(&a.critic),
                    target_actor: NetworkRecord::from_network(&a.target_actor),
                    target_critic: NetworkRecord::from_network(&a.target_critic),
                })
                .collect(),
        }
    }

    pub fn runtimes(&self) -> std::result::Result<Vec<AgentRuntime>, String> {
        self.agents
            .iter()
            .map(|a| {
                Ok(AgentRuntime {
                    actor: a.actor.to_network()?,
                    critic: a.critic.to_network()?,
                    target_actor: a.target_actor.to_network()?,
                    target_critic: a.target_critic.to_network()?,
                })
            })
            .collect()
    }

    /// Live actors only, which is all evaluation needs.
    pub fn actors(&self) -> std::result::Result<Vec<MlpNetwork>, String> {
        self.agents.iter().map(|a| a.actor.to_network()).collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("checkpoint is plain data");
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let checkpoint: Checkpoint =
            serde_json::from_str(&text).map_err(|e| Error::format(path, e.to_string()))?;
        if checkpoint.format_version != CHECKPOINT_VERSION {
            return Err(Error::format(
                path,
                format!("unsupported checkpoint version {}", checkpoint.format_version),
            ));
        }
        // Surface corrupt parameter blocks at load time.
        checkpoint
            .runtimes()
            .map_err(|message| Error::format(path, message))?;
        Ok(checkpoint)
    }
}
