//! The four player types behind one acting/learning interface: a uniform random
//! baseline, double DQN, episodic advantage actor-critic with a shared trunk, and
//! PPO with an adaptive KL penalty over separate actor and critic networks.

mod a2c;
mod config;
mod dql;
mod ppo;
mod random;
mod replay;
mod returns;
mod schedule;

use std::collections::hash_map::DefaultHasher;
use std::hash::Hasher;
use std::path::Path;

pub use a2c::{A2cAgent, EpisodeBatch};
pub use config::{AgentConfig, AgentKind, PpoSettings};
pub use dql::DqlAgent;
pub use ppo::PpoAgent;
pub use random::RandomAgent;
pub use replay::ReplayBuffer;
pub use returns::discounted_returns;
pub use schedule::{EpsilonSchedule, Exploration, KlController};

use crate::action_space::{ActionIndex, MaskVector};
use crate::engine::StateVector;
use crate::error::{Error, Result};
use crate::neural::{load_weights, save_weights, Parameters, WeightFile};
use crate::seeding::SimRng;

/// One transition from the acting agent's point of view. Opponent moves between
/// `state` and `next_state` are part of the environment.
#[derive(Clone, Debug, PartialEq)]
pub struct Experience {
    pub state: StateVector,
    /// Mask the action was chosen under.
    pub mask: MaskVector,
    pub action: ActionIndex,
    pub reward: f64,
    pub next_state: StateVector,
    /// Ignored when `terminal`.
    pub next_mask: MaskVector,
    pub terminal: bool,
}

/// What an agent chose, plus the raw 200-wide outputs it chose from (action values
/// or policy logits) for the confidence trace.
#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    pub action: ActionIndex,
    pub outputs: Option<Vec<f64>>,
}

pub trait Agent: Send {
    fn kind(&self) -> AgentKind;

    /// Picks an allowed action. Never returns a slot the mask forbids.
    fn act(&mut self, state: &StateVector, mask: &MaskVector, rng: &mut SimRng) -> Result<Decision>;

    /// Stores one of this agent's own transitions while training.
    fn record(&mut self, _experience: Experience) {}

    /// Called once per match with the finishing order and this agent's seat.
    fn end_of_match(&mut self, _positions: &[usize; 4], _seat: usize) -> Result<()> {
        Ok(())
    }

    /// Runs whatever per-step update the learner does; a no-op when untrained.
    fn train_step(&mut self) -> Result<()> {
        Ok(())
    }

    fn set_training(&mut self, _on: bool) {}

    fn is_training(&self) -> bool {
        false
    }

    fn clone_box(&self) -> Box<dyn Agent>;

    /// Serialisable snapshot of the learned networks, if any.
    fn weight_file(&self) -> Option<WeightFile> {
        None
    }

    /// Hash over every learned parameter; constant while no update runs.
    fn weights_hash(&self) -> u64 {
        0
    }

    /// Number of optimizer updates applied so far.
    fn updates(&self) -> u64 {
        0
    }
}

impl Clone for Box<dyn Agent> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

pub(crate) fn hash_params(models: &[&dyn Parameters]) -> u64 {
    let mut h = DefaultHasher::new();
    for m in models {
        m.visit(&mut |s| s.iter().for_each(|v| h.write_u64(v.to_bits())));
    }
    h.finish()
}

/// Fresh agent from a configuration.
pub fn build_agent(config: &AgentConfig) -> Result<Box<dyn Agent>> {
    config.validate()?;
    Ok(match config.kind {
        AgentKind::Random => Box::new(RandomAgent::new()),
        AgentKind::Dql => Box::new(DqlAgent::new(config.clone())?),
        AgentKind::A2c => Box::new(A2cAgent::new(config.clone())?),
        AgentKind::Ppo => Box::new(PpoAgent::new(config.clone())?),
    })
}

/// Agent rebuilt from a weight file's config and networks, in evaluation mode.
pub fn agent_from_weights(file: &WeightFile) -> Result<Box<dyn Agent>> {
    let kind: AgentKind = file.agent_kind.parse()?;
    let config: AgentConfig = serde_json::from_value(file.config.clone())
        .map_err(|e| Error::Weights(format!("agent config: {e}")))?;
    if config.kind != kind {
        return Err(Error::Weights(format!("file says {kind}, config says {}", config.kind)));
    }
    config.validate()?;
    let agent: Box<dyn Agent> = match kind {
        AgentKind::Random => Box::new(RandomAgent::new()),
        AgentKind::Dql => Box::new(DqlAgent::from_weights(config, file)?),
        AgentKind::A2c => Box::new(A2cAgent::from_weights(config, file)?),
        AgentKind::Ppo => Box::new(PpoAgent::from_weights(config, file)?),
    };
    Ok(agent)
}

pub fn save_agent(agent: &dyn Agent, path: &Path) -> Result<()> {
    let file = agent
        .weight_file()
        .ok_or_else(|| Error::InvalidArgument(format!("{} agent has no weights", agent.kind())))?;
    save_weights(&file, path)
}

pub fn load_agent(path: &Path) -> Result<Box<dyn Agent>> {
    agent_from_weights(&load_weights(path)?)
}
