use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::schedule::EpsilonSchedule;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgentKind {
    Random,
    Dql,
    A2c,
    Ppo,
}

impl AgentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AgentKind::Random => "random",
            AgentKind::Dql => "dql",
            AgentKind::A2c => "a2c",
            AgentKind::Ppo => "ppo",
        }
    }

    pub fn is_learner(self) -> bool {
        self != AgentKind::Random
    }

    fn default_learning_rate(self) -> f64 {
        match self {
            AgentKind::Dql => 1e-3,
            _ => 3e-4,
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(AgentKind::Random),
            "dql" => Ok(AgentKind::Dql),
            "a2c" => Ok(AgentKind::A2c),
            "ppo" => Ok(AgentKind::Ppo),
            other => Err(Error::InvalidArgument(format!("unknown agent kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PpoSettings {
    pub kl_target: f64,
    pub initial_beta: f64,
    pub epochs: usize,
}

impl Default for PpoSettings {
    fn default() -> Self {
        Self { kl_target: 0.01, initial_beta: 1.0, epochs: 4 }
    }
}

/// Everything needed to build a fresh agent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentConfig {
    pub kind: AgentKind,
    pub hidden: Vec<usize>,
    /// Falls back to 1e-3 for DQL and 3e-4 for the policy learners.
    pub learning_rate: Option<f64>,
    pub gamma: f64,
    pub epsilon: EpsilonSchedule,
    pub replay_capacity: usize,
    pub batch_size: usize,
    pub target_sync: u64,
    pub entropy_coef: f64,
    pub value_coef: f64,
    pub ppo: PpoSettings,
    /// Policy learners act by masked argmax instead of sampling when not training.
    pub greedy_eval: bool,
    pub max_grad_norm: Option<f64>,
    /// Seeds weight init and replay sampling.
    pub seed: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            kind: AgentKind::Dql,
            hidden: vec![256, 256],
            learning_rate: None,
            gamma: 0.99,
            epsilon: EpsilonSchedule::default(),
            replay_capacity: 10_000,
            batch_size: 64,
            target_sync: 100,
            entropy_coef: 0.01,
            value_coef: 0.5,
            ppo: PpoSettings::default(),
            greedy_eval: false,
            max_grad_norm: Some(10.0),
            seed: 0,
        }
    }
}

impl AgentConfig {
    pub fn new(kind: AgentKind) -> Self {
        Self { kind, ..Self::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_hidden(mut self, hidden: &[usize]) -> Self {
        self.hidden = hidden.to_vec();
        self
    }

    pub fn learning_rate(&self) -> f64 {
        self.learning_rate.unwrap_or_else(|| self.kind.default_learning_rate())
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.hidden.is_empty() || self.hidden.contains(&0) {
            return bad("hidden layer sizes must be non-empty and positive");
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad("gamma must lie in [0, 1]");
        }
        if self.learning_rate() <= 0.0 {
            return bad("learning rate must be positive");
        }
        if self.batch_size == 0 || self.replay_capacity < self.batch_size {
            return bad("replay capacity must hold at least one batch");
        }
        if self.target_sync == 0 || self.ppo.epochs == 0 {
            return bad("target sync interval and PPO epochs must be positive");
        }
        if self.ppo.kl_target <= 0.0 || self.ppo.initial_beta <= 0.0 {
            return bad("KL target and initial beta must be positive");
        }
        self.epsilon.validate()
    }
}
