use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agents::{AgentConfig, AgentKind};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    VsRandom,
    VsMyself,
    VsOthers,
}

/// One experiment, loadable from TOML. Unset fields take the defaults below.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: Protocol,
    /// Training matches against random opponents, or jointly in the tournament.
    pub training_games: usize,
    pub eval_runs: usize,
    pub eval_games: usize,
    pub generations: usize,
    /// Training matches per self-play generation.
    pub generation_games: usize,
    /// Frozen matches used to rank a generation.
    pub validation_games: usize,
    pub seed: u64,
    /// Carry finishing order into the next match's roles inside training blocks.
    pub carry_roles: bool,
    /// Template for every learner; `kind` is replaced per learner.
    pub agent: AgentConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            protocol: Protocol::VsRandom,
            training_games: 1000,
            eval_runs: 10,
            eval_games: 100,
            generations: 10,
            generation_games: 200,
            validation_games: 100,
            seed: 0,
            carry_roles: true,
            agent: AgentConfig::new(AgentKind::Dql),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("eval_runs", self.eval_runs),
            ("eval_games", self.eval_games),
            ("generations", self.generations),
            ("generation_games", self.generation_games),
            ("validation_games", self.validation_games),
        ];
        if let Some((name, _)) = counts.iter().find(|(_, v)| *v == 0) {
            return Err(Error::Config(format!("{name} must be positive")));
        }
        self.agent.validate()
    }

    /// Learner config of `kind` with its own seed.
    pub fn learner(&self, kind: AgentKind, seed: u64) -> AgentConfig {
        AgentConfig { kind, seed, ..self.agent.clone() }
    }
}
