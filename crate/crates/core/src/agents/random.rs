use super::{Agent, AgentKind, Decision};
use crate::action_space::{masked_uniform, MaskVector};
use crate::engine::StateVector;
use crate::error::Result;
use crate::seeding::SimRng;

/// Picks uniformly among allowed actions.
#[derive(Clone, Debug, Default)]
pub struct RandomAgent;

impl RandomAgent {
    pub fn new() -> Self {
        Self
    }
}

impl Agent for RandomAgent {
    fn kind(&self) -> AgentKind {
        AgentKind::Random
    }

    fn act(&mut self, _state: &StateVector, mask: &MaskVector, rng: &mut SimRng) -> Result<Decision> {
        Ok(Decision { action: masked_uniform(mask, rng)?, outputs: None })
    }

    fn clone_box(&self) -> Box<dyn Agent> {
        Box::new(self.clone())
    }
}
