use rand::SeedableRng;

use super::replay::ReplayBuffer;
use super::schedule::Exploration;
use super::{hash_params, Agent, AgentConfig, AgentKind, Decision, Experience};
use crate::action_space::{epsilon_greedy, masked_argmax, MaskVector, ACTION_COUNT};
use crate::engine::{StateVector, STATE_WIDTH};
use crate::error::Result;
use crate::neural::{adam_step, backward, batch_matrix, Activation, Mlp, OptimizerState, QRegression, WeightFile};
use crate::seeding::SimRng;

/// Double deep Q-learning: the online network picks the next action, the target
/// network scores it; the target is hard-synced every `target_sync` updates.
#[derive(Clone, Debug)]
pub struct DqlAgent {
    config: AgentConfig,
    online: Mlp,
    target: Mlp,
    optimizer: OptimizerState,
    buffer: ReplayBuffer,
    exploration: Exploration,
    updates: u64,
    rng: SimRng,
    training: bool,
}

impl DqlAgent {
    pub fn new(config: AgentConfig) -> Result<Self> {
        let mut rng = SimRng::seed_from_u64(config.seed);
        let mut dims = vec![STATE_WIDTH];
        dims.extend_from_slice(&config.hidden);
        dims.push(ACTION_COUNT);
        let online = Mlp::new(&dims, Activation::Relu, Activation::Linear, 1.0, &mut rng)?;
        Ok(Self::assemble(config, online, rng))
    }

    pub fn from_weights(config: AgentConfig, file: &WeightFile) -> Result<Self> {
        let online = file.network("online")?;
        let rng = SimRng::seed_from_u64(config.seed);
        let mut agent = Self::assemble(config, online, rng);
        agent.training = false;
        Ok(agent)
    }

    fn assemble(config: AgentConfig, online: Mlp, rng: SimRng) -> Self {
        let optimizer = OptimizerState::for_model(config.learning_rate(), &online);
        Self {
            buffer: ReplayBuffer::new(config.replay_capacity),
            exploration: Exploration::new(config.epsilon.clone()),
            target: online.clone(),
            online,
            optimizer,
            updates: 0,
            rng,
            training: true,
            config,
        }
    }

    pub fn online(&self) -> &Mlp {
        &self.online
    }

    pub fn target(&self) -> &Mlp {
        &self.target
    }

    pub fn epsilon(&self) -> f64 {
        self.exploration.value()
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    /// Regression targets for a batch: `r` when terminal, otherwise
    /// `r + gamma * Q_target(s', argmax_{a in next_mask} Q_online(s', a))`.
    pub fn targets(&self, batch: &[&Experience]) -> Result<Vec<f64>> {
        let next = batch_matrix(&batch.iter().map(|e| e.next_state).collect::<Vec<_>>());
        let q_online = self.online.forward_batch(&next)?;
        let q_target = self.target.forward_batch(&next)?;
        batch
            .iter()
            .enumerate()
            .map(|(b, e)| {
                if e.terminal || self.config.gamma == 0.0 {
                    return Ok(e.reward);
                }
                let row = q_online.row(b);
                let best = masked_argmax(row.as_slice().expect("contiguous"), &e.next_mask)?;
                Ok(e.reward + self.config.gamma * q_target[[b, best.0]])
            })
            .collect()
    }

    /// Loss and gradient of the Q regression on `batch` at the current weights.
    pub fn loss_and_gradient(&self, batch: &[&Experience]) -> Result<crate::neural::GradientReport> {
        let targets = self.targets(batch)?;
        let loss = QRegression { actions: batch.iter().map(|e| e.action.0).collect(), targets };
        let states = batch_matrix(&batch.iter().map(|e| e.state).collect::<Vec<_>>());
        backward(&self.online, states, &loss)
    }

    fn update(&mut self) -> Result<()> {
        let sample: Vec<Experience> =
            self.buffer.sample(self.config.batch_size, &mut self.rng).into_iter().cloned().collect();
        let refs: Vec<&Experience> = sample.iter().collect();
        let mut report = self.loss_and_gradient(&refs)?;
        if let Some(max) = self.config.max_grad_norm {
            report.clip_norm(max);
        }
        adam_step(&mut self.online, &mut self.optimizer, &report)?;
        self.updates += 1;
        if self.updates % self.config.target_sync == 0 {
            self.target = self.online.clone();
        }
        self.exploration.decay();
        Ok(())
    }
}

impl Agent for DqlAgent {
    fn kind(&self) -> AgentKind {
        AgentKind::Dql
    }

    fn act(&mut self, state: &StateVector, mask: &MaskVector, rng: &mut SimRng) -> Result<Decision> {
        let q = self.online.forward(state)?;
        let action = if self.training {
            epsilon_greedy(&q, mask, self.exploration.value(), rng)?
        } else {
            masked_argmax(&q, mask)?
        };
        Ok(Decision { action, outputs: Some(q) })
    }

    fn record(&mut self, experience: Experience) {
        if self.training {
            self.buffer.push(experience);
        }
    }

    fn train_step(&mut self) -> Result<()> {
        if !self.training || self.buffer.len() < self.config.batch_size {
            return Ok(());
        }
        self.update()
    }

    fn set_training(&mut self, on: bool) {
        self.training = on;
    }

    fn is_training(&self) -> bool {
        self.training
    }

    fn clone_box(&self) -> Box<dyn Agent> {
        Box::new(self.clone())
    }

    fn weight_file(&self) -> Option<WeightFile> {
        let config = serde_json::to_value(&self.config).expect("config serialises");
        Some(WeightFile::new("dql", &[("online", &self.online)], config))
    }

    fn weights_hash(&self) -> u64 {
        hash_params(&[&self.online, &self.target])
    }

    fn updates(&self) -> u64 {
        self.updates
    }
}
