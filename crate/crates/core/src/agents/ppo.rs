use rand::SeedableRng;

use super::a2c::{explore_or_follow, policy_action, EpisodeBatch};
use super::schedule::{Exploration, KlController};
use super::{hash_params, Agent, AgentConfig, AgentKind, Decision, Experience};
use crate::action_space::{MaskVector, ACTION_COUNT};
use crate::engine::{StateVector, STATE_WIDTH};
use crate::error::Result;
use crate::neural::{
    adam_step, backward, masked_softmax, Activation, GradientReport, KlPenalizedSurrogate, Mlp, OptimizerState,
    ValueRegression, WeightFile,
};
use crate::seeding::SimRng;

/// Proximal policy optimisation with an adaptive KL penalty and separate actor
/// and critic networks. The rollout is one or more completed matches.
#[derive(Clone, Debug)]
pub struct PpoAgent {
    config: AgentConfig,
    actor: Mlp,
    critic: Mlp,
    actor_opt: OptimizerState,
    critic_opt: OptimizerState,
    rollout: Vec<Experience>,
    completed: usize,
    kl: KlController,
    last_kl: f64,
    exploration: Exploration,
    updates: u64,
    training: bool,
}

fn dims(config: &AgentConfig, out: usize) -> Vec<usize> {
    let mut d = vec![STATE_WIDTH];
    d.extend_from_slice(&config.hidden);
    d.push(out);
    d
}

impl PpoAgent {
    pub fn new(config: AgentConfig) -> Result<Self> {
        let mut rng = SimRng::seed_from_u64(config.seed);
        let actor = Mlp::new(&dims(&config, ACTION_COUNT), Activation::Relu, Activation::Linear, 0.01, &mut rng)?;
        let critic = Mlp::new(&dims(&config, 1), Activation::Relu, Activation::Linear, 1.0, &mut rng)?;
        Ok(Self::assemble(config, actor, critic))
    }

    pub fn from_weights(config: AgentConfig, file: &WeightFile) -> Result<Self> {
        let mut agent = Self::assemble(config, file.network("actor")?, file.network("critic")?);
        agent.training = false;
        Ok(agent)
    }

    fn assemble(config: AgentConfig, actor: Mlp, critic: Mlp) -> Self {
        let lr = config.learning_rate();
        Self {
            actor_opt: OptimizerState::for_model(lr, &actor),
            critic_opt: OptimizerState::for_model(lr, &critic),
            kl: KlController::new(config.ppo.initial_beta, config.ppo.kl_target),
            exploration: Exploration::new(config.epsilon.clone()),
            actor,
            critic,
            rollout: Vec::new(),
            completed: 0,
            last_kl: 0.0,
            updates: 0,
            training: true,
            config,
        }
    }

    pub fn actor(&self) -> &Mlp {
        &self.actor
    }

    pub fn critic(&self) -> &Mlp {
        &self.critic
    }

    pub fn kl_controller(&self) -> &KlController {
        &self.kl
    }

    /// Divergence between the pre- and post-update policies of the last update.
    pub fn last_kl(&self) -> f64 {
        self.last_kl
    }

    /// Surrogate loss for `steps` against the given old policy distributions.
    pub fn surrogate(&self, steps: &[Experience], old_probs: Vec<Vec<f64>>) -> Result<(KlPenalizedSurrogate, EpisodeBatch)> {
        let batch = EpisodeBatch::from_steps(steps, self.config.gamma);
        let values = self.critic.forward_batch(&batch.states)?;
        let advantages = batch.returns.iter().zip(values.column(0)).map(|(r, v)| r - v).collect();
        let loss = KlPenalizedSurrogate {
            masks: batch.masks.clone(),
            actions: batch.actions.clone(),
            old_probs,
            advantages,
            beta: self.kl.beta,
        };
        Ok((loss, batch))
    }

    /// Masked policy distributions of the current actor for each step.
    pub fn policy_probs(&self, steps: &[Experience]) -> Result<Vec<Vec<f64>>> {
        let states = crate::neural::batch_matrix(&steps.iter().map(|e| e.state).collect::<Vec<_>>());
        let logits = self.actor.forward_batch(&states)?;
        steps
            .iter()
            .enumerate()
            .map(|(b, e)| masked_softmax(logits.row(b).as_slice().expect("contiguous"), &e.mask))
            .collect()
    }

    /// Actor gradient of the surrogate and critic gradient of the value
    /// regression, at the current weights.
    pub fn loss_and_gradients(
        &self,
        steps: &[Experience],
        old_probs: Vec<Vec<f64>>,
    ) -> Result<(GradientReport, GradientReport)> {
        let (surrogate, batch) = self.surrogate(steps, old_probs)?;
        let actor = backward(&self.actor, batch.states.clone(), &surrogate)?;
        let critic = backward(&self.critic, batch.states, &ValueRegression { targets: batch.returns })?;
        Ok((actor, critic))
    }

    fn update(&mut self) -> Result<()> {
        let steps = std::mem::take(&mut self.rollout);
        self.completed = 0;
        if steps.is_empty() {
            return Ok(());
        }
        let old_probs = self.policy_probs(&steps)?;
        let (probe, _) = self.surrogate(&steps, old_probs.clone())?;
        let excluded = probe.excluded();
        if excluded > 0 {
            log::warn!("ppo: {excluded} samples with zero old probability left out");
        }
        for _ in 0..self.config.ppo.epochs {
            let (mut actor, mut critic) = self.loss_and_gradients(&steps, old_probs.clone())?;
            if let Some(max) = self.config.max_grad_norm {
                actor.clip_norm(max);
                critic.clip_norm(max);
            }
            adam_step(&mut self.actor, &mut self.actor_opt, &actor)?;
            adam_step(&mut self.critic, &mut self.critic_opt, &critic)?;
        }
        let (after, batch) = self.surrogate(&steps, old_probs)?;
        let logits = self.actor.forward_batch(&batch.states)?;
        self.last_kl = after.mean_kl(&logits)?;
        self.kl.update(self.last_kl);
        self.updates += 1;
        self.exploration.decay();
        Ok(())
    }
}

impl Agent for PpoAgent {
    fn kind(&self) -> AgentKind {
        AgentKind::Ppo
    }

    fn act(&mut self, state: &StateVector, mask: &MaskVector, rng: &mut SimRng) -> Result<Decision> {
        let logits = self.actor.forward(state)?;
        let action = if self.training {
            explore_or_follow(&logits, mask, self.exploration.value(), rng)?
        } else {
            policy_action(&logits, mask, self.config.greedy_eval, rng)?
        };
        Ok(Decision { action, outputs: Some(logits) })
    }

    fn record(&mut self, experience: Experience) {
        if self.training {
            self.rollout.push(experience);
        }
    }

    fn end_of_match(&mut self, _positions: &[usize; 4], _seat: usize) -> Result<()> {
        if self.training && !self.rollout.is_empty() {
            self.completed += 1;
            self.train_step()?;
        }
        Ok(())
    }

    fn train_step(&mut self) -> Result<()> {
        if !self.training || self.completed == 0 {
            return Ok(());
        }
        self.update()
    }

    fn set_training(&mut self, on: bool) {
        self.training = on;
        self.rollout.clear();
        self.completed = 0;
    }

    fn is_training(&self) -> bool {
        self.training
    }

    fn clone_box(&self) -> Box<dyn Agent> {
        Box::new(self.clone())
    }

    fn weight_file(&self) -> Option<WeightFile> {
        let config = serde_json::to_value(&self.config).expect("config serialises");
        Some(WeightFile::new("ppo", &[("actor", &self.actor), ("critic", &self.critic)], config))
    }

    fn weights_hash(&self) -> u64 {
        hash_params(&[&self.actor, &self.critic])
    }

    fn updates(&self) -> u64 {
        self.updates
    }
}
