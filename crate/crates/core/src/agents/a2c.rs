use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};

use super::returns::discounted_returns;
use super::schedule::Exploration;
use super::{hash_params, Agent, AgentConfig, AgentKind, Decision, Experience};
use crate::action_space::{masked_argmax, masked_uniform, ActionIndex, MaskVector, ACTION_COUNT};
use crate::engine::{StateVector, STATE_WIDTH};
use crate::error::{Error, Result};
use crate::neural::{
    adam_step, batch_matrix, masked_softmax, ActorCritic, GradientReport, OptimizerState, PolicyGradient,
    ValueRegression, WeightFile,
};
use crate::seeding::SimRng;

/// Samples from the masked policy, or takes its mode when `greedy`.
pub(crate) fn policy_action(logits: &[f64], mask: &MaskVector, greedy: bool, rng: &mut SimRng) -> Result<ActionIndex> {
    if greedy {
        return masked_argmax(logits, mask);
    }
    let probs = masked_softmax(logits, mask)?;
    let dist = WeightedIndex::new(&probs).map_err(|e| Error::CorruptedState(format!("policy: {e}")))?;
    Ok(ActionIndex(dist.sample(rng)))
}

/// Epsilon-uniform exploration around the policy while training.
pub(crate) fn explore_or_follow(
    logits: &[f64],
    mask: &MaskVector,
    epsilon: f64,
    rng: &mut SimRng,
) -> Result<ActionIndex> {
    if rng.gen::<f64>() < epsilon {
        masked_uniform(mask, rng)
    } else {
        policy_action(logits, mask, false, rng)
    }
}

/// Stacked view of one finished episode.
pub struct EpisodeBatch {
    pub states: ndarray::Array2<f64>,
    pub masks: Vec<MaskVector>,
    pub actions: Vec<usize>,
    pub returns: Vec<f64>,
}

impl EpisodeBatch {
    /// Returns are computed per episode, each terminated by a `terminal` step.
    pub fn from_steps(steps: &[Experience], gamma: f64) -> Self {
        let mut returns = Vec::with_capacity(steps.len());
        let mut start = 0;
        for (i, e) in steps.iter().enumerate() {
            if e.terminal || i + 1 == steps.len() {
                let rewards: Vec<f64> = steps[start..=i].iter().map(|e| e.reward).collect();
                returns.extend(discounted_returns(&rewards, gamma));
                start = i + 1;
            }
        }
        Self {
            states: batch_matrix(&steps.iter().map(|e| e.state).collect::<Vec<_>>()),
            masks: steps.iter().map(|e| e.mask).collect(),
            actions: steps.iter().map(|e| e.action.0).collect(),
            returns,
        }
    }
}

/// Advantage actor-critic updated once per match from Monte-Carlo returns.
#[derive(Clone, Debug)]
pub struct A2cAgent {
    config: AgentConfig,
    model: ActorCritic,
    optimizer: OptimizerState,
    episode: Vec<Experience>,
    exploration: Exploration,
    updates: u64,
    training: bool,
}

impl A2cAgent {
    pub fn new(config: AgentConfig) -> Result<Self> {
        let mut rng = SimRng::seed_from_u64(config.seed);
        let model = ActorCritic::new(STATE_WIDTH, &config.hidden, ACTION_COUNT, &mut rng)?;
        Ok(Self::assemble(config, model))
    }

    pub fn from_weights(config: AgentConfig, file: &WeightFile) -> Result<Self> {
        let model = ActorCritic::from_parts(file.network("trunk")?, file.network("actor")?, file.network("critic")?)?;
        let mut agent = Self::assemble(config, model);
        agent.training = false;
        Ok(agent)
    }

    fn assemble(config: AgentConfig, model: ActorCritic) -> Self {
        Self {
            optimizer: OptimizerState::for_model(config.learning_rate(), &model),
            exploration: Exploration::new(config.epsilon.clone()),
            model,
            episode: Vec::new(),
            updates: 0,
            training: true,
            config,
        }
    }

    pub fn model(&self) -> &ActorCritic {
        &self.model
    }

    pub fn epsilon(&self) -> f64 {
        self.exploration.value()
    }

    /// Combined actor-critic loss and gradient over the given steps.
    pub fn loss_and_gradient(&self, steps: &[Experience]) -> Result<GradientReport> {
        let batch = EpisodeBatch::from_steps(steps, self.config.gamma);
        let (_, values) = self.model.forward_batch(&batch.states)?;
        let advantages: Vec<f64> = batch.returns.iter().zip(values.column(0)).map(|(r, v)| r - v).collect();
        let actor = PolicyGradient {
            masks: batch.masks,
            actions: batch.actions,
            advantages,
            entropy_coef: self.config.entropy_coef,
        };
        let critic = ValueRegression { targets: batch.returns };
        self.model.backward(batch.states, &actor, &critic, self.config.value_coef)
    }

    fn update(&mut self) -> Result<()> {
        let steps = std::mem::take(&mut self.episode);
        let mut report = self.loss_and_gradient(&steps)?;
        if let Some(max) = self.config.max_grad_norm {
            report.clip_norm(max);
        }
        adam_step(&mut self.model, &mut self.optimizer, &report)?;
        self.updates += 1;
        self.exploration.decay();
        Ok(())
    }
}

impl Agent for A2cAgent {
    fn kind(&self) -> AgentKind {
        AgentKind::A2c
    }

    fn act(&mut self, state: &StateVector, mask: &MaskVector, rng: &mut SimRng) -> Result<Decision> {
        let (logits, _) = self.model.forward(state)?;
        let action = if self.training {
            explore_or_follow(&logits, mask, self.exploration.value(), rng)?
        } else {
            policy_action(&logits, mask, self.config.greedy_eval, rng)?
        };
        Ok(Decision { action, outputs: Some(logits) })
    }

    fn record(&mut self, experience: Experience) {
        if self.training {
            self.episode.push(experience);
        }
    }

    fn end_of_match(&mut self, _positions: &[usize; 4], _seat: usize) -> Result<()> {
        if !self.training || self.episode.is_empty() {
            self.episode.clear();
            return Ok(());
        }
        self.update()
    }

    fn set_training(&mut self, on: bool) {
        self.training = on;
        self.episode.clear();
    }

    fn is_training(&self) -> bool {
        self.training
    }

    fn clone_box(&self) -> Box<dyn Agent> {
        Box::new(self.clone())
    }

    fn weight_file(&self) -> Option<WeightFile> {
        let config = serde_json::to_value(&self.config).expect("config serialises");
        Some(WeightFile::new(
            "a2c",
            &[("trunk", &self.model.trunk), ("actor", &self.model.actor), ("critic", &self.model.critic)],
            config,
        ))
    }

    fn weights_hash(&self) -> u64 {
        hash_params(&[&self.model])
    }

    fn updates(&self) -> u64 {
        self.updates
    }
}
