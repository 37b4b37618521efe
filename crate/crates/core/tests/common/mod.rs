//! Fixtures shared by the integration and acceptance targets.
#![allow(dead_code)]

use chefs_hat::action_space::{decode, masked_uniform, possible_actions, ActionIndex, MaskVector};
use chefs_hat::agents::{Agent, AgentConfig, AgentKind, Experience};
use chefs_hat::engine::{observe, MatchState, ReturnHighest, StateVector, SEATS, STATE_WIDTH};
use chefs_hat::neural::{
    backward, batch_matrix, masked_softmax, max_relative_error, Activation, ActorCritic, KlPenalizedSurrogate, Loss,
    Mlp, Parameters, PolicyGradient, QRegression, ValueRegression,
};
use chefs_hat::seeding::{derive_seed, rng_from, SimRng};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every (state, seat-to-act) reached by uniform random play, with the move taken.
pub fn random_trajectory(seed: u64, prev: &[usize]) -> (Vec<MatchState>, MatchState) {
    let mut deck = rng_from(seed);
    let mut rng = rng_from(derive_seed(seed, 1));
    let (mut state, _) = MatchState::start(&mut deck, prev, &ReturnHighest).unwrap();
    let mut seen = Vec::new();
    while !state.is_over() {
        seen.push(state.clone());
        let seat = state.turn();
        let mask = possible_actions(&state, seat);
        let a = masked_uniform(&mask, &mut rng).unwrap();
        let mv = decode(a).unwrap().resolve(state.hand(seat));
        state.apply_move(seat, mv).unwrap();
    }
    (seen, state)
}

/// A batch of real observations and masks with actions drawn from each mask.
pub struct Batch {
    pub states: Vec<StateVector>,
    pub masks: Vec<MaskVector>,
    pub actions: Vec<usize>,
}

pub fn sample_batch(seed: u64, n: usize) -> Batch {
    let (states, _) = random_trajectory(seed, &[]);
    let mut rng = rng_from(derive_seed(seed, 2));
    let chosen: Vec<&MatchState> = states.choose_multiple(&mut rng, n).collect();
    let mut out = Batch { states: Vec::new(), masks: Vec::new(), actions: Vec::new() };
    for s in chosen {
        let mask = possible_actions(s, s.turn());
        out.actions.push(masked_uniform(&mask, &mut rng).unwrap().0);
        out.states.push(observe(s, s.turn()));
        out.masks.push(mask);
    }
    out
}

fn probes(count: usize, params: usize, rng: &mut SimRng) -> Vec<usize> {
    (0..count).map(|_| rng.gen_range(0..params)).collect()
}

const STEP: f64 = 1e-5;

fn tanh_net(dims: &[usize], rng: &mut SimRng) -> Mlp {
    Mlp::new(dims, Activation::Tanh, Activation::Linear, 1.0, rng).unwrap()
}

/// Worst relative error of the Q-regression gradient.
pub fn gradcheck_q(seed: u64, probe_count: usize) -> f64 {
    let mut rng = rng_from(seed);
    let batch = sample_batch(seed, 12);
    let net = tanh_net(&[STATE_WIDTH, 16, 12, 200], &mut rng);
    let loss = QRegression {
        actions: batch.actions.clone(),
        targets: (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    };
    let x = batch_matrix(&batch.states);
    let report = backward(&net, x.clone(), &loss).unwrap();
    let p = probes(probe_count, net.param_count(), &mut rng);
    max_relative_error(&net, &report.grads, &p, STEP, |m| loss.evaluate(&m.forward_batch(&x).unwrap()).unwrap().0)
}

/// Worst relative error of the shared-trunk actor-critic gradient.
pub fn gradcheck_actor_critic(seed: u64, probe_count: usize) -> f64 {
    let mut rng = rng_from(seed);
    let batch = sample_batch(seed, 12);
    let model = ActorCritic::from_parts(
        Mlp::new(&[STATE_WIDTH, 16, 12], Activation::Tanh, Activation::Tanh, 1.0, &mut rng).unwrap(),
        tanh_net(&[12, 200], &mut rng),
        tanh_net(&[12, 1], &mut rng),
    )
    .unwrap();
    let actor = PolicyGradient {
        masks: batch.masks.clone(),
        actions: batch.actions.clone(),
        advantages: (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        entropy_coef: 0.05,
    };
    let critic = ValueRegression { targets: (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect() };
    let x = batch_matrix(&batch.states);
    let report = model.backward(x.clone(), &actor, &critic, 0.5).unwrap();
    let p = probes(probe_count, model.param_count(), &mut rng);
    max_relative_error(&model, &report.grads, &p, STEP, |m| {
        let (logits, values) = m.forward_batch(&x).unwrap();
        actor.evaluate(&logits).unwrap().0 + 0.5 * critic.evaluate(&values).unwrap().0
    })
}

/// Worst relative error of the KL-penalised surrogate, with the old policy taken
/// from a perturbed copy so the penalty term is active.
pub fn gradcheck_surrogate(seed: u64, probe_count: usize) -> f64 {
    let mut rng = rng_from(seed);
    let batch = sample_batch(seed, 12);
    let net = tanh_net(&[STATE_WIDTH, 16, 12, 200], &mut rng);
    let old_net = tanh_net(&[STATE_WIDTH, 16, 12, 200], &mut rng);
    let x = batch_matrix(&batch.states);
    let old_logits = old_net.forward_batch(&x).unwrap();
    let old_probs = (0..12)
        .map(|b| masked_softmax(old_logits.row(b).as_slice().unwrap(), &batch.masks[b]).unwrap())
        .collect();
    let loss = KlPenalizedSurrogate {
        masks: batch.masks.clone(),
        actions: batch.actions.clone(),
        old_probs,
        advantages: (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        beta: 0.7,
    };
    let report = backward(&net, x.clone(), &loss).unwrap();
    let p = probes(probe_count, net.param_count(), &mut rng);
    max_relative_error(&net, &report.grads, &p, STEP, |m| loss.evaluate(&m.forward_batch(&x).unwrap()).unwrap().0)
}

/// Worst relative error of the value regression on a separate critic network.
pub fn gradcheck_value(seed: u64, probe_count: usize) -> f64 {
    let mut rng = rng_from(seed);
    let batch = sample_batch(seed, 12);
    let net = tanh_net(&[STATE_WIDTH, 16, 12, 1], &mut rng);
    let loss = ValueRegression { targets: (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect() };
    let x = batch_matrix(&batch.states);
    let report = backward(&net, x.clone(), &loss).unwrap();
    let p = probes(probe_count, net.param_count(), &mut rng);
    max_relative_error(&net, &report.grads, &p, STEP, |m| loss.evaluate(&m.forward_batch(&x).unwrap()).unwrap().0)
}

/// Two states, two actions. From `s0`, action 1 moves to `s1` and action 0 ends
/// the episode; from `s1` both actions end it, action 0 with the win reward.
pub struct TinyMdp;

pub const MDP_STEP: f64 = -0.01;
pub const MDP_WIN: f64 = 1.0;

impl TinyMdp {
    pub fn state(s: usize) -> StateVector {
        let mut v = [0.0; STATE_WIDTH];
        v[s] = 1.0;
        v
    }

    pub fn mask() -> MaskVector {
        MaskVector::from_slots(&[0, 1])
    }

    /// `(reward, next state or None when terminal)`.
    pub fn step(s: usize, a: usize) -> (f64, Option<usize>) {
        match (s, a) {
            (0, 1) => (MDP_STEP, Some(1)),
            (0, _) => (MDP_STEP, None),
            (_, 0) => (MDP_WIN, None),
            _ => (MDP_STEP, None),
        }
    }

    /// Discounted value of the deterministic policy `pi` from `s`.
    pub fn value(pi: [usize; 2], s: usize, gamma: f64) -> f64 {
        let (r, next) = Self::step(s, pi[s]);
        r + next.map_or(0.0, |n| gamma * Self::value(pi, n, gamma))
    }

    /// Best deterministic policy by enumerating all four.
    pub fn optimal(gamma: f64) -> [usize; 2] {
        let all = [[0, 0], [0, 1], [1, 0], [1, 1]];
        *all.iter()
            .max_by(|a, b| Self::value(**a, 0, gamma).total_cmp(&Self::value(**b, 0, gamma)))
            .unwrap()
    }
}

impl TinyMdp {
    /// Optimal action values by exhaustive policy evaluation.
    pub fn q_star(gamma: f64) -> [[f64; 2]; 2] {
        let pis = [[0, 0], [0, 1], [1, 0], [1, 1]];
        let v_star = |s: usize| pis.iter().map(|&pi| Self::value(pi, s, gamma)).fold(f64::MIN, f64::max);
        [0, 1].map(|s| {
            [0, 1].map(|a| {
                let (r, next) = Self::step(s, a);
                r + next.map_or(0.0, |n| gamma * v_star(n))
            })
        })
    }
}

/// Tolerance on learned action values against the exhaustive optimum.
pub const Q_TOLERANCE: f64 = 0.05;
/// Probability a policy learner must put on the optimal action in both states.
pub const POLICY_CONFIDENCE: f64 = 0.9;

/// Greedy actions and whether the agent has converged on the optimum: action
/// values near Q* for value learners, a confident policy for policy learners.
fn inspect(agent: &dyn Agent, gamma: f64, rng: &mut SimRng) -> ([usize; 2], bool) {
    let mut probe = agent.clone_box();
    probe.set_training(false);
    let optimal = TinyMdp::optimal(gamma);
    let q_star = TinyMdp::q_star(gamma);
    let mut policy = [0; 2];
    let mut converged = true;
    for s in 0..2 {
        let d = probe.act(&TinyMdp::state(s), &TinyMdp::mask(), rng).unwrap();
        policy[s] = d.action.0;
        let out = d.outputs.expect("learners expose outputs");
        converged &= match agent.kind() {
            AgentKind::Dql => (0..2).all(|a| (out[a] - q_star[s][a]).abs() < Q_TOLERANCE),
            _ => masked_softmax(&out, &TinyMdp::mask()).unwrap()[optimal[s]] >= POLICY_CONFIDENCE,
        };
    }
    (policy, converged && policy == optimal)
}

pub struct MdpRun {
    pub updates: u64,
    pub policy: [usize; 2],
    pub optimal: [usize; 2],
    pub converged: bool,
}

/// Trains a fresh learner on the tiny MDP until it has converged on the optimal
/// greedy policy or has made `max_updates` updates.
pub fn solve_tiny_mdp(kind: AgentKind, max_updates: u64, seed: u64) -> MdpRun {
    let config = AgentConfig { greedy_eval: true, batch_size: 16, seed, ..AgentConfig::new(kind) }.with_hidden(&[64, 64]);
    let mut agent = chefs_hat::agents::build_agent(&config).unwrap();
    agent.set_training(true);
    let mut rng = rng_from(derive_seed(seed, 9));
    let (mut policy, mut converged) = inspect(agent.as_ref(), config.gamma, &mut rng);
    while !converged && agent.updates() < max_updates {
        for _ in 0..5 {
            let mut s = 0;
            loop {
                let d = agent.act(&TinyMdp::state(s), &TinyMdp::mask(), &mut rng).unwrap();
                let (reward, next) = TinyMdp::step(s, d.action.0);
                agent.record(Experience {
                    state: TinyMdp::state(s),
                    mask: TinyMdp::mask(),
                    action: ActionIndex(d.action.0),
                    reward,
                    next_state: TinyMdp::state(next.unwrap_or(s)),
                    next_mask: if next.is_some() { TinyMdp::mask() } else { MaskVector::none() },
                    terminal: next.is_none(),
                });
                agent.train_step().unwrap();
                match next {
                    Some(n) => s = n,
                    None => break,
                }
            }
            agent.end_of_match(&[0, 1, 2, 3], 0).unwrap();
        }
        (policy, converged) = inspect(agent.as_ref(), config.gamma, &mut rng);
    }
    MdpRun { updates: agent.updates(), policy, optimal: TinyMdp::optimal(config.gamma), converged }
}

pub fn assert_permutation(p: &[usize; SEATS]) {
    let mut sorted = *p;
    sorted.sort_unstable();
    assert_eq!(sorted, [0, 1, 2, 3], "{p:?} is not a permutation");
}

/// The oracle's legal moves projected onto the catalog.
pub fn oracle_mask(state: &MatchState, seat: usize) -> MaskVector {
    use chefs_hat::action_space::{encode, is_expressible};
    use chefs_hat::engine::legal_moves_oracle;
    let hand = state.hand(seat);
    let mut mask = MaskVector::none();
    for mv in legal_moves_oracle(state, seat) {
        if is_expressible(&mv, hand) {
            mask.set(encode(&mv).unwrap(), true);
        }
    }
    mask
}

/// Plays a seeded match with four uniform agents and returns its record.
pub fn random_match(seed: u64, prev: &[usize]) -> chefs_hat::engine::MatchRecord {
    let mut agents = random_seats();
    chefs_hat::arena::play_match(&mut agents, prev, seed, false, None).unwrap()
}

pub fn random_seats() -> [Box<dyn Agent>; SEATS] {
    std::array::from_fn(|_| Box::new(chefs_hat::agents::RandomAgent::new()) as Box<dyn Agent>)
}
