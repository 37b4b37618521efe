use serde::{Deserialize, Serialize};

use super::card::SEATS;
use super::moves::Move;
use super::roles::ReturnPolicy;
use super::state::{MatchState, StepOutcome};
use crate::error::{Error, Result};
use crate::seeding::deck_rng;

/// Reward for the discard that makes a seat finish first.
pub const WIN_REWARD: f64 = 1.0;
/// Reward for every other action.
pub const STEP_REWARD: f64 = -0.01;

/// Reward earned by the seat whose move produced `outcome`.
pub fn step_reward(outcome: &StepOutcome, state_after: &MatchState) -> f64 {
    match outcome.finished {
        Some(seat) if state_after.finished_order().first() == Some(&seat) => WIN_REWARD,
        _ => STEP_REWARD,
    }
}

/// Everything needed to rebuild a match move by move.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub seed: u64,
    /// Finishing order of the previous match in the series; empty for the first.
    pub prev_positions: Vec<usize>,
    pub moves: Vec<(usize, Move)>,
    pub finish_positions: [usize; SEATS],
    pub rewards: [Vec<f64>; SEATS],
    /// Set when the match hit the turn cap and was ranked by cards left.
    pub truncated: bool,
}

impl MatchRecord {
    pub fn winner(&self) -> usize {
        self.finish_positions[0]
    }

    pub fn reward_sums(&self) -> [f64; SEATS] {
        std::array::from_fn(|s| self.rewards[s].iter().sum())
    }

    pub fn action_counts(&self) -> [usize; SEATS] {
        std::array::from_fn(|s| self.rewards[s].len())
    }
}

/// Result of rebuilding a match from its record.
#[derive(Clone, Debug)]
pub struct Replay {
    /// Fingerprint of the state before the first move and after every move.
    pub fingerprints: Vec<u64>,
    pub final_state: MatchState,
}

/// Rebuilds a match from its seed and moves, checking every move, reward and the
/// final finishing order against the record.
pub fn replay(record: &MatchRecord, policy: &dyn ReturnPolicy) -> Result<Replay> {
    let mut rng = deck_rng(record.seed);
    let (mut state, _) = MatchState::start(&mut rng, &record.prev_positions, policy)?;
    let mut fingerprints = vec![state.fingerprint()];
    let mut rewards: [Vec<f64>; SEATS] = Default::default();
    for (step, &(seat, mv)) in record.moves.iter().enumerate() {
        let outcome = state
            .apply_move(seat, mv)
            .map_err(|violation| Error::Replay(format!("step {step}: seat {seat} {mv}: {violation}")))?;
        rewards[seat].push(step_reward(&outcome, &state));
        fingerprints.push(state.fingerprint());
    }
    if record.truncated {
        state.truncate();
    }
    let positions = state
        .finish_positions()
        .ok_or_else(|| Error::Replay("moves end before the match does".into()))?;
    if positions != record.finish_positions {
        return Err(Error::Replay(format!(
            "finishing order {positions:?} differs from recorded {:?}",
            record.finish_positions
        )));
    }
    if rewards != record.rewards {
        return Err(Error::Replay("reward stream differs from record".into()));
    }
    Ok(Replay { fingerprints, final_state: state })
}
