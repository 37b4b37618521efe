use crate::action_space::{decode, possible_actions, ActionIndex, MaskVector};
use crate::agents::{Agent, Experience};
use crate::engine::{observe, step_reward, MatchRecord, MatchState, ReturnHighest, StateVector, SEATS};
use crate::error::{Error, Result};
use crate::seeding::{agent_rng, deck_rng};
use crate::telemetry::{record_step, Telemetry};

/// Matches still running after this many moves are ranked by cards left.
pub const MAX_TURNS: u32 = 2000;

/// A seat's last action, waiting for the state it sees on its next turn.
struct Pending {
    state: StateVector,
    mask: MaskVector,
    action: ActionIndex,
    reward: f64,
}

fn close(agent: &mut dyn Agent, p: Pending, next_state: StateVector, next_mask: MaskVector, terminal: bool) -> Result<()> {
    agent.record(Experience {
        state: p.state,
        mask: p.mask,
        action: p.action,
        reward: p.reward,
        next_state,
        next_mask,
        terminal,
    });
    agent.train_step()
}

/// Plays one match from deal to finish. `prev_positions` is the previous match's
/// finishing order inside a series, or empty for a fresh start.
///
/// With `learn` set, every agent sees its own transitions and a final
/// `end_of_match`; an agent that is not training ignores both. A transition is
/// completed when its seat acts again, or marked terminal when the seat finishes
/// or the match ends.
pub fn play_match(
    agents: &mut [Box<dyn Agent>; SEATS],
    prev_positions: &[usize],
    match_seed: u64,
    learn: bool,
    mut telemetry: Option<&mut Telemetry>,
) -> Result<MatchRecord> {
    let (mut state, _) = MatchState::start(&mut deck_rng(match_seed), prev_positions, &ReturnHighest)?;
    let mut rng = agent_rng(match_seed);
    let mut pending: [Option<Pending>; SEATS] = Default::default();
    let mut moves = Vec::new();
    let mut rewards: [Vec<f64>; SEATS] = Default::default();
    let mut allowed = Vec::new();

    while !state.is_over() {
        if state.turn_counter() >= MAX_TURNS {
            state.truncate();
            break;
        }
        let seat = state.turn();
        let obs = observe(&state, seat);
        let mask = possible_actions(&state, seat);
        if learn {
            if let Some(p) = pending[seat].take() {
                close(agents[seat].as_mut(), p, obs, mask, false)?;
            }
        }
        let decision = agents[seat].act(&obs, &mask, &mut rng)?;
        if !mask.allows(decision.action) {
            return Err(Error::Precondition(format!("seat {seat} chose masked slot {}", decision.action.0)));
        }
        let mv = decode(decision.action)?.resolve(state.hand(seat));
        let turn = state.turn_counter();
        let outcome = state.apply_move(seat, mv).map_err(|violation| Error::IllegalMove { seat, violation })?;
        let reward = step_reward(&outcome, &state);
        moves.push((seat, mv));
        rewards[seat].push(reward);

        if let Some(t) = telemetry.as_deref_mut() {
            allowed.push(mask.count());
            if let Some(outputs) = &decision.outputs {
                let kind = agents[seat].kind();
                t.log_step(record_step(t.match_index(), turn, seat, kind, outputs, &mask, decision.action)?);
            }
        }

        if learn {
            let p = Pending { state: obs, mask, action: decision.action, reward };
            if outcome.finished == Some(seat) {
                close(agents[seat].as_mut(), p, observe(&state, seat), MaskVector::none(), true)?;
            } else {
                pending[seat] = Some(p);
            }
        }
    }

    let finish_positions = state
        .finish_positions()
        .ok_or_else(|| Error::CorruptedState("match loop ended without a finishing order".into()))?;
    if learn {
        for seat in 0..SEATS {
            if let Some(p) = pending[seat].take() {
                close(agents[seat].as_mut(), p, observe(&state, seat), MaskVector::none(), true)?;
            }
            agents[seat].end_of_match(&finish_positions, seat)?;
        }
    }
    let record = MatchRecord {
        seed: match_seed,
        prev_positions: prev_positions.to_vec(),
        moves,
        finish_positions,
        rewards,
        truncated: state.truncated(),
    };
    if let Some(t) = telemetry {
        t.log_match(&record, &allowed)?;
    }
    Ok(record)
}
