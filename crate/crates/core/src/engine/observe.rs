use super::card::{HAND_SIZE, SEATS};
use super::state::MatchState;

pub const STATE_WIDTH: usize = 28;
const BOARD_SLOTS: usize = STATE_WIDTH - HAND_SIZE;
const SCALE: f64 = 13.0;

pub type StateVector = [f64; STATE_WIDTH];

/// The acting seat's view: its sorted hand values then the board group, jokers as
/// 12, everything scaled by 1/13. Other hands are never visible.
pub fn observe(state: &MatchState, seat: usize) -> StateVector {
    debug_assert!(seat < SEATS);
    let mut out = [0.0; STATE_WIDTH];
    for (slot, v) in state.hand(seat).sorted_values().into_iter().take(HAND_SIZE).enumerate() {
        out[slot] = v as f64 / SCALE;
    }
    let mut board: Vec<u8> = state.board().iter().map(|c| c.value()).collect();
    board.sort_unstable();
    for (slot, v) in board.into_iter().take(BOARD_SLOTS).enumerate() {
        out[HAND_SIZE + slot] = v as f64 / SCALE;
    }
    out
}
