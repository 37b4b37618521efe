use super::moves::Move;
use super::state::MatchState;

/// Brute-force legality reference: tries every move of the grammar on a copy of the
/// state and keeps the ones the engine accepts.
pub fn legal_moves_oracle(state: &MatchState, seat: usize) -> Vec<Move> {
    Move::grammar()
        .into_iter()
        .filter(|mv| {
            let mut probe = state.clone();
            probe.apply_move(seat, *mv).is_ok()
        })
        .collect()
}
