use super::catalog::{
    encode_action, ActionIndex, CatalogAction, ACTION_COUNT, ALL_JOKERS_SLOT, MAX_COPIES_WITH_JOKER, PASS_SLOT,
};
use crate::engine::{MatchState, MAX_FACE};

/// Per-slot validity of the 200 catalog actions in one state.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct MaskVector([bool; ACTION_COUNT]);

impl MaskVector {
    pub fn none() -> Self {
        Self([false; ACTION_COUNT])
    }

    pub fn from_slots(slots: &[usize]) -> Self {
        let mut m = Self::none();
        for &s in slots {
            m.0[s] = true;
        }
        m
    }

    pub fn allows(&self, index: ActionIndex) -> bool {
        self.0.get(index.0).copied().unwrap_or(false)
    }

    pub fn set(&mut self, index: ActionIndex, allowed: bool) {
        self.0[index.0] = allowed;
    }

    pub fn as_slice(&self) -> &[bool; ACTION_COUNT] {
        &self.0
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn allowed(&self) -> impl Iterator<Item = ActionIndex> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| ActionIndex(i))
    }
}

impl std::fmt::Debug for MaskVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.allowed().map(|i| i.0)).finish()
    }
}

/// Which catalog actions the acting seat may take: a scan over face value and
/// quantity comparing hand counts against the board group.
pub fn possible_actions(state: &MatchState, seat: usize) -> MaskVector {
    let mut mask = MaskVector::none();
    if state.is_over() || !state.is_active(seat) || state.turn() != seat {
        return mask;
    }
    let hand = state.hand(seat);
    let jokers_held = hand.jokers();
    let first = state.first_action_pending();
    let (board_value, board_count) = match state.board_value() {
        Some(v) => (v, state.board().len()),
        None => (u8::MAX, 0),
    };

    for face in 1..=MAX_FACE {
        let held = hand.count(face);
        if held == 0 || face >= board_value || (first && face != MAX_FACE) {
            continue;
        }
        for copies in 1..=held {
            for jokers in 0..=jokers_held.min(1) {
                if jokers == 1 && copies > MAX_COPIES_WITH_JOKER {
                    continue;
                }
                if ((copies + jokers) as usize) < board_count {
                    continue;
                }
                let index = encode_action(CatalogAction::Discard { face, copies, jokers })
                    .expect("held copies never exceed face value");
                mask.set(index, true);
            }
        }
    }
    if jokers_held > 0 && board_count == 0 && !first {
        mask.0[ALL_JOKERS_SLOT] = true;
    }
    if !first {
        mask.0[PASS_SLOT] = true;
    }
    mask
}
