//! Chef's Hat rules: deck, roles and exchange, the match state machine, the
//! player's observation and a brute-force legality oracle.

mod card;
mod moves;
mod observe;
mod oracle;
mod record;
mod roles;
mod state;

pub use card::{
    deal, new_shuffled_deck, Card, CardKind, Deck, Hand, DECK_SIZE, HAND_SIZE, JOKERS_IN_DECK,
    JOKER_VALUE, MAX_FACE, SEATS,
};
pub use moves::Move;
pub use observe::{observe, StateVector, STATE_WIDTH};
pub use oracle::legal_moves_oracle;
pub use record::{replay, step_reward, MatchRecord, Replay, STEP_REWARD, WIN_REWARD};
pub use roles::{
    apply_special, assign_roles, check_special_action, exchange_cards, seat_with_role,
    validate_positions, ReturnHighest, ReturnPolicy, Role, Special, Transfer,
};
pub use state::{initial_player, MatchSetup, MatchState, RuleViolation, StepOutcome};
