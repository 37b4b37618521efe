use std::fmt;

use serde::{Deserialize, Serialize};

use super::card::{JOKERS_IN_DECK, JOKER_VALUE, MAX_FACE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Move {
    Pass,
    /// `copies` cards of `face`, optionally topped up with one joker taking the same value.
    Discard { face: u8, copies: u8, jokers: u8 },
    /// Jokers played on their own, valued at 12.
    JokersAlone { count: u8 },
}

impl Move {
    pub fn discard(face: u8, copies: u8, jokers: u8) -> Self {
        Move::Discard { face, copies, jokers }
    }

    /// Number of cards leaving the hand.
    pub fn card_count(&self) -> usize {
        match *self {
            Move::Pass => 0,
            Move::Discard { copies, jokers, .. } => (copies + jokers) as usize,
            Move::JokersAlone { count } => count as usize,
        }
    }

    /// Value the discarded group takes on the board.
    pub fn value(&self) -> Option<u8> {
        match *self {
            Move::Pass => None,
            Move::Discard { face, .. } => Some(face),
            Move::JokersAlone { .. } => Some(JOKER_VALUE),
        }
    }

    /// Every move the grammar can spell, legal or not in a given state.
    pub fn grammar() -> Vec<Move> {
        let mut out = vec![Move::Pass];
        for face in 1..=MAX_FACE {
            for copies in 1..=MAX_FACE {
                for jokers in 0..=1 {
                    out.push(Move::Discard { face, copies, jokers });
                }
            }
        }
        for count in 1..=JOKERS_IN_DECK {
            out.push(Move::JokersAlone { count });
        }
        out
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Move::Pass => write!(f, "pass"),
            Move::Discard { face, copies, jokers: 0 } => write!(f, "{copies}x{face}"),
            Move::Discard { face, copies, jokers } => write!(f, "{copies}x{face}+{jokers}j"),
            Move::JokersAlone { count } => write!(f, "{count}j"),
        }
    }
}
