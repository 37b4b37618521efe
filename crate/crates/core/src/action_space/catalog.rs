use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::{Hand, Move, MAX_FACE};
use crate::error::{Error, Result};

pub const ACTION_COUNT: usize = 200;
/// Largest copy count that can be paired with a joker.
pub const MAX_COPIES_WITH_JOKER: u8 = 7;
const JOKER_BLOCK: usize = 121;
pub const ALL_JOKERS_SLOT: usize = 198;
pub const PASS_SLOT: usize = 199;

/// Index into the 200-slot action catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionIndex(pub usize);

impl ActionIndex {
    pub const PASS: ActionIndex = ActionIndex(PASS_SLOT);

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for ActionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// What a catalog slot stands for. Slot 198 plays however many jokers are held,
/// so it only becomes a concrete [`Move`] against a hand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogAction {
    Discard { face: u8, copies: u8, jokers: u8 },
    AllJokers,
    Pass,
}

impl CatalogAction {
    pub fn resolve(self, hand: &Hand) -> Move {
        match self {
            CatalogAction::Discard { face, copies, jokers } => Move::Discard { face, copies, jokers },
            CatalogAction::AllJokers => Move::JokersAlone { count: hand.jokers() },
            CatalogAction::Pass => Move::Pass,
        }
    }

    fn describe(self) -> String {
        match self {
            CatalogAction::Discard { face, copies, jokers: 0 } => format!("discard {copies} x {face}"),
            CatalogAction::Discard { face, copies, .. } => format!("discard {copies} x {face} + joker"),
            CatalogAction::AllJokers => "discard all jokers".to_string(),
            CatalogAction::Pass => "pass".to_string(),
        }
    }
}

fn grid_slot(index: usize) -> (u8, u8) {
    let copies = (index / MAX_FACE as usize) as u8 + 1;
    let face = (index % MAX_FACE as usize) as u8 + 1;
    (face, copies)
}

/// Slot layout without the structural filter: `None` only for out-of-range indices.
fn slot(index: usize) -> Option<CatalogAction> {
    match index {
        0..JOKER_BLOCK => {
            let (face, copies) = grid_slot(index);
            Some(CatalogAction::Discard { face, copies, jokers: 0 })
        }
        JOKER_BLOCK..ALL_JOKERS_SLOT => {
            let (face, copies) = grid_slot(index - JOKER_BLOCK);
            Some(CatalogAction::Discard { face, copies, jokers: 1 })
        }
        ALL_JOKERS_SLOT => Some(CatalogAction::AllJokers),
        PASS_SLOT => Some(CatalogAction::Pass),
        _ => None,
    }
}

/// A slot asking for more copies of a face than the deck contains can never be legal.
pub fn is_structurally_valid(index: usize) -> bool {
    match slot(index) {
        Some(CatalogAction::Discard { face, copies, .. }) => copies <= face,
        Some(_) => true,
        None => false,
    }
}

pub fn decode(index: ActionIndex) -> Result<CatalogAction> {
    if !is_structurally_valid(index.0) {
        return Err(Error::InvalidActionIndex(index.0));
    }
    Ok(slot(index.0).expect("in range"))
}

pub fn encode_action(action: CatalogAction) -> Result<ActionIndex> {
    let index = match action {
        CatalogAction::Pass => PASS_SLOT,
        CatalogAction::AllJokers => ALL_JOKERS_SLOT,
        CatalogAction::Discard { face, copies, jokers } => {
            let cap = if jokers == 0 { MAX_FACE } else { MAX_COPIES_WITH_JOKER };
            if !(1..=MAX_FACE).contains(&face) || copies == 0 || copies > cap || jokers > 1 {
                return Err(Error::Inexpressible(format!("{action:?}")));
            }
            let base = if jokers == 0 { 0 } else { JOKER_BLOCK };
            base + (copies as usize - 1) * MAX_FACE as usize + (face as usize - 1)
        }
    };
    if !is_structurally_valid(index) {
        return Err(Error::Inexpressible(format!("{action:?}")));
    }
    Ok(ActionIndex(index))
}

/// Catalog index of a concrete move. Any jokers-alone move maps to the all-jokers
/// slot; whether that matches the hand is checked by [`is_expressible`].
pub fn encode(mv: &Move) -> Result<ActionIndex> {
    let action = match *mv {
        Move::Pass => CatalogAction::Pass,
        Move::JokersAlone { count } if (1..=2).contains(&count) => CatalogAction::AllJokers,
        Move::JokersAlone { .. } => return Err(Error::Inexpressible(mv.to_string())),
        Move::Discard { face, copies, jokers } => CatalogAction::Discard { face, copies, jokers },
    };
    encode_action(action).map_err(|_| Error::Inexpressible(mv.to_string()))
}

/// Whether the catalog can play exactly `mv` from `hand`.
pub fn is_expressible(mv: &Move, hand: &Hand) -> bool {
    match *mv {
        Move::JokersAlone { count } => count == hand.jokers(),
        _ => encode(mv).is_ok(),
    }
}

/// `index,move` rows for every slot, structurally invalid ones marked.
pub fn catalog_csv() -> String {
    let mut out = String::from("index,move\n");
    for index in 0..ACTION_COUNT {
        let desc = match decode(ActionIndex(index)) {
            Ok(action) => action.describe(),
            Err(_) => "invalid".to_string(),
        };
        out.push_str(&format!("{index},{desc}\n"));
    }
    out
}

/// SHA-256 of [`catalog_csv`], hex encoded. Stored in weight files.
pub fn catalog_hash() -> String {
    hex::encode(Sha256::digest(catalog_csv().as_bytes()))
}
