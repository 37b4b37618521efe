use serde::{Deserialize, Serialize};

use super::card::{Hand, JOKERS_IN_DECK, SEATS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Chef,
    SousChef,
    Waiter,
    Dishwasher,
    None,
}

impl Role {
    fn from_position(pos: usize) -> Self {
        match pos {
            0 => Role::Chef,
            1 => Role::SousChef,
            2 => Role::Waiter,
            _ => Role::Dishwasher,
        }
    }

    pub fn inverted(self) -> Self {
        match self {
            Role::Chef => Role::Dishwasher,
            Role::SousChef => Role::Waiter,
            Role::Waiter => Role::SousChef,
            Role::Dishwasher => Role::Chef,
            Role::None => Role::None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Special {
    NoSpecial,
    FoodFight,
    DinnerIsServed,
}

pub fn validate_positions(positions: &[usize]) -> Result<[usize; SEATS]> {
    if positions.len() != SEATS {
        return Err(Error::InvalidArgument(format!(
            "finishing order must list {SEATS} seats, got {positions:?}"
        )));
    }
    let mut seen = [false; SEATS];
    let mut out = [0; SEATS];
    for (i, &seat) in positions.iter().enumerate() {
        if seat >= SEATS || seen[seat] {
            return Err(Error::InvalidArgument(format!(
                "finishing order {positions:?} is not a permutation of seats"
            )));
        }
        seen[seat] = true;
        out[i] = seat;
    }
    Ok(out)
}

/// Roles from the previous match's finishing order; an empty order (first match of
/// a series) leaves every seat without a role.
pub fn assign_roles(previous_positions: &[usize]) -> Result<[Role; SEATS]> {
    if previous_positions.is_empty() {
        return Ok([Role::None; SEATS]);
    }
    let order = validate_positions(previous_positions)?;
    let mut roles = [Role::None; SEATS];
    for (pos, seat) in order.into_iter().enumerate() {
        roles[seat] = Role::from_position(pos);
    }
    Ok(roles)
}

pub fn seat_with_role(roles: &[Role; SEATS], role: Role) -> Option<usize> {
    roles.iter().position(|&r| r == role)
}

/// The two-joker special action, always evoked when its condition holds.
pub fn check_special_action(hands: &[Hand; SEATS], roles: &[Role; SEATS]) -> Special {
    if roles.iter().any(|&r| r == Role::None) {
        return Special::NoSpecial;
    }
    match hands.iter().position(|h| h.jokers() == JOKERS_IN_DECK) {
        Some(seat) if roles[seat] == Role::Dishwasher => Special::FoodFight,
        Some(_) => Special::DinnerIsServed,
        None => Special::NoSpecial,
    }
}

/// Applies the role inversion of a food fight; other specials leave roles as they are.
pub fn apply_special(roles: &[Role; SEATS], special: Special) -> [Role; SEATS] {
    match special {
        Special::FoodFight => roles.map(Role::inverted),
        _ => *roles,
    }
}

/// Decides which cards a receiving Chef or Sous-Chef hands back.
pub trait ReturnPolicy {
    /// Face values (jokers excluded) to return from `hand`; must be `count` long and
    /// drawn from the hand.
    fn choose_return(&self, hand: &Hand, count: usize) -> Vec<u8>;
}

/// Hands back the returner's own highest face values.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReturnHighest;

impl ReturnPolicy for ReturnHighest {
    fn choose_return(&self, hand: &Hand, count: usize) -> Vec<u8> {
        hand.highest_faces(count)
    }
}

/// One card transfer made during the exchange phase.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transfer {
    pub from: usize,
    pub to: usize,
    pub faces: Vec<u8>,
}

fn transfer(hands: &mut [Hand; SEATS], from: usize, to: usize, faces: &[u8]) {
    for &face in faces {
        let cards = hands[from].take_face(face, 1);
        hands[to].add(cards[0]);
    }
}

/// Runs the card exchange: Dishwasher gives its two highest faces to the Chef, who
/// returns two; Waiter gives its lowest face to the Sous-Chef, who returns one.
/// Jokers never change hands here.
pub fn exchange_cards(
    hands: &mut [Hand; SEATS],
    roles: &[Role; SEATS],
    special: Special,
    policy: &dyn ReturnPolicy,
) -> Result<Vec<Transfer>> {
    if special == Special::DinnerIsServed {
        return Ok(Vec::new());
    }
    let find = |role| {
        seat_with_role(roles, role)
            .ok_or_else(|| Error::Precondition(format!("no seat holds role {role:?}: {roles:?}")))
    };
    let chef = find(Role::Chef)?;
    let sous = find(Role::SousChef)?;
    let waiter = find(Role::Waiter)?;
    let dish = find(Role::Dishwasher)?;

    let mut log = Vec::with_capacity(4);
    let mut step = |hands: &mut [Hand; SEATS], from: usize, to: usize, faces: Vec<u8>, want: usize| {
        if faces.len() != want || faces.iter().any(|&f| hands[from].count(f) == 0) {
            return Err(Error::Precondition(format!(
                "seat {from} cannot give {faces:?} ({want} cards needed)"
            )));
        }
        transfer(hands, from, to, &faces);
        log.push(Transfer { from, to, faces });
        Ok(())
    };

    let tax = hands[dish].highest_faces(2);
    step(hands, dish, chef, tax, 2)?;
    let back = policy.choose_return(&hands[chef], 2);
    step(hands, chef, dish, back, 2)?;

    let tax = hands[waiter].lowest_faces(1);
    step(hands, waiter, sous, tax, 1)?;
    let back = policy.choose_return(&hands[sous], 1);
    step(hands, sous, waiter, back, 1)?;

    Ok(log)
}
