use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::card::{Card, Deck, Hand, DECK_SIZE, JOKER_VALUE, MAX_FACE, SEATS};
use super::moves::Move;
use super::roles::{
    apply_special, assign_roles, check_special_action, exchange_cards, ReturnPolicy, Role,
    Special, Transfer,
};
use crate::error::{Error, Result};

/// Why the engine refused a move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleViolation {
    MatchOver,
    SeatFinished,
    WrongTurn { expected: usize },
    Malformed,
    PassOnFirstAction,
    FirstActionMustLeadEleven,
    InsufficientCopies { face: u8, held: u8, wanted: u8 },
    InsufficientJokers { held: u8, wanted: u8 },
    ValueNotLower { board: u8, played: u8 },
    QuantityTooSmall { board: usize, played: usize },
    JokersAloneOnBoard,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::MatchOver => write!(f, "match is over"),
            RuleViolation::SeatFinished => write!(f, "seat already finished"),
            RuleViolation::WrongTurn { expected } => write!(f, "not this seat's turn (seat {expected} acts)"),
            RuleViolation::Malformed => write!(f, "malformed move"),
            RuleViolation::PassOnFirstAction => write!(f, "the opening action may not pass"),
            RuleViolation::FirstActionMustLeadEleven => write!(f, "the opening action must discard 11s"),
            RuleViolation::InsufficientCopies { face, held, wanted } => {
                write!(f, "wanted {wanted} cards of {face}, holds {held}")
            }
            RuleViolation::InsufficientJokers { held, wanted } => write!(f, "wanted {wanted} jokers, holds {held}"),
            RuleViolation::ValueNotLower { board, played } => {
                write!(f, "value {played} is not lower than board value {board}")
            }
            RuleViolation::QuantityTooSmall { board, played } => {
                write!(f, "{played} cards played onto a group of {board}")
            }
            RuleViolation::JokersAloneOnBoard => write!(f, "jokers alone can only open a pizza"),
        }
    }
}

/// What a successfully applied move caused.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepOutcome {
    /// Seat that emptied its hand with this move.
    pub finished: Option<usize>,
    pub pizza_made: bool,
    pub match_over: bool,
}

/// Authoritative state of one match.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchState {
    hands: [Hand; SEATS],
    board: Vec<Card>,
    roles: [Role; SEATS],
    turn: usize,
    passed: [bool; SEATS],
    finished_order: Vec<usize>,
    first_action_pending: bool,
    special: Special,
    turn_counter: u32,
    /// Seat that opened the current pizza.
    pizza_leader: usize,
    /// Last seat to discard within the current pizza.
    pizza_last: Option<usize>,
    /// Cards already buried under the current group or in made pizzas.
    pile: usize,
    pizzas_made: u32,
    truncated: bool,
}

/// Everything decided before the first discard.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchSetup {
    pub roles_dealt: [Role; SEATS],
    pub special: Special,
    pub transfers: Vec<Transfer>,
    pub first_player: usize,
}

/// Seat holding the golden 11.
pub fn initial_player(hands: &[Hand; SEATS]) -> Result<usize> {
    let mut holders = hands.iter().enumerate().filter(|(_, h)| h.has_golden()).map(|(s, _)| s);
    match (holders.next(), holders.next()) {
        (Some(seat), None) => Ok(seat),
        (None, _) => Err(Error::CorruptedState("no hand holds the golden 11".into())),
        (Some(_), Some(_)) => Err(Error::CorruptedState("golden 11 held twice".into())),
    }
}

fn next_seat(seat: usize) -> usize {
    (seat + 1) % SEATS
}

impl MatchState {
    /// Shuffles, deals, assigns roles, runs the special action and exchange, and hands
    /// the opening turn to the golden-11 holder.
    pub fn start<R: Rng + ?Sized>(
        rng: &mut R,
        previous_positions: &[usize],
        policy: &dyn ReturnPolicy,
    ) -> Result<(Self, MatchSetup)> {
        let deck = Deck::shuffled(rng);
        Self::start_from_deck(&deck, previous_positions, policy)
    }

    pub fn start_from_deck(
        deck: &Deck,
        previous_positions: &[usize],
        policy: &dyn ReturnPolicy,
    ) -> Result<(Self, MatchSetup)> {
        let mut hands = deck.deal()?;
        let roles_dealt = assign_roles(previous_positions)?;
        let mut roles = roles_dealt;
        let mut special = Special::NoSpecial;
        let mut transfers = Vec::new();
        if !previous_positions.is_empty() {
            special = check_special_action(&hands, &roles);
            roles = apply_special(&roles, special);
            transfers = exchange_cards(&mut hands, &roles, special, policy)?;
        }
        let first_player = initial_player(&hands)?;
        let mut state = Self::from_position(hands, Vec::new(), first_player, true);
        state.roles = roles;
        state.special = special;
        Ok((state, MatchSetup { roles_dealt, special, transfers, first_player }))
    }

    /// Builds an arbitrary mid-pizza position. Intended for tests and tooling; card
    /// totals need not add up to a full deck.
    pub fn from_position(
        hands: [Hand; SEATS],
        board: Vec<Card>,
        turn: usize,
        first_action_pending: bool,
    ) -> Self {
        let pizza_last = if board.is_empty() { None } else { Some((turn + SEATS - 1) % SEATS) };
        Self {
            hands,
            board,
            roles: [Role::None; SEATS],
            turn,
            passed: [false; SEATS],
            finished_order: Vec::new(),
            first_action_pending,
            special: Special::NoSpecial,
            turn_counter: 0,
            pizza_leader: turn,
            pizza_last,
            pile: 0,
            pizzas_made: 0,
            truncated: false,
        }
    }

    pub fn with_finished(mut self, finished: &[usize]) -> Self {
        self.finished_order = finished.to_vec();
        self
    }

    pub fn with_passed(mut self, passed: [bool; SEATS]) -> Self {
        self.passed = passed;
        self
    }

    pub fn hands(&self) -> &[Hand; SEATS] {
        &self.hands
    }

    pub fn hand(&self, seat: usize) -> &Hand {
        &self.hands[seat]
    }

    pub fn board(&self) -> &[Card] {
        &self.board
    }

    pub fn roles(&self) -> &[Role; SEATS] {
        &self.roles
    }

    pub fn turn(&self) -> usize {
        self.turn
    }

    pub fn passed(&self) -> &[bool; SEATS] {
        &self.passed
    }

    pub fn finished_order(&self) -> &[usize] {
        &self.finished_order
    }

    pub fn first_action_pending(&self) -> bool {
        self.first_action_pending
    }

    pub fn special(&self) -> Special {
        self.special
    }

    pub fn turn_counter(&self) -> u32 {
        self.turn_counter
    }

    pub fn pile(&self) -> usize {
        self.pile
    }

    pub fn pizzas_made(&self) -> u32 {
        self.pizzas_made
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn is_over(&self) -> bool {
        self.finished_order.len() == SEATS
    }

    pub fn is_active(&self, seat: usize) -> bool {
        !self.finished_order.contains(&seat)
    }

    /// Cards in hands, on the board and buried in the pile.
    pub fn card_total(&self) -> usize {
        self.hands.iter().map(Hand::len).sum::<usize>() + self.board.len() + self.pile
    }

    /// Value of the group on the board: its face, or 12 for jokers alone.
    pub fn board_value(&self) -> Option<u8> {
        if self.board.is_empty() {
            return None;
        }
        Some(self.board.iter().find(|c| !c.is_joker()).map_or(JOKER_VALUE, |c| c.value()))
    }

    pub fn finish_positions(&self) -> Option<[usize; SEATS]> {
        if !self.is_over() {
            return None;
        }
        let mut out = [0; SEATS];
        out.copy_from_slice(&self.finished_order);
        Some(out)
    }

    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    /// Checks `mv` against the rules without changing anything.
    pub fn validate(&self, seat: usize, mv: &Move) -> std::result::Result<(), RuleViolation> {
        if self.is_over() {
            return Err(RuleViolation::MatchOver);
        }
        if seat >= SEATS || !self.is_active(seat) {
            return Err(RuleViolation::SeatFinished);
        }
        if seat != self.turn {
            return Err(RuleViolation::WrongTurn { expected: self.turn });
        }
        let hand = &self.hands[seat];
        match *mv {
            Move::Pass => {
                if self.first_action_pending {
                    return Err(RuleViolation::PassOnFirstAction);
                }
            }
            Move::Discard { face, copies, jokers } => {
                if !(1..=MAX_FACE).contains(&face) || copies == 0 || jokers > 1 {
                    return Err(RuleViolation::Malformed);
                }
                if hand.count(face) < copies {
                    return Err(RuleViolation::InsufficientCopies { face, held: hand.count(face), wanted: copies });
                }
                if hand.jokers() < jokers {
                    return Err(RuleViolation::InsufficientJokers { held: hand.jokers(), wanted: jokers });
                }
                if self.first_action_pending && face != MAX_FACE {
                    return Err(RuleViolation::FirstActionMustLeadEleven);
                }
                if let Some(board) = self.board_value() {
                    if face >= board {
                        return Err(RuleViolation::ValueNotLower { board, played: face });
                    }
                    let played = (copies + jokers) as usize;
                    if played < self.board.len() {
                        return Err(RuleViolation::QuantityTooSmall { board: self.board.len(), played });
                    }
                }
            }
            Move::JokersAlone { count } => {
                if count == 0 || count > 2 {
                    return Err(RuleViolation::Malformed);
                }
                if hand.jokers() < count {
                    return Err(RuleViolation::InsufficientJokers { held: hand.jokers(), wanted: count });
                }
                if self.first_action_pending {
                    return Err(RuleViolation::FirstActionMustLeadEleven);
                }
                if !self.board.is_empty() {
                    return Err(RuleViolation::JokersAloneOnBoard);
                }
            }
        }
        Ok(())
    }

    /// Applies a legal move and advances the turn.
    pub fn apply_move(&mut self, seat: usize, mv: Move) -> std::result::Result<StepOutcome, RuleViolation> {
        self.validate(seat, &mv)?;
        let mut outcome = StepOutcome::default();
        self.turn_counter += 1;

        let placed = match mv {
            Move::Pass => {
                self.passed[seat] = true;
                None
            }
            Move::Discard { face, copies, jokers } => {
                let mut cards = self.hands[seat].take_face(face, copies);
                cards.extend(self.hands[seat].take_jokers(jokers));
                Some(cards)
            }
            Move::JokersAlone { count } => Some(self.hands[seat].take_jokers(count)),
        };

        if let Some(cards) = placed {
            self.pile += self.board.len();
            self.board = cards;
            self.pizza_last = Some(seat);
            self.first_action_pending = false;
            if self.hands[seat].is_empty() {
                self.finished_order.push(seat);
                outcome.finished = Some(seat);
                if self.finished_order.len() == SEATS - 1 {
                    let last = (0..SEATS).find(|s| self.is_active(*s)).expect("one seat left");
                    self.finished_order.push(last);
                    outcome.match_over = true;
                    return Ok(outcome);
                }
            }
        }

        if self.pizza_done() {
            self.make_pizza();
            outcome.pizza_made = true;
        } else {
            self.turn = self.next_to_act(seat);
        }
        Ok(outcome)
    }

    /// Every active seat other than the pizza's last discarder has passed.
    fn pizza_done(&self) -> bool {
        (0..SEATS)
            .filter(|&s| self.is_active(s) && Some(s) != self.pizza_last)
            .all(|s| self.passed[s])
    }

    fn make_pizza(&mut self) {
        self.pile += self.board.len();
        self.board.clear();
        self.passed = [false; SEATS];
        self.pizzas_made += 1;
        let anchor = match self.pizza_last {
            Some(s) if self.is_active(s) => {
                self.pizza_last = None;
                self.pizza_leader = s;
                self.turn = s;
                return;
            }
            Some(s) => s,
            // Nobody discarded: the lead rotates past the seat that opened.
            None => self.pizza_leader,
        };
        self.pizza_last = None;
        let leader = self.next_active_after(anchor);
        self.pizza_leader = leader;
        self.turn = leader;
    }

    fn next_active_after(&self, seat: usize) -> usize {
        let mut s = next_seat(seat);
        while !self.is_active(s) {
            s = next_seat(s);
        }
        s
    }

    fn next_to_act(&self, seat: usize) -> usize {
        let mut s = next_seat(seat);
        for _ in 0..SEATS {
            if self.is_active(s) && !self.passed[s] {
                return s;
            }
            s = next_seat(s);
        }
        unreachable!("pizza_done covers the no-candidate case")
    }

    /// Ends a stalled match: remaining seats are ranked by cards left, ties broken
    /// clockwise from the seat to act.
    pub fn truncate(&mut self) {
        if self.is_over() {
            return;
        }
        let mut rest: Vec<usize> = (0..SEATS)
            .map(|k| (self.turn + k) % SEATS)
            .filter(|&s| self.is_active(s))
            .collect();
        rest.sort_by_key(|&s| self.hands[s].len());
        self.finished_order.extend(rest);
        self.truncated = true;
    }

    /// Sanity check used by tests and replay.
    pub fn check_conservation(&self) -> Result<()> {
        if self.card_total() != DECK_SIZE {
            return Err(Error::CorruptedState(format!("{} cards in play", self.card_total())));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::roles::ReturnHighest;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn board(values: &[u8]) -> Vec<Card> {
        values
            .iter()
            .map(|&v| if v == JOKER_VALUE { Card::joker() } else { Card::rank(v) })
            .collect()
    }

    fn position(hand0: &[u8], board_values: &[u8]) -> MatchState {
        let hands = [
            Hand::from_values(hand0),
            Hand::from_values(&[1, 2, 3]),
            Hand::from_values(&[4, 5, 6]),
            Hand::from_values(&[7, 8, 9]),
        ];
        MatchState::from_position(hands, board(board_values), 0, false)
    }

    #[test]
    fn lower_value_equal_quantity_accepted() {
        let mut s = position(&[5, 5, 9, 9], &[8, 8]);
        s.apply_move(0, Move::discard(5, 2, 0)).unwrap();
        assert_eq!(s.board(), &board(&[5, 5])[..]);
        assert_eq!(s.pile(), 2);
    }

    #[test]
    fn higher_value_rejected() {
        let mut s = position(&[5, 5, 9, 9], &[8, 8]);
        assert_eq!(
            s.apply_move(0, Move::discard(9, 2, 0)),
            Err(RuleViolation::ValueNotLower { board: 8, played: 9 })
        );
    }

    #[test]
    fn fewer_copies_rejected() {
        let mut s = position(&[5, 5, 9, 9], &[8, 8]);
        assert_eq!(
            s.apply_move(0, Move::discard(5, 1, 0)),
            Err(RuleViolation::QuantityTooSmall { board: 2, played: 1 })
        );
        // A joker tops a single card up to the required quantity.
        let mut s = position(&[5, 12], &[8, 8]);
        s.apply_move(0, Move::discard(5, 1, 1)).unwrap();
    }

    #[test]
    fn wrong_turn_and_missing_cards_rejected() {
        let mut s = position(&[5, 5], &[]);
        assert_eq!(s.apply_move(1, Move::Pass), Err(RuleViolation::WrongTurn { expected: 0 }));
        assert!(matches!(
            s.apply_move(0, Move::discard(5, 3, 0)),
            Err(RuleViolation::InsufficientCopies { .. })
        ));
        assert!(matches!(
            s.apply_move(0, Move::discard(5, 1, 1)),
            Err(RuleViolation::InsufficientJokers { .. })
        ));
    }

    #[test]
    fn opening_must_lead_elevens() {
        let mut s = MatchState::from_position(
            [Hand::from_values(&[3, 11, 12]), Hand::new(), Hand::new(), Hand::new()],
            Vec::new(),
            0,
            true,
        );
        assert_eq!(s.validate(0, &Move::Pass), Err(RuleViolation::PassOnFirstAction));
        assert_eq!(s.validate(0, &Move::discard(3, 1, 0)), Err(RuleViolation::FirstActionMustLeadEleven));
        assert_eq!(s.validate(0, &Move::JokersAlone { count: 1 }), Err(RuleViolation::FirstActionMustLeadEleven));
        s.apply_move(0, Move::discard(11, 1, 0)).unwrap();
        assert!(!s.first_action_pending());
    }

    #[test]
    fn jokers_alone_only_open_a_pizza() {
        let s = position(&[12, 12], &[8]);
        assert_eq!(s.validate(0, &Move::JokersAlone { count: 1 }), Err(RuleViolation::JokersAloneOnBoard));
        let mut s = position(&[3, 12, 12], &[]);
        s.apply_move(0, Move::JokersAlone { count: 2 }).unwrap();
        assert_eq!(s.board_value(), Some(JOKER_VALUE));
        // 11 is lower than a jokers-alone group.
        assert_eq!(s.turn(), 1);
    }

    #[test]
    fn all_pass_makes_pizza_for_last_discarder() {
        let mut s = position(&[5, 9, 9], &[]);
        s.apply_move(0, Move::discard(9, 2, 0)).unwrap();
        s.apply_move(1, Move::Pass).unwrap();
        s.apply_move(2, Move::Pass).unwrap();
        let out = s.apply_move(3, Move::Pass).unwrap();
        assert!(out.pizza_made);
        assert!(s.board().is_empty());
        assert_eq!(s.turn(), 0);
        assert_eq!(s.passed(), &[false; 4]);
        assert_eq!(s.pile(), 2);
    }

    #[test]
    fn passed_seat_is_skipped_until_pizza_ends() {
        let mut s = position(&[9, 9, 5, 5], &[]);
        s.apply_move(0, Move::discard(9, 2, 0)).unwrap();
        s.apply_move(1, Move::Pass).unwrap();
        s.apply_move(2, Move::Pass).unwrap();
        // seat 3 plays 7 and 8 cannot; only two cards needed
        let mut s3 = s.clone();
        s3.apply_move(3, Move::Pass).unwrap();
        assert_eq!(s3.turn(), 0);
        // Seat 0 answers seat 3 when seat 3 could discard; seat 1 stays passed.
        let mut hands = s.hands().clone();
        hands[3] = Hand::from_values(&[7, 7, 8]);
        let mut t = MatchState { hands, ..s };
        t.apply_move(3, Move::discard(7, 2, 0)).unwrap();
        assert_eq!(t.turn(), 0);
        t.apply_move(0, Move::discard(5, 2, 0)).unwrap();
        // 1 and 2 passed already, 3 is next
        assert_eq!(t.turn(), 3);
    }

    #[test]
    fn finished_discarder_hands_lead_clockwise() {
        let mut s = position(&[9], &[]);
        let out = s.apply_move(0, Move::discard(9, 1, 0)).unwrap();
        assert_eq!(out.finished, Some(0));
        assert_eq!(s.turn(), 1);
        s.apply_move(1, Move::Pass).unwrap();
        s.apply_move(2, Move::Pass).unwrap();
        let out = s.apply_move(3, Move::Pass).unwrap();
        assert!(out.pizza_made);
        assert_eq!(s.turn(), 1);
    }

    #[test]
    fn empty_pizza_rotates_lead() {
        let mut s = position(&[9], &[]);
        for seat in 0..4 {
            s.apply_move(seat, Move::Pass).unwrap();
        }
        assert_eq!(s.turn(), 1);
        assert_eq!(s.pizzas_made(), 1);
    }

    #[test]
    fn match_ends_on_third_finisher() {
        let hands = [
            Hand::from_values(&[3]),
            Hand::from_values(&[2]),
            Hand::from_values(&[1]),
            Hand::from_values(&[4, 5]),
        ];
        let mut s = MatchState::from_position(hands, Vec::new(), 0, false);
        s.apply_move(0, Move::discard(3, 1, 0)).unwrap();
        s.apply_move(1, Move::discard(2, 1, 0)).unwrap();
        let out = s.apply_move(2, Move::discard(1, 1, 0)).unwrap();
        assert!(out.match_over);
        assert_eq!(s.finish_positions(), Some([0, 1, 2, 3]));
        assert_eq!(s.validate(3, &Move::Pass), Err(RuleViolation::MatchOver));
    }

    #[test]
    fn start_sets_golden_lead() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (s, setup) = MatchState::start(&mut rng, &[], &ReturnHighest).unwrap();
        assert!(s.hand(setup.first_player).has_golden());
        assert_eq!(s.turn(), setup.first_player);
        assert!(s.first_action_pending());
        assert_eq!(s.roles(), &[Role::None; 4]);
        s.check_conservation().unwrap();
    }

    #[test]
    fn start_with_roles_keeps_hand_sizes() {
        for seed in 0..200 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (s, setup) = MatchState::start(&mut rng, &[3, 1, 0, 2], &ReturnHighest).unwrap();
            assert!(s.hands().iter().all(|h| h.len() == 17));
            match setup.special {
                Special::DinnerIsServed => assert!(setup.transfers.is_empty()),
                _ => assert_eq!(setup.transfers.len(), 4),
            }
            assert!(s.hand(s.turn()).has_golden());
        }
    }

    #[test]
    fn initial_player_errors_without_golden() {
        let hands: [Hand; 4] = Default::default();
        assert!(matches!(initial_player(&hands), Err(Error::CorruptedState(_))));
        let mut hands: [Hand; 4] = Default::default();
        hands[3].add(Card::golden_eleven());
        assert_eq!(initial_player(&hands).unwrap(), 3);
    }

    #[test]
    fn truncate_ranks_by_cards_left() {
        let hands = [
            Hand::from_values(&[3, 3, 3]),
            Hand::from_values(&[2]),
            Hand::new(),
            Hand::from_values(&[4, 5]),
        ];
        let mut s = MatchState::from_position(hands, Vec::new(), 0, false).with_finished(&[2]);
        s.truncate();
        assert_eq!(s.finish_positions(), Some([2, 1, 3, 0]));
        assert!(s.truncated());
    }
}
