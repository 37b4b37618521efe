use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Highest face value of an ingredient card.
pub const MAX_FACE: u8 = 11;
/// Value a joker takes when it is played on its own.
pub const JOKER_VALUE: u8 = 12;
pub const JOKERS_IN_DECK: u8 = 2;
pub const DECK_SIZE: usize = 68;
pub const SEATS: usize = 4;
pub const HAND_SIZE: usize = DECK_SIZE / SEATS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CardKind {
    Rank(u8),
    Joker,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Card {
    pub kind: CardKind,
    /// Only ever set on one face-11 card: the golden mozzarella.
    pub golden: bool,
}

impl Card {
    pub fn rank(face: u8) -> Self {
        debug_assert!((1..=MAX_FACE).contains(&face));
        Self { kind: CardKind::Rank(face), golden: false }
    }

    pub fn joker() -> Self {
        Self { kind: CardKind::Joker, golden: false }
    }

    pub fn golden_eleven() -> Self {
        Self { kind: CardKind::Rank(MAX_FACE), golden: true }
    }

    /// Face value, with a joker counted as [`JOKER_VALUE`].
    pub fn value(&self) -> u8 {
        match self.kind {
            CardKind::Rank(v) => v,
            CardKind::Joker => JOKER_VALUE,
        }
    }

    pub fn is_joker(&self) -> bool {
        self.kind == CardKind::Joker
    }
}

/// A player's hand stored as per-value counts.
///
/// Slot `v - 1` holds the number of face-`v` cards, the last slot holds jokers.
/// When copies of 11 leave a hand holding the golden card, the golden copy is the
/// last one to go.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hand {
    counts: [u8; 12],
    golden: bool,
}

impl Hand {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cards(cards: &[Card]) -> Self {
        let mut hand = Self::new();
        for card in cards {
            hand.add(*card);
        }
        hand
    }

    /// Convenience constructor from face values; `12` stands for a joker.
    pub fn from_values(values: &[u8]) -> Self {
        let mut hand = Self::new();
        for &v in values {
            if v == JOKER_VALUE {
                hand.add(Card::joker());
            } else {
                hand.add(Card::rank(v));
            }
        }
        hand
    }

    pub fn add(&mut self, card: Card) {
        match card.kind {
            CardKind::Rank(v) => {
                self.counts[(v - 1) as usize] += 1;
                if card.golden {
                    self.golden = true;
                }
            }
            CardKind::Joker => self.counts[11] += 1,
        }
    }

    pub fn count(&self, face: u8) -> u8 {
        if (1..=MAX_FACE).contains(&face) {
            self.counts[(face - 1) as usize]
        } else {
            0
        }
    }

    pub fn jokers(&self) -> u8 {
        self.counts[11]
    }

    pub fn has_golden(&self) -> bool {
        self.golden
    }

    pub fn len(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Removes `n` copies of `face`. Panics if the hand holds fewer.
    pub fn take_face(&mut self, face: u8, n: u8) -> Vec<Card> {
        let slot = (face - 1) as usize;
        assert!(self.counts[slot] >= n, "hand holds {} of face {face}, asked for {n}", self.counts[slot]);
        let mut out = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let golden = face == MAX_FACE && self.golden && self.counts[slot] == 1;
            if golden {
                self.golden = false;
            }
            self.counts[slot] -= 1;
            out.push(Card { kind: CardKind::Rank(face), golden });
        }
        out
    }

    pub fn take_jokers(&mut self, n: u8) -> Vec<Card> {
        assert!(self.counts[11] >= n, "hand holds {} jokers, asked for {n}", self.counts[11]);
        self.counts[11] -= n;
        vec![Card::joker(); n as usize]
    }

    /// All card values in ascending order, jokers as 12.
    pub fn sorted_values(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len());
        for (slot, &c) in self.counts.iter().enumerate() {
            out.extend(std::iter::repeat_n(slot as u8 + 1, c as usize));
        }
        out
    }

    pub fn cards(&self) -> Vec<Card> {
        let mut out = Vec::with_capacity(self.len());
        for face in 1..=MAX_FACE {
            let c = self.count(face);
            for i in 0..c {
                let golden = face == MAX_FACE && self.golden && i == c - 1;
                out.push(Card { kind: CardKind::Rank(face), golden });
            }
        }
        out.extend(std::iter::repeat_n(Card::joker(), self.jokers() as usize));
        out
    }

    /// Highest `n` non-joker face values, highest first.
    pub fn highest_faces(&self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        for face in (1..=MAX_FACE).rev() {
            for _ in 0..self.count(face) {
                if out.len() == n {
                    return out;
                }
                out.push(face);
            }
        }
        out
    }

    /// Lowest `n` non-joker face values, lowest first.
    pub fn lowest_faces(&self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        for face in 1..=MAX_FACE {
            for _ in 0..self.count(face) {
                if out.len() == n {
                    return out;
                }
                out.push(face);
            }
        }
        out
    }
}

/// An ordered 68-card deck.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deck {
    cards: Vec<Card>,
}

impl Deck {
    /// `v` copies of every face value `v`, two jokers, one of the 11s golden.
    pub fn canonical() -> Self {
        let mut cards = Vec::with_capacity(DECK_SIZE);
        for face in 1..=MAX_FACE {
            for copy in 0..face {
                if face == MAX_FACE && copy == 0 {
                    cards.push(Card::golden_eleven());
                } else {
                    cards.push(Card::rank(face));
                }
            }
        }
        cards.extend(std::iter::repeat_n(Card::joker(), JOKERS_IN_DECK as usize));
        Self { cards }
    }

    pub fn from_cards(cards: Vec<Card>) -> Self {
        Self { cards }
    }

    pub fn shuffled<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut deck = Self::canonical();
        deck.cards.shuffle(rng);
        deck
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    /// Deals consecutive 17-card blocks to seats 0..3.
    pub fn deal(&self) -> Result<[Hand; SEATS]> {
        if self.cards.len() != DECK_SIZE {
            return Err(Error::Config(format!(
                "deck has {} cards, expected {DECK_SIZE}",
                self.cards.len()
            )));
        }
        let mut hands: [Hand; SEATS] = Default::default();
        for (seat, chunk) in self.cards.chunks(HAND_SIZE).enumerate() {
            hands[seat] = Hand::from_cards(chunk);
        }
        Ok(hands)
    }
}

pub fn new_shuffled_deck<R: Rng + ?Sized>(rng: &mut R) -> Deck {
    Deck::shuffled(rng)
}

pub fn deal(deck: &Deck) -> Result<[Hand; SEATS]> {
    deck.deal()
}
