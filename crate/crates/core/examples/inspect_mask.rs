//! The legal-action mask for a hand-built position, checked against the
//! brute-force rules oracle.

use chefs_hat::action_space::{decode, encode, is_expressible, possible_actions};
use chefs_hat::engine::{legal_moves_oracle, observe, Card, Hand, MatchState};

fn main() -> chefs_hat::Result<()> {
    let hands = [
        Hand::from_values(&[3, 5, 5, 7, 12]),
        Hand::from_values(&[2, 9]),
        Hand::from_values(&[4]),
        Hand::from_values(&[6, 6]),
    ];
    // seat 0 to act on a pair of eights
    let state = MatchState::from_position(hands, vec![Card::rank(8), Card::rank(8)], 0, false);
    let mask = possible_actions(&state, 0);
    println!("observation {:?}", observe(&state, 0).map(|v| (v * 13.0).round() as u8));
    for slot in mask.allowed() {
        println!("slot {:>3}  {}", slot.0, decode(slot)?.resolve(state.hand(0)));
    }
    let oracle: Vec<_> = legal_moves_oracle(&state, 0)
        .into_iter()
        .filter(|m| is_expressible(m, state.hand(0)))
        .map(|m| encode(&m))
        .collect::<chefs_hat::Result<_>>()?;
    assert_eq!(oracle.len(), mask.count());
    assert!(oracle.iter().all(|s| mask.allows(*s)));
    println!("{} allowed slots, matching the oracle", mask.count());
    Ok(())
}
