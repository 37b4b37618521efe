//! One seeded match between four uniform agents, move by move.
//!
//!     cargo run --example play_random_match -- 42

use chefs_hat::agents::{Agent, RandomAgent};
use chefs_hat::arena::play_match;
use chefs_hat::engine::{replay, ReturnHighest};

fn main() -> chefs_hat::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let mut agents: [Box<dyn Agent>; 4] = std::array::from_fn(|_| Box::new(RandomAgent::new()) as Box<dyn Agent>);
    let record = play_match(&mut agents, &[], seed, false, None)?;
    for (step, (seat, mv)) in record.moves.iter().enumerate() {
        println!("{step:>4}  seat {seat}  {mv}");
    }
    println!("finishing order {:?}, reward sums {:?}", record.finish_positions, record.reward_sums());

    // the record alone is enough to rebuild the match
    let rebuilt = replay(&record, &ReturnHighest)?;
    println!("replayed {} states, final fingerprint {:x}", rebuilt.fingerprints.len(), rebuilt.final_state.fingerprint());
    Ok(())
}
