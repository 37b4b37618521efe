//! Generational self-play at reduced scale, then the first, middle and last
//! generation's best snapshots against a random seat.
//!
//!     cargo run --release --example self_play -- a2c

use chefs_hat::agents::AgentKind;
use chefs_hat::arena::{run_self_play, self_play_head_to_head, ExperimentConfig};

fn main() -> chefs_hat::Result<()> {
    let kind: AgentKind = std::env::args().nth(1).as_deref().unwrap_or("a2c").parse()?;
    let config = ExperimentConfig {
        generations: 5,
        generation_games: 100,
        validation_games: 50,
        eval_runs: 5,
        eval_games: 100,
        ..ExperimentConfig::default()
    };
    let outcome = run_self_play(kind, &config, None)?;
    for r in &outcome.reports {
        println!("generation {}: seats {:?}, validation wins {:?}", r.generation + 1, r.labels, r.validation.wins);
    }
    println!("pool holds {} snapshots", outcome.pool.len());
    let (labels, summary) = self_play_head_to_head(&outcome, &config, None)?;
    for (seat, label) in labels.iter().enumerate() {
        println!("{label:>10}: {:5.1} ± {:.2}", summary.mean[seat], summary.std[seat]);
    }
    Ok(())
}
