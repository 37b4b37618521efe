//! Trains one learner against three random seats and evaluates it frozen.
//!
//!     cargo run --release --example train_vs_random -- ppo 1000

use chefs_hat::agents::AgentKind;
use chefs_hat::arena::{run_vs_random, ExperimentConfig};

fn main() -> chefs_hat::Result<()> {
    let mut args = std::env::args().skip(1);
    let kind: AgentKind = args.next().as_deref().unwrap_or("ppo").parse()?;
    let games = args.next().and_then(|s| s.parse().ok()).unwrap_or(300);
    let config = ExperimentConfig { training_games: games, seed: 1, ..ExperimentConfig::default() };

    let outcome = run_vs_random(kind, &config, None)?;
    println!("training wins {:?} over {games} games, {} updates", outcome.training.wins, outcome.agents[0].updates());
    for (seat, label) in outcome.labels().iter().enumerate() {
        println!(
            "{label:>8}: {:5.1} ± {:.2} wins per 100",
            outcome.evaluation.per_hundred(seat),
            outcome.evaluation.std[seat]
        );
    }
    Ok(())
}
