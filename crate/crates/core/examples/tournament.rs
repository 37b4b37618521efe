//! DQL, A2C and PPO, each briefly trained against random seats, meet each other
//! and a random seat before and after a joint training block.

use chefs_hat::agents::{Agent, AgentKind};
use chefs_hat::arena::{run_vs_others, run_vs_random, ExperimentConfig};

fn main() -> chefs_hat::Result<()> {
    let config = ExperimentConfig { training_games: 200, eval_runs: 5, eval_games: 50, ..ExperimentConfig::default() };
    let mut learners: Vec<Box<dyn Agent>> = Vec::new();
    for kind in [AgentKind::Dql, AgentKind::A2c, AgentKind::Ppo] {
        let [learner, ..] = run_vs_random(kind, &config, None)?.agents;
        learners.push(learner);
    }
    let outcome = run_vs_others(learners, &config, None)?;
    println!("{:>8} {:>8} {:>8}", "", "before", "after");
    for (seat, label) in outcome.labels.iter().enumerate() {
        println!("{label:>8} {:>8.1} {:>8.1}", outcome.before.per_hundred(seat), outcome.after.per_hundred(seat));
    }
    Ok(())
}
