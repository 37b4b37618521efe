//! Saves a trained PPO agent to a weight file and loads it back for evaluation.

use chefs_hat::agents::{load_agent, save_agent, AgentKind};
use chefs_hat::arena::{evaluate, run_vs_random, ExperimentConfig};

fn main() -> chefs_hat::Result<()> {
    let config = ExperimentConfig { training_games: 100, eval_runs: 2, eval_games: 50, ..ExperimentConfig::default() };
    let mut outcome = run_vs_random(AgentKind::Ppo, &config, None)?;
    let path = std::env::temp_dir().join("chefs_hat_ppo.weights.json");
    save_agent(outcome.agents[0].as_ref(), &path)?;

    let before = outcome.evaluation.mean;
    outcome.agents[0] = load_agent(&path)?;
    assert_eq!(outcome.agents[0].weights_hash(), load_agent(&path)?.weights_hash());
    let again = evaluate(&mut outcome.agents, config.eval_runs, config.eval_games, 99, None)?;
    println!("saved to {}", path.display());
    println!("original evaluation {before:?}, reloaded agent on fresh seeds {:?}", again.mean);
    Ok(())
}
