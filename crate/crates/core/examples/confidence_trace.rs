//! Trains a DQL agent for a few games and exports the per-decision confidence
//! (softmax of its action values over the allowed slots) to CSV.

use chefs_hat::agents::{build_agent, Agent, AgentConfig, AgentKind, RandomAgent};
use chefs_hat::arena::play_series;
use chefs_hat::telemetry::{export_qtrace, Telemetry};

fn main() -> chefs_hat::Result<()> {
    let mut agents: [Box<dyn Agent>; 4] = std::array::from_fn(|_| Box::new(RandomAgent::new()) as Box<dyn Agent>);
    agents[0] = build_agent(&AgentConfig::new(AgentKind::Dql).with_hidden(&[64, 64]))?;
    agents[0].set_training(true);
    let mut telemetry = Telemetry::new();
    play_series(&mut agents, 30, 5, true, true, Some(&mut telemetry))?;

    let per_match: Vec<f64> = (0..telemetry.matches())
        .map(|m| {
            let c: Vec<f64> = telemetry.steps.iter().filter(|s| s.match_index == m).map(|s| s.confidence).collect();
            c.iter().sum::<f64>() / c.len().max(1) as f64
        })
        .collect();
    for (m, c) in per_match.iter().enumerate().step_by(5) {
        println!("match {m:>3}: mean confidence {c:.3}");
    }
    let path = std::env::temp_dir().join("chefs_hat_qtrace.csv");
    export_qtrace(&telemetry.steps, &path)?;
    println!("{} rows written to {}", telemetry.steps.len(), path.display());
    Ok(())
}
