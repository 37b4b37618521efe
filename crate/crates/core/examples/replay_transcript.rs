//! Records a short series with telemetry attached, writes the JSONL transcript
//! and verifies it by replaying every match from its seed.

use chefs_hat::agents::{Agent, RandomAgent};
use chefs_hat::arena::play_series;
use chefs_hat::telemetry::{read_transcript, verify_transcript, write_transcript, Telemetry};

fn main() -> chefs_hat::Result<()> {
    let mut agents: [Box<dyn Agent>; 4] = std::array::from_fn(|_| Box::new(RandomAgent::new()) as Box<dyn Agent>);
    let mut telemetry = Telemetry::new();
    let series = play_series(&mut agents, 10, 2024, false, true, Some(&mut telemetry))?;
    println!("wins {:?}", series.wins);

    let path = std::env::temp_dir().join("chefs_hat_transcript.jsonl");
    write_transcript(&telemetry.transcript, &path)?;
    let lines = read_transcript(&path)?;
    println!("{} lines in {}", lines.len(), path.display());
    println!("verified {} matches", verify_transcript(&lines)?);
    Ok(())
}
