use serde::{Deserialize, Serialize};

use super::play::play_match;
use crate::agents::Agent;
use crate::engine::SEATS;
use crate::error::{Error, Result};
use crate::seeding::derive_seed;
use crate::telemetry::Telemetry;

/// Outcome of consecutive matches played by the same four seats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub seed: u64,
    pub games: u32,
    pub wins: [u32; SEATS],
    pub positions_history: Vec<[usize; SEATS]>,
    pub reward_sums: [f64; SEATS],
    pub truncated: u32,
}

impl SeriesResult {
    /// Summed reward per game, the self-play ranking metric.
    pub fn average_reward(&self, seat: usize) -> f64 {
        if self.games == 0 {
            0.0
        } else {
            self.reward_sums[seat] / self.games as f64
        }
    }
}

/// Plays `games` matches seeded from `series_seed`. With `carry_roles`, each match
/// starts from the previous finishing order; otherwise every match is a fresh
/// start without roles.
pub fn play_series(
    agents: &mut [Box<dyn Agent>; SEATS],
    games: usize,
    series_seed: u64,
    learn: bool,
    carry_roles: bool,
    mut telemetry: Option<&mut Telemetry>,
) -> Result<SeriesResult> {
    let mut result = SeriesResult {
        seed: series_seed,
        games: 0,
        wins: [0; SEATS],
        positions_history: Vec::with_capacity(games),
        reward_sums: [0.0; SEATS],
        truncated: 0,
    };
    if let Some(t) = telemetry.as_deref_mut() {
        t.begin_series();
    }
    let mut prev: Vec<usize> = Vec::new();
    for game in 0..games {
        let record = play_match(agents, &prev, derive_seed(series_seed, game as u64), learn, telemetry.as_deref_mut())?;
        result.games += 1;
        result.wins[record.winner()] += 1;
        for (sum, r) in result.reward_sums.iter_mut().zip(record.reward_sums()) {
            *sum += r;
        }
        result.truncated += record.truncated as u32;
        result.positions_history.push(record.finish_positions);
        if carry_roles {
            prev = record.finish_positions.to_vec();
        }
    }
    Ok(result)
}

/// Per-seat win statistics over `runs` independent series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub games: usize,
    pub runs: Vec<SeriesResult>,
    /// Mean wins per series.
    pub mean: [f64; SEATS],
    /// Sample standard deviation of wins per series; zero for a single run.
    pub std: [f64; SEATS],
}

impl EvaluationSummary {
    pub fn from_runs(games: usize, runs: Vec<SeriesResult>) -> Self {
        let n = runs.len() as f64;
        let mean: [f64; SEATS] = std::array::from_fn(|s| runs.iter().map(|r| r.wins[s] as f64).sum::<f64>() / n);
        let std = std::array::from_fn(|s| {
            if runs.len() < 2 {
                return 0.0;
            }
            let ss: f64 = runs.iter().map(|r| (r.wins[s] as f64 - mean[s]).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        });
        Self { games, runs, mean, std }
    }

    /// Mean wins scaled to 100 games.
    pub fn per_hundred(&self, seat: usize) -> f64 {
        self.mean[seat] * 100.0 / self.games as f64
    }
}

/// Frozen evaluation: `runs` series of `games` matches, roles carried within a
/// series and reset between them. Series `r` is seeded with `derive_seed(seed, r)`.
pub fn evaluate(
    agents: &mut [Box<dyn Agent>; SEATS],
    runs: usize,
    games: usize,
    seed: u64,
    mut telemetry: Option<&mut Telemetry>,
) -> Result<EvaluationSummary> {
    if runs == 0 || games == 0 {
        return Err(Error::InvalidArgument("evaluation needs at least one run and one game".into()));
    }
    if let Some(seat) = agents.iter().position(|a| a.is_training()) {
        return Err(Error::Precondition(format!("seat {seat} is still training")));
    }
    let mut results = Vec::with_capacity(runs);
    for run in 0..runs {
        results.push(play_series(agents, games, derive_seed(seed, run as u64), false, true, telemetry.as_deref_mut())?);
    }
    Ok(EvaluationSummary::from_runs(games, results))
}

/// Turns learning off on every seat.
pub fn freeze(agents: &mut [Box<dyn Agent>; SEATS]) {
    for a in agents.iter_mut() {
        a.set_training(false);
    }
}
