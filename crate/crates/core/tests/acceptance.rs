//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use chefs_hat::action_space::{decode, masked_uniform, possible_actions};
use chefs_hat::agents::AgentKind;
use chefs_hat::arena::{run_self_play, run_vs_random, self_play_head_to_head, ExperimentConfig};
use chefs_hat::engine::{replay, MatchState, ReturnHighest, SEATS, STEP_REWARD, WIN_REWARD};
use chefs_hat::seeding::{derive_seed, rng_from};
use chefs_hat::telemetry::{
    export_qtrace, import_qtrace, read_transcript, records_from_lines, verify_transcript, write_transcript, QtraceRow,
    ResultsTable, Telemetry,
};
use common::{assert_permutation, oracle_mask, random_match, random_trajectory, solve_tiny_mdp};

const LEARNERS: [AgentKind; 3] = [AgentKind::Dql, AgentKind::A2c, AgentKind::Ppo];
const ENGINE_BUDGET: Duration = Duration::from_secs(60);
const GRAD_TOLERANCE: f64 = 1e-4;
const GRAD_PROBES: usize = 100;
const VS_RANDOM_LEARNER_MIN: f64 = 40.0;
const VS_RANDOM_OPPONENT_MAX: f64 = 20.0;
const MDP_UPDATES: u64 = 5000;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn mask_oracle() -> Outcome {
    let start = Instant::now();
    let (mut states, mut mismatches) = (0usize, 0usize);
    let mut prev = Vec::new();
    let mut seed = 0u64;
    while seed < 100 || states < 10_000 {
        let (seen, last) = random_trajectory(seed, &prev);
        seed += 1;
        for s in &seen {
            states += 1;
            mismatches += (possible_actions(s, s.turn()) != oracle_mask(s, s.turn())) as usize;
        }
        prev = last.finish_positions().unwrap().to_vec();
    }
    let elapsed = start.elapsed();
    check(
        states >= 10_000 && mismatches == 0 && elapsed <= ENGINE_BUDGET,
        format!("{states} states from {seed} matches, {mismatches} mismatches, {:.1}s", elapsed.as_secs_f64()),
    )
}

fn engine_properties() -> Outcome {
    let start = Instant::now();
    let mut prev: Vec<usize> = Vec::new();
    let mut longest = 0;
    for seed in 0..1000u64 {
        let mut deck = rng_from(seed);
        let mut rng = rng_from(derive_seed(seed, 1));
        let (mut state, _) = MatchState::start(&mut deck, &prev, &ReturnHighest).map_err(|e| e.to_string())?;
        let mut last_pizzas = 0;
        while !state.is_over() {
            let seat = state.turn();
            let board = state.board_value();
            let mv = decode(masked_uniform(&possible_actions(&state, seat), &mut rng).unwrap())
                .unwrap()
                .resolve(state.hand(seat));
            state.apply_move(seat, mv).map_err(|e| format!("seed {seed}: {e}"))?;
            state.check_conservation().map_err(|e| format!("seed {seed}: {e}"))?;
            if let (Some(b), Some(v)) = (board, mv.value()) {
                if v >= b {
                    return Err(format!("seed {seed}: {mv} on a group worth {b}"));
                }
            }
            if state.pizzas_made() < last_pizzas {
                return Err(format!("seed {seed}: pizza count went down"));
            }
            last_pizzas = state.pizzas_made();
            if state.turn_counter() >= 2000 {
                return Err(format!("seed {seed}: no finish within 2000 turns"));
            }
        }
        longest = longest.max(state.turn_counter());
        let positions = state.finish_positions().unwrap();
        assert_permutation(&positions);

        let record = random_match(seed, &prev);
        let w = record.winner();
        let k = record.rewards[w].len() as f64;
        if (record.reward_sums()[w] - (WIN_REWARD + STEP_REWARD * (k - 1.0))).abs() > 1e-9 {
            return Err(format!("seed {seed}: winner reward sum {}", record.reward_sums()[w]));
        }
        if record.rewards.iter().flatten().filter(|&&r| r == WIN_REWARD).count() != 1 {
            return Err(format!("seed {seed}: expected exactly one winning reward"));
        }
        prev = positions.to_vec();
    }
    let elapsed = start.elapsed();
    check(elapsed <= ENGINE_BUDGET, format!("1000 matches, longest {longest} turns, {:.1}s", elapsed.as_secs_f64()))
}

fn small_config() -> ExperimentConfig {
    let mut config = ExperimentConfig { training_games: 30, eval_runs: 3, eval_games: 10, seed: 11, ..ExperimentConfig::default() };
    config.agent = config.agent.with_hidden(&[32]);
    config.agent.batch_size = 16;
    config
}

/// Runs a small experiment, writes its files and returns their bytes.
fn experiment_bytes(kind: AgentKind, telemetry: bool) -> (Vec<u8>, Option<Vec<u8>>, Option<Vec<u8>>) {
    let dir = tempfile::tempdir().unwrap();
    let mut t = Telemetry::new();
    let outcome = run_vs_random(kind, &small_config(), telemetry.then_some(&mut t)).unwrap();
    let mut table = ResultsTable::new();
    table.push_summary("vs_random", "eval", &outcome.labels(), &outcome.evaluation);
    table.write_csv(&dir.path().join("results.csv")).unwrap();
    let results = std::fs::read(dir.path().join("results.csv")).unwrap();
    if !telemetry {
        return (results, None, None);
    }
    write_transcript(&t.transcript, &dir.path().join("t.jsonl")).unwrap();
    export_qtrace(&t.steps, &dir.path().join("q.csv")).unwrap();
    (
        results,
        Some(std::fs::read(dir.path().join("t.jsonl")).unwrap()),
        Some(std::fs::read(dir.path().join("q.csv")).unwrap()),
    )
}

fn determinism() -> Outcome {
    for kind in LEARNERS {
        let a = experiment_bytes(kind, true);
        let b = experiment_bytes(kind, true);
        if a != b {
            return Err(format!("{kind}: repeated run differs"));
        }
    }
    Ok("results.csv, transcripts and confidence traces byte-identical for dql, a2c, ppo".into())
}

fn gradients() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, f) in [
        ("q", common::gradcheck_q as fn(u64, usize) -> f64),
        ("actor-critic", common::gradcheck_actor_critic),
        ("surrogate", common::gradcheck_surrogate),
        ("value", common::gradcheck_value),
    ] {
        let err = (0..3).map(|seed| f(seed, GRAD_PROBES)).fold(0.0, f64::max);
        worst = worst.max(err);
        parts.push(format!("{name} {err:.1e}"));
    }
    check(worst < GRAD_TOLERANCE, format!("max relative error: {}", parts.join(", ")))
}

fn vs_random() -> Outcome {
    let config = ExperimentConfig::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in LEARNERS {
        let outcome = run_vs_random(kind, &config, None).map_err(|e| e.to_string())?;
        let e = &outcome.evaluation;
        let learner = e.per_hundred(0);
        let worst_random = (1..SEATS).map(|s| e.per_hundred(s)).fold(0.0, f64::max);
        ok &= learner >= VS_RANDOM_LEARNER_MIN && worst_random <= VS_RANDOM_OPPONENT_MAX;
        parts.push(format!("{kind} {learner:.1}±{:.1} (random ≤ {worst_random:.1})", e.std[0]));
    }
    check(ok, parts.join(", "))
}

fn self_play() -> Outcome {
    let config = ExperimentConfig::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in LEARNERS {
        let outcome = run_self_play(kind, &config, None).map_err(|e| e.to_string())?;
        let (labels, s) = self_play_head_to_head(&outcome, &config, None).map_err(|e| e.to_string())?;
        let random_last = (0..SEATS - 1).all(|seat| s.mean[SEATS - 1] < s.mean[seat]);
        ok &= s.mean[2] > s.mean[0] && random_last;
        let row: Vec<String> = labels.iter().zip(s.mean).map(|(l, m)| format!("{l} {m:.1}")).collect();
        parts.push(format!("[{}]", row.join(" ")));
    }
    check(ok, parts.join(" "))
}

fn tiny_mdp() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in LEARNERS {
        let run = solve_tiny_mdp(kind, MDP_UPDATES, 3);
        ok &= run.converged && run.updates <= MDP_UPDATES;
        parts.push(format!("{kind} {} updates", run.updates));
    }
    check(ok, parts.join(", "))
}

fn telemetry() -> Outcome {
    let config = small_config();
    let dir = tempfile::tempdir().unwrap();
    for kind in LEARNERS {
        let plain = run_vs_random(kind, &config, None).map_err(|e| e.to_string())?;
        let mut t = Telemetry::new();
        let traced = run_vs_random(kind, &config, Some(&mut t)).map_err(|e| e.to_string())?;
        if plain.training != traced.training || plain.evaluation != traced.evaluation {
            return Err(format!("{kind}: outcomes differ with telemetry attached"));
        }
        if experiment_bytes(kind, true).0 != experiment_bytes(kind, false).0 {
            return Err(format!("{kind}: results.csv differs with telemetry attached"));
        }

        let qpath = dir.path().join(format!("{kind}.csv"));
        export_qtrace(&t.steps, &qpath).map_err(|e| e.to_string())?;
        let rows = import_qtrace(&qpath).map_err(|e| e.to_string())?;
        if rows != t.steps.iter().map(QtraceRow::from).collect::<Vec<_>>() {
            return Err(format!("{kind}: qtrace.csv does not round-trip"));
        }

        let tpath = dir.path().join(format!("{kind}.jsonl"));
        write_transcript(&t.transcript, &tpath).map_err(|e| e.to_string())?;
        let lines = read_transcript(&tpath).map_err(|e| e.to_string())?;
        if lines != t.transcript {
            return Err(format!("{kind}: transcript does not round-trip"));
        }
        if verify_transcript(&lines).map_err(|e| e.to_string())? != t.matches() {
            return Err(format!("{kind}: not every match replayed"));
        }
        for record in records_from_lines(&lines).map_err(|e| e.to_string())?.values() {
            replay(record, &ReturnHighest).map_err(|e| e.to_string())?;
        }

        let mut table = ResultsTable::new();
        table.push_summary("vs_random", "eval", &traced.labels(), &traced.evaluation);
        let rpath = dir.path().join(format!("{kind}-results.csv"));
        table.write_csv(&rpath).map_err(|e| e.to_string())?;
        if ResultsTable::read_csv(&rpath).map_err(|e| e.to_string())? != table {
            return Err(format!("{kind}: results.csv does not round-trip"));
        }
    }
    Ok("identical with telemetry on and off; results, trace and transcript files round-trip and replay".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("mask matches oracle", mask_oracle),
        ("engine properties", engine_properties),
        ("determinism", determinism),
        ("gradient check", gradients),
        ("learning vs random", vs_random),
        ("self-play ordering", self_play),
        ("tiny MDP", tiny_mdp),
        ("telemetry neutrality and schema", telemetry),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {}. {name}: {msg} [{secs:.0}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name}: {msg} [{secs:.0}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
