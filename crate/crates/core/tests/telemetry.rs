mod common;

use chefs_hat::agents::{build_agent, AgentConfig, AgentKind};
use chefs_hat::arena::{play_series, run_vs_random, ExperimentConfig};
use chefs_hat::telemetry::{
    export_qtrace, import_qtrace, read_transcript, records_from_lines, verify_transcript, write_transcript,
    QtraceRow, ResultsTable, Telemetry, RESULTS_HEADER,
};
use common::random_seats;

fn config() -> ExperimentConfig {
    ExperimentConfig {
        training_games: 15,
        eval_runs: 2,
        eval_games: 10,
        seed: 21,
        agent: AgentConfig { batch_size: 16, ..AgentConfig::default() }.with_hidden(&[24]),
        ..ExperimentConfig::default()
    }
}

#[test]
fn telemetry_does_not_change_outcomes() {
    for kind in [AgentKind::Dql, AgentKind::A2c, AgentKind::Ppo] {
        let plain = run_vs_random(kind, &config(), None).unwrap();
        let mut t = Telemetry::new();
        let traced = run_vs_random(kind, &config(), Some(&mut t)).unwrap();
        assert_eq!(plain.training, traced.training);
        assert_eq!(plain.evaluation, traced.evaluation);
        assert_eq!(plain.agents[0].weights_hash(), traced.agents[0].weights_hash());
        assert_eq!(t.matches(), 15 + 20);
    }
}

#[test]
fn one_trace_row_per_learner_action() {
    let mut seats = random_seats();
    seats[2] = build_agent(&AgentConfig::new(AgentKind::Dql).with_hidden(&[16])).unwrap();
    seats[2].set_training(false);
    let mut t = Telemetry::new();
    let result = play_series(&mut seats, 100, 4, false, true, Some(&mut t)).unwrap();
    assert_eq!(t.matches(), 100);
    let learner_moves = t.transcript.iter().filter(|l| l.seat == 2).count();
    assert_eq!(t.steps.len(), learner_moves);
    assert!(t.steps.iter().all(|s| s.seat == 2 && s.confidence > 0.0 && s.confidence <= 1.0));
    assert!(t.steps.iter().filter(|s| s.allowed == 1).all(|s| s.confidence == 1.0));
    assert_eq!(result.games, 100);
}

#[test]
fn files_round_trip_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let mut t = Telemetry::new();
    let outcome = run_vs_random(AgentKind::Ppo, &config(), Some(&mut t)).unwrap();

    let qpath = dir.path().join("qtrace.csv");
    export_qtrace(&t.steps, &qpath).unwrap();
    let rows = import_qtrace(&qpath).unwrap();
    assert_eq!(rows, t.steps.iter().map(QtraceRow::from).collect::<Vec<_>>());

    let tpath = dir.path().join("transcripts.jsonl");
    write_transcript(&t.transcript, &tpath).unwrap();
    let lines = read_transcript(&tpath).unwrap();
    assert_eq!(lines, t.transcript);
    assert_eq!(verify_transcript(&lines).unwrap(), t.matches());
    assert_eq!(records_from_lines(&lines).unwrap().len(), t.matches());

    let mut table = ResultsTable::new();
    table.push_summary("vs_random", "eval", &outcome.labels(), &outcome.evaluation);
    let rpath = dir.path().join("results.csv");
    table.write_csv(&rpath).unwrap();
    assert_eq!(std::fs::read_to_string(&rpath).unwrap().lines().next().unwrap(), RESULTS_HEADER);
    assert_eq!(ResultsTable::read_csv(&rpath).unwrap(), table);
    assert_eq!(table.rows().len(), 4 * 2);
}

#[test]
fn corrupted_transcripts_fail_verification() {
    let mut t = Telemetry::new();
    play_series(&mut random_seats(), 3, 9, false, true, Some(&mut t)).unwrap();
    let good = t.transcript.clone();
    assert_eq!(verify_transcript(&good).unwrap(), 3);

    let mut bad_board = good.clone();
    bad_board[5].board_after.push(3);
    assert!(verify_transcript(&bad_board).is_err());

    let mut bad_reward = good.clone();
    let seat = bad_reward[4].seat;
    bad_reward[4].rewards[seat] = 0.5;
    assert!(verify_transcript(&bad_reward).is_err());

    let mut missing = good.clone();
    missing.remove(7);
    assert!(verify_transcript(&missing).is_err());

    let mut bad_seed = good;
    let last = bad_seed.iter().rposition(|l| l.match_index == 0).unwrap();
    for l in bad_seed.iter_mut().take(last + 1) {
        l.seed ^= 1;
    }
    assert!(verify_transcript(&bad_seed).is_err());
}

#[test]
fn series_index_advances_per_series() {
    let mut t = Telemetry::new();
    for s in 0..3 {
        play_series(&mut random_seats(), 2, s, false, true, Some(&mut t)).unwrap();
    }
    let series: Vec<usize> = t.transcript.iter().map(|l| l.series).collect();
    assert_eq!(series.first(), Some(&0));
    assert_eq!(series.last(), Some(&2));
    assert!(series.windows(2).all(|w| w[0] <= w[1]));
}
