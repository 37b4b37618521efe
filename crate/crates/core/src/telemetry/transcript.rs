use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::{replay, Card, MatchRecord, MatchState, Move, ReturnHighest, SEATS};
use crate::error::{Error, Result};
use crate::seeding::deck_rng;

/// One move of one match, as written to a `.jsonl` transcript.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptLine {
    pub seed: u64,
    pub match_index: usize,
    pub step: usize,
    pub seat: usize,
    #[serde(rename = "move")]
    pub mv: Move,
    /// Card values on the board after the move, jokers as 12.
    pub board_after: Vec<u8>,
    /// Reward each seat received for this step; only the acting seat is non-zero.
    pub rewards: [f64; SEATS],
    pub series: usize,
    pub prev_positions: Vec<usize>,
    pub truncated: bool,
    pub allowed: usize,
    /// Present on the last line of a match.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finish_positions: Option<[usize; SEATS]>,
}

fn board_values(board: &[Card]) -> Vec<u8> {
    board.iter().map(|c| c.value()).collect()
}

/// Lines for a finished match. `allowed` holds the mask size at every step.
pub fn transcript_lines(record: &MatchRecord, match_index: usize, series: usize, allowed: &[usize]) -> Result<Vec<TranscriptLine>> {
    let mut state = MatchState::start(&mut deck_rng(record.seed), &record.prev_positions, &ReturnHighest)?.0;
    let mut next = [0usize; SEATS];
    let n = record.moves.len();
    record
        .moves
        .iter()
        .enumerate()
        .map(|(step, &(seat, mv))| {
            state.apply_move(seat, mv).map_err(|violation| Error::IllegalMove { seat, violation })?;
            let mut rewards = [0.0; SEATS];
            rewards[seat] = record.rewards[seat][next[seat]];
            next[seat] += 1;
            Ok(TranscriptLine {
                seed: record.seed,
                match_index,
                step,
                seat,
                mv,
                board_after: board_values(state.board()),
                rewards,
                series,
                prev_positions: record.prev_positions.clone(),
                truncated: record.truncated,
                allowed: allowed.get(step).copied().unwrap_or(0),
                finish_positions: (step + 1 == n).then_some(record.finish_positions),
            })
        })
        .collect()
}

pub fn write_transcript(lines: &[TranscriptLine], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    for line in lines {
        serde_json::to_writer(&mut w, line)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_transcript(path: &Path) -> Result<Vec<TranscriptLine>> {
    let reader = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Replay(format!("line {}: {e}", n + 1)))?);
    }
    Ok(out)
}

/// Regroups transcript lines into match records, keyed by match index.
pub fn records_from_lines(lines: &[TranscriptLine]) -> Result<BTreeMap<usize, MatchRecord>> {
    let mut grouped: BTreeMap<usize, Vec<&TranscriptLine>> = BTreeMap::new();
    for line in lines {
        grouped.entry(line.match_index).or_default().push(line);
    }
    grouped
        .into_iter()
        .map(|(index, mut steps)| {
            steps.sort_by_key(|l| l.step);
            let first = steps[0];
            let last = steps[steps.len() - 1];
            if steps.iter().enumerate().any(|(i, l)| l.step != i || l.seed != first.seed) {
                return Err(Error::Replay(format!("match {index}: steps missing or mixed seeds")));
            }
            let finish_positions = last
                .finish_positions
                .ok_or_else(|| Error::Replay(format!("match {index}: no finishing order")))?;
            let mut rewards: [Vec<f64>; SEATS] = Default::default();
            for l in &steps {
                rewards[l.seat].push(l.rewards[l.seat]);
            }
            let record = MatchRecord {
                seed: first.seed,
                prev_positions: first.prev_positions.clone(),
                moves: steps.iter().map(|l| (l.seat, l.mv)).collect(),
                finish_positions,
                rewards,
                truncated: last.truncated,
            };
            Ok((index, record))
        })
        .collect()
}

/// Rebuilds every match in a transcript and checks moves, boards, rewards and
/// finishing orders. Returns the number of matches verified.
pub fn verify_transcript(lines: &[TranscriptLine]) -> Result<usize> {
    let records = records_from_lines(lines)?;
    for (index, record) in &records {
        replay(record, &ReturnHighest).map_err(|e| Error::Replay(format!("match {index}: {e}")))?;
        let rebuilt = transcript_lines(record, *index, 0, &[])?;
        let recorded = lines.iter().filter(|l| l.match_index == *index);
        for (a, b) in rebuilt.iter().zip(recorded) {
            if a.board_after != b.board_after {
                return Err(Error::Replay(format!("match {index} step {}: board differs", b.step)));
            }
        }
    }
    Ok(records.len())
}
