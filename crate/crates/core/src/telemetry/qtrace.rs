use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::action_space::{ActionIndex, MaskVector};
use crate::agents::AgentKind;
use crate::error::{Error, Result};
use crate::neural::masked_softmax;

pub const QTRACE_HEADER: &str = "match,turn,seat,agent,action_index,confidence";

/// One learner decision: how sure the agent was of the action it took.
#[derive(Clone, Debug, PartialEq)]
pub struct StepLog {
    pub match_index: usize,
    pub turn: u32,
    pub seat: usize,
    pub agent: AgentKind,
    pub action: ActionIndex,
    /// Softmax of the agent's outputs over the allowed slots, read at `action`.
    pub confidence: f64,
    /// Number of allowed slots; 1 marks a forced move.
    pub allowed: usize,
}

/// The columns written to `qtrace.csv`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QtraceRow {
    #[serde(rename = "match")]
    pub match_index: usize,
    pub turn: u32,
    pub seat: usize,
    pub agent: AgentKind,
    pub action_index: usize,
    pub confidence: f64,
}

impl From<&StepLog> for QtraceRow {
    fn from(s: &StepLog) -> Self {
        Self {
            match_index: s.match_index,
            turn: s.turn,
            seat: s.seat,
            agent: s.agent,
            action_index: s.action.0,
            confidence: s.confidence,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn record_step(
    match_index: usize,
    turn: u32,
    seat: usize,
    agent: AgentKind,
    outputs: &[f64],
    mask: &MaskVector,
    chosen: ActionIndex,
) -> Result<StepLog> {
    if !mask.allows(chosen) {
        return Err(Error::Precondition(format!("slot {} is not allowed", chosen.0)));
    }
    let probs = masked_softmax(outputs, mask)?;
    Ok(StepLog { match_index, turn, seat, agent, action: chosen, confidence: probs[chosen.0], allowed: mask.count() })
}

pub fn export_qtrace(logs: &[StepLog], path: &Path) -> Result<()> {
    if logs.is_empty() {
        return Err(Error::Precondition("no steps to export".into()));
    }
    let mut w = csv::Writer::from_path(path)?;
    for log in logs {
        w.serialize(QtraceRow::from(log))?;
    }
    w.flush()?;
    Ok(())
}

pub fn import_qtrace(path: &Path) -> Result<Vec<QtraceRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != QTRACE_HEADER {
        return Err(Error::Config(format!("qtrace header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn uniform_outputs_over_four_slots() {
        let mask = MaskVector::from_slots(&[1, 5, 9, 199]);
        let log = record_step(0, 0, 0, AgentKind::Dql, &[0.3; 200], &mask, ActionIndex(9)).unwrap();
        assert!((log.confidence - 0.25).abs() < 1e-12);
        assert_eq!(log.allowed, 4);
    }

    #[test]
    fn forced_move_is_certain() {
        let mut outputs = vec![0.0; 200];
        outputs[3] = -50.0;
        let mask = MaskVector::from_slots(&[3]);
        let log = record_step(0, 0, 0, AgentKind::Ppo, &outputs, &mask, ActionIndex(3)).unwrap();
        assert_eq!(log.confidence, 1.0);
    }

    #[test]
    fn matches_direct_softmax() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let outputs: Vec<f64> = (0..200).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let slots = [0usize, 12, 77, 150, 199];
        let mask = MaskVector::from_slots(&slots);
        let z: f64 = slots.iter().map(|&s| outputs[s].exp()).sum();
        let log = record_step(0, 0, 0, AgentKind::A2c, &outputs, &mask, ActionIndex(77)).unwrap();
        assert!((log.confidence - outputs[77].exp() / z).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip_and_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("q.csv");
        let logs: Vec<StepLog> = (0..5)
            .map(|i| StepLog {
                match_index: i / 2,
                turn: i as u32,
                seat: i % 4,
                agent: AgentKind::Dql,
                action: ActionIndex(i * 7),
                confidence: 1.0 / (i as f64 + 3.0),
                allowed: 3,
            })
            .collect();
        export_qtrace(&logs, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), QTRACE_HEADER);
        let back = import_qtrace(&path).unwrap();
        assert_eq!(back, logs.iter().map(QtraceRow::from).collect::<Vec<_>>());
        assert!(export_qtrace(&[], &path).is_err());
    }
}
