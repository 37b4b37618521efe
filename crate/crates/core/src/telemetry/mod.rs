//! Observation-only recording: per-decision confidence traces, JSONL match
//! transcripts that replay bit-exactly, and the results table.
//!
//! Nothing here touches an agent or a random stream, so a run with a
//! [`Telemetry`] attached produces the same matches as one without.

mod qtrace;
mod results;
mod transcript;

pub use qtrace::{export_qtrace, import_qtrace, record_step, QtraceRow, StepLog, QTRACE_HEADER};
pub use results::{ResultsRow, ResultsTable, RESULTS_HEADER};
pub use transcript::{
    read_transcript, records_from_lines, transcript_lines, verify_transcript, write_transcript, TranscriptLine,
};

use crate::engine::MatchRecord;
use crate::error::Result;

/// Collector handed to the arena while matches run.
#[derive(Clone, Debug, Default)]
pub struct Telemetry {
    pub steps: Vec<StepLog>,
    pub transcript: Vec<TranscriptLine>,
    matches: usize,
    series: usize,
    series_started: usize,
}

impl Telemetry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index the next match will be logged under.
    pub fn match_index(&self) -> usize {
        self.matches
    }

    pub fn matches(&self) -> usize {
        self.matches
    }

    /// Marks the start of a new series; transcript lines carry its running index.
    pub fn begin_series(&mut self) {
        self.series = self.series_started;
        self.series_started += 1;
    }

    pub fn log_step(&mut self, step: StepLog) {
        self.steps.push(step);
    }

    /// Appends a finished match to the transcript.
    pub fn log_match(&mut self, record: &MatchRecord, allowed: &[usize]) -> Result<()> {
        let lines = transcript_lines(record, self.matches, self.series, allowed)?;
        self.transcript.extend(lines);
        self.matches += 1;
        Ok(())
    }
}
