use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arena::EvaluationSummary;
use crate::error::{Error, Result};

pub const RESULTS_HEADER: &str = "experiment,phase,agent,run,wins,mean,std,seed";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultsRow {
    pub experiment: String,
    pub phase: String,
    pub agent: String,
    pub run: usize,
    pub wins: u32,
    pub mean: f64,
    pub std: f64,
    pub seed: u64,
}

/// Append-only table of evaluation outcomes, one row per agent per run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultsTable {
    rows: Vec<ResultsRow>,
}

impl ResultsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[ResultsRow] {
        &self.rows
    }

    pub fn push(&mut self, row: ResultsRow) {
        self.rows.push(row);
    }

    /// Adds a summary with one label per seat.
    pub fn push_summary(&mut self, experiment: &str, phase: &str, labels: &[String], summary: &EvaluationSummary) {
        for (run, series) in summary.runs.iter().enumerate() {
            for (seat, label) in labels.iter().enumerate() {
                self.rows.push(ResultsRow {
                    experiment: experiment.to_string(),
                    phase: phase.to_string(),
                    agent: label.clone(),
                    run,
                    wins: series.wins[seat],
                    mean: summary.mean[seat],
                    std: summary.std[seat],
                    seed: series.seed,
                });
            }
        }
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        if self.rows.is_empty() {
            w.write_record(RESULTS_HEADER.split(','))?;
        }
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
        if header != RESULTS_HEADER {
            return Err(Error::Config(format!("results header {header:?}")));
        }
        let rows = r.deserialize().collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self { rows })
    }
}
