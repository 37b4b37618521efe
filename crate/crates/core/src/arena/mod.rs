//! Match loop, series and evaluation, and the three experiment protocols:
//! learner against random seats, generational self-play, and the tournament
//! between trained learners.
//!
//! Seeds fan out from one master seed with [`derive_seed`](crate::seeding::derive_seed):
//! each phase gets its own stream, series `r` of a phase is `derive_seed(phase, r)`
//! and game `g` of a series is `derive_seed(series, g)`. A match is fully
//! determined by its own seed and the previous finishing order.

mod config;
mod play;
mod protocols;
mod series;

pub use config::{ExperimentConfig, Protocol};
pub use play::{play_match, MAX_TURNS};
pub use protocols::{
    draw_opponents, rank_seats, run_self_play, run_vs_others, run_vs_random, self_play_head_to_head,
    showcase_generations, GenerationPool, GenerationReport, OpponentSource, SelfPlayOutcome, Snapshot, SnapshotTag,
    TournamentOutcome, VsRandomOutcome,
};
pub use series::{evaluate, freeze, play_series, EvaluationSummary, SeriesResult};
