//! Chef's Hat: a deterministic engine for the four-player shedding card game, a
//! fixed 200-slot masked action space, a small dense-network library and three
//! learning agents (double DQN, A2C, PPO with an adaptive KL penalty), plus the
//! arena that trains and evaluates them and the telemetry it writes.

pub mod action_space;
pub mod agents;
pub mod arena;
pub mod engine;
pub mod error;
pub mod neural;
pub mod seeding;
pub mod telemetry;

pub use error::{Error, Result};
