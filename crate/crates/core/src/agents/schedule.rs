use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Exploration rate multiplied by `decay` after every policy update, floored at
/// `minimum`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpsilonSchedule {
    pub start: f64,
    pub minimum: f64,
    pub decay: f64,
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        Self { start: 1.0, minimum: 0.1, decay: 0.995 }
    }
}

impl EpsilonSchedule {
    pub fn validate(&self) -> Result<(), Error> {
        let ok = (0.0..=1.0).contains(&self.start)
            && (0.0..=self.start).contains(&self.minimum)
            && (0.0..=1.0).contains(&self.decay);
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("bad epsilon schedule {self:?}")))
        }
    }

    pub fn value_after(&self, updates: u64) -> f64 {
        (self.start * self.decay.powf(updates as f64)).max(self.minimum)
    }
}

/// Current exploration rate driven by an [`EpsilonSchedule`].
#[derive(Clone, Debug, PartialEq)]
pub struct Exploration {
    schedule: EpsilonSchedule,
    value: f64,
}

impl Exploration {
    pub fn new(schedule: EpsilonSchedule) -> Self {
        let value = schedule.start;
        Self { schedule, value }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn decay(&mut self) {
        self.value = (self.value * self.schedule.decay).max(self.schedule.minimum);
    }
}

/// Adaptive KL penalty: doubles `beta` when the measured divergence overshoots
/// 1.5x the target, halves it below target / 1.5.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlController {
    pub beta: f64,
    pub kl_target: f64,
}

const BETA_FLOOR: f64 = 1e-8;
const BETA_CEILING: f64 = 1e8;

impl KlController {
    pub fn new(beta: f64, kl_target: f64) -> Self {
        Self { beta, kl_target }
    }

    pub fn update(&mut self, kl: f64) {
        if kl > 1.5 * self.kl_target {
            self.beta *= 2.0;
        } else if kl < self.kl_target / 1.5 {
            self.beta /= 2.0;
        }
        self.beta = self.beta.clamp(BETA_FLOOR, BETA_CEILING);
    }
}
