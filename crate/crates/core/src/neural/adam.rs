use serde::{Deserialize, Serialize};

use super::loss::GradientReport;
use super::network::Parameters;
use crate::error::{Error, Result};

/// Adaptive-moment optimizer state for one model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerState {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub step: u64,
    first: Vec<f64>,
    second: Vec<f64>,
}

impl OptimizerState {
    pub fn new(learning_rate: f64, param_count: usize) -> Self {
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            step: 0,
            first: vec![0.0; param_count],
            second: vec![0.0; param_count],
        }
    }

    pub fn for_model(learning_rate: f64, model: &dyn Parameters) -> Self {
        Self::new(learning_rate, model.param_count())
    }
}

/// One bias-corrected adaptive-moment update of `model` along `report.grads`.
pub fn adam_step(model: &mut dyn Parameters, state: &mut OptimizerState, report: &GradientReport) -> Result<()> {
    let n = state.first.len();
    if report.grads.len() != n || model.param_count() != n {
        return Err(Error::Dimension { expected: n, got: report.grads.len() });
    }
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - state.beta1.powi(t);
    let c2 = 1.0 - state.beta2.powi(t);
    let (b1, b2, lr, eps) = (state.beta1, state.beta2, state.learning_rate, state.epsilon);
    let first = &mut state.first;
    let second = &mut state.second;
    let mut i = 0;
    model.visit_mut(&mut |params| {
        for p in params.iter_mut() {
            let g = report.grads[i];
            first[i] = b1 * first[i] + (1.0 - b1) * g;
            second[i] = b2 * second[i] + (1.0 - b2) * g * g;
            let m_hat = first[i] / c1;
            let v_hat = second[i] / c2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
            i += 1;
        }
    });
    Ok(())
}
