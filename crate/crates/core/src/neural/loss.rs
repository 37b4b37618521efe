use ndarray::Array2;

use crate::action_space::MaskVector;
use crate::error::{Error, Result};

/// Gradient of a loss with respect to a model's flat parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientReport {
    pub grads: Vec<f64>,
    pub loss: f64,
}

impl GradientReport {
    pub fn norm(&self) -> f64 {
        self.grads.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    /// Rescales so the global norm is at most `max_norm`.
    pub fn clip_norm(&mut self, max_norm: f64) {
        let n = self.norm();
        if n > max_norm && n > 0.0 {
            let k = max_norm / n;
            self.grads.iter_mut().for_each(|g| *g *= k);
        }
    }
}

/// A scalar loss over a batch of network outputs.
pub trait Loss {
    /// Loss value and its gradient with respect to `outputs`.
    fn evaluate(&self, outputs: &Array2<f64>) -> Result<(f64, Array2<f64>)>;
}

pub(crate) fn ensure_finite(loss: f64, what: &str) -> Result<f64> {
    if loss.is_finite() {
        Ok(loss)
    } else {
        Err(Error::NonFiniteLoss(format!("{what} evaluated to {loss}")))
    }
}

/// Softmax restricted to allowed slots, stabilised by subtracting the allowed
/// maximum. Masked slots come out exactly zero.
pub fn masked_softmax(logits: &[f64], mask: &MaskVector) -> Result<Vec<f64>> {
    let allowed = mask.as_slice();
    if logits.len() != allowed.len() {
        return Err(Error::Dimension { expected: allowed.len(), got: logits.len() });
    }
    let max = logits
        .iter()
        .zip(allowed)
        .filter(|(_, &a)| a)
        .map(|(&z, _)| z)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::EmptyMask);
    }
    let mut out: Vec<f64> = logits
        .iter()
        .zip(allowed)
        .map(|(&z, &a)| if a { (z - max).exp() } else { 0.0 })
        .collect();
    let total: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= total);
    Ok(out)
}

fn check_batch(outputs: &Array2<f64>, n: usize, width: usize) -> Result<()> {
    if outputs.nrows() != n {
        return Err(Error::Dimension { expected: n, got: outputs.nrows() });
    }
    if outputs.ncols() != width {
        return Err(Error::Dimension { expected: width, got: outputs.ncols() });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    Ok(())
}

/// Mean squared error between the action-value of each taken action and its target.
#[derive(Clone, Debug)]
pub struct QRegression {
    pub actions: Vec<usize>,
    pub targets: Vec<f64>,
}

impl Loss for QRegression {
    fn evaluate(&self, outputs: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
        let n = self.actions.len();
        check_batch(outputs, n, outputs.ncols())?;
        let mut grad = Array2::zeros(outputs.raw_dim());
        let mut loss = 0.0;
        for (b, (&a, &y)) in self.actions.iter().zip(&self.targets).enumerate() {
            let err = outputs[[b, a]] - y;
            loss += err * err;
            grad[[b, a]] = 2.0 * err / n as f64;
        }
        Ok((ensure_finite(loss / n as f64, "q regression")?, grad))
    }
}

/// Mean squared error of a single-output value head.
#[derive(Clone, Debug)]
pub struct ValueRegression {
    pub targets: Vec<f64>,
}

impl Loss for ValueRegression {
    fn evaluate(&self, outputs: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
        let n = self.targets.len();
        check_batch(outputs, n, 1)?;
        let mut grad = Array2::zeros((n, 1));
        let mut loss = 0.0;
        for (b, &y) in self.targets.iter().enumerate() {
            let err = outputs[[b, 0]] - y;
            loss += err * err;
            grad[[b, 0]] = 2.0 * err / n as f64;
        }
        Ok((ensure_finite(loss / n as f64, "value regression")?, grad))
    }
}

/// `-mean(log pi(a|s) * A + c * H(pi(.|s)))` over masked-softmax policies; the
/// advantages are constants.
#[derive(Clone, Debug)]
pub struct PolicyGradient {
    pub masks: Vec<MaskVector>,
    pub actions: Vec<usize>,
    pub advantages: Vec<f64>,
    pub entropy_coef: f64,
}

impl Loss for PolicyGradient {
    fn evaluate(&self, outputs: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
        let n = self.actions.len();
        check_batch(outputs, n, outputs.ncols())?;
        let inv_n = 1.0 / n as f64;
        let mut grad = Array2::zeros(outputs.raw_dim());
        let mut loss = 0.0;
        for b in 0..n {
            let row = outputs.row(b);
            let probs = masked_softmax(row.as_slice().expect("contiguous row"), &self.masks[b])?;
            let a = self.actions[b];
            let adv = self.advantages[b];
            let allowed = self.masks[b].as_slice();
            let entropy: f64 = probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
            loss -= probs[a].ln() * adv + self.entropy_coef * entropy;
            for j in 0..probs.len() {
                if !allowed[j] {
                    continue;
                }
                let p = probs[j];
                let dlogp = if j == a { 1.0 - p } else { -p };
                let dent = if p > 0.0 { -p * (p.ln() + entropy) } else { 0.0 };
                grad[[b, j]] = -inv_n * (adv * dlogp + self.entropy_coef * dent);
            }
        }
        Ok((ensure_finite(loss * inv_n, "policy gradient")?, grad))
    }
}

/// `-mean(ratio * A) + beta * mean(KL(old || new))` with
/// `ratio = pi_new(a|s) / pi_old(a|s)`. Samples whose taken action had zero old
/// probability are left out.
#[derive(Clone, Debug)]
pub struct KlPenalizedSurrogate {
    pub masks: Vec<MaskVector>,
    pub actions: Vec<usize>,
    pub old_probs: Vec<Vec<f64>>,
    pub advantages: Vec<f64>,
    pub beta: f64,
}

impl KlPenalizedSurrogate {
    fn usable(&self) -> Vec<usize> {
        (0..self.actions.len()).filter(|&b| self.old_probs[b][self.actions[b]] > 0.0).collect()
    }

    pub fn excluded(&self) -> usize {
        self.actions.len() - self.usable().len()
    }

    fn kl(old: &[f64], new: &[f64]) -> f64 {
        old.iter().zip(new).filter(|(&o, _)| o > 0.0).map(|(&o, &p)| o * (o.ln() - p.ln())).sum()
    }

    /// Mean `KL(old || new)` over the usable samples.
    pub fn mean_kl(&self, outputs: &Array2<f64>) -> Result<f64> {
        let usable = self.usable();
        if usable.is_empty() {
            return Ok(0.0);
        }
        let mut total = 0.0;
        for &b in &usable {
            let row = outputs.row(b);
            let probs = masked_softmax(row.as_slice().expect("contiguous row"), &self.masks[b])?;
            total += Self::kl(&self.old_probs[b], &probs);
        }
        Ok(total / usable.len() as f64)
    }
}

impl Loss for KlPenalizedSurrogate {
    fn evaluate(&self, outputs: &Array2<f64>) -> Result<(f64, Array2<f64>)> {
        let n = self.actions.len();
        check_batch(outputs, n, outputs.ncols())?;
        let usable = self.usable();
        let mut grad = Array2::zeros(outputs.raw_dim());
        if usable.is_empty() {
            return Ok((0.0, grad));
        }
        let inv_n = 1.0 / usable.len() as f64;
        let mut loss = 0.0;
        for &b in &usable {
            let row = outputs.row(b);
            let probs = masked_softmax(row.as_slice().expect("contiguous row"), &self.masks[b])?;
            let old = &self.old_probs[b];
            let a = self.actions[b];
            let adv = self.advantages[b];
            let ratio = probs[a] / old[a];
            loss += -ratio * adv + self.beta * Self::kl(old, &probs);
            let allowed = self.masks[b].as_slice();
            for j in 0..probs.len() {
                if !allowed[j] {
                    continue;
                }
                let dratio = ratio * (if j == a { 1.0 } else { 0.0 } - probs[j]);
                grad[[b, j]] = inv_n * (-adv * dratio + self.beta * (probs[j] - old[j]));
            }
        }
        Ok((ensure_finite(loss * inv_n, "kl surrogate")?, grad))
    }
}
