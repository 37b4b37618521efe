use rand::Rng;

use super::catalog::{ActionIndex, ACTION_COUNT};
use super::mask::MaskVector;
use crate::error::{Error, Result};

/// Highest-scoring allowed slot; ties go to the lowest index.
pub fn masked_argmax(scores: &[f64], mask: &MaskVector) -> Result<ActionIndex> {
    if scores.len() != ACTION_COUNT {
        return Err(Error::Dimension { expected: ACTION_COUNT, got: scores.len() });
    }
    let mut best: Option<(usize, f64)> = None;
    for index in mask.allowed() {
        let q = scores[index.0];
        match best {
            Some((_, b)) if q <= b => {}
            _ => best = Some((index.0, q)),
        }
    }
    best.map(|(i, _)| ActionIndex(i)).ok_or(Error::EmptyMask)
}

pub fn masked_uniform<R: Rng + ?Sized>(mask: &MaskVector, rng: &mut R) -> Result<ActionIndex> {
    let n = mask.count();
    if n == 0 {
        return Err(Error::EmptyMask);
    }
    let k = rng.gen_range(0..n);
    Ok(mask.allowed().nth(k).expect("k < count"))
}

/// With probability `epsilon` a uniform allowed slot, otherwise the masked argmax.
pub fn epsilon_greedy<R: Rng + ?Sized>(
    scores: &[f64],
    mask: &MaskVector,
    epsilon: f64,
    rng: &mut R,
) -> Result<ActionIndex> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0, 1]")));
    }
    if mask.is_empty() {
        return Err(Error::EmptyMask);
    }
    let x: f64 = rng.gen();
    if x < epsilon {
        masked_uniform(mask, rng)
    } else {
        masked_argmax(scores, mask)
    }
}
