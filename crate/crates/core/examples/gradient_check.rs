//! Compares the analytic gradient of the PPO surrogate against central finite
//! differences on a small tanh network.

use chefs_hat::action_space::MaskVector;
use chefs_hat::neural::{
    backward, batch_matrix, masked_softmax, max_relative_error, Activation, KlPenalizedSurrogate, Loss, Mlp,
    Parameters,
};
use chefs_hat::seeding::rng_from;
use rand::Rng;

fn main() -> chefs_hat::Result<()> {
    let mut rng = rng_from(3);
    let net = Mlp::new(&[28, 16, 200], Activation::Tanh, Activation::Linear, 1.0, &mut rng)?;
    let old = Mlp::new(&[28, 16, 200], Activation::Tanh, Activation::Linear, 1.0, &mut rng)?;
    let states: Vec<Vec<f64>> = (0..8).map(|_| (0..28).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    let masks: Vec<MaskVector> = (0..8).map(|b| MaskVector::from_slots(&[b, b + 11, 150, 199])).collect();
    let x = batch_matrix(&states);
    let old_logits = old.forward_batch(&x)?;
    let old_probs = (0..8)
        .map(|b| masked_softmax(old_logits.row(b).as_slice().expect("row"), &masks[b]))
        .collect::<chefs_hat::Result<_>>()?;
    let loss = KlPenalizedSurrogate {
        actions: (0..8).map(|b| masks[b].allowed().nth(b % 4).expect("slot").0).collect(),
        masks,
        old_probs,
        advantages: (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        beta: 0.5,
    };
    let report = backward(&net, x.clone(), &loss)?;
    let probes: Vec<usize> = (0..200).map(|_| rng.gen_range(0..net.param_count())).collect();
    let err = max_relative_error(&net, &report.grads, &probes, 1e-5, |m| {
        loss.evaluate(&m.forward_batch(&x).expect("forward")).expect("loss").0
    });
    println!("loss {:.6}, worst relative error over {} probes: {err:.2e}", report.loss, probes.len());
    Ok(())
}
