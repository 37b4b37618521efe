use ndarray::Array2;
use rand::Rng;

use super::loss::{GradientReport, Loss};
use super::network::{Activation, Mlp, Parameters};
use crate::error::{Error, Result};

/// Reverse-mode gradient of `loss` for `net` on the input batch `x`.
pub fn backward(net: &Mlp, x: Array2<f64>, loss: &dyn Loss) -> Result<GradientReport> {
    if x.nrows() == 0 {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    let cache = net.forward_cached(x)?;
    let (value, d_out) = loss.evaluate(cache.output())?;
    let (grads, _) = net.backward(&cache, &d_out);
    Ok(GradientReport { grads, loss: value })
}

/// Shared trunk feeding a policy-logit head and a state-value head.
#[derive(Clone, Debug, PartialEq)]
pub struct ActorCritic {
    pub trunk: Mlp,
    pub actor: Mlp,
    pub critic: Mlp,
}

impl ActorCritic {
    pub fn new<R: Rng + ?Sized>(input: usize, hidden: &[usize], actions: usize, rng: &mut R) -> Result<Self> {
        if hidden.is_empty() {
            return Err(Error::Config("actor-critic trunk needs a hidden layer".into()));
        }
        let mut dims = vec![input];
        dims.extend_from_slice(hidden);
        let width = *hidden.last().expect("non-empty");
        let trunk = Mlp::new(&dims, Activation::Relu, Activation::Relu, 1.0, rng)?;
        let actor = Mlp::new(&[width, actions], Activation::Linear, Activation::Linear, 0.01, rng)?;
        let critic = Mlp::new(&[width, 1], Activation::Linear, Activation::Linear, 1.0, rng)?;
        Self::from_parts(trunk, actor, critic)
    }

    pub fn from_parts(trunk: Mlp, actor: Mlp, critic: Mlp) -> Result<Self> {
        for head in [&actor, &critic] {
            if head.input_width() != trunk.output_width() {
                return Err(Error::Dimension { expected: trunk.output_width(), got: head.input_width() });
            }
        }
        Ok(Self { trunk, actor, critic })
    }

    /// Logits and state value for one input, in a single trunk pass.
    pub fn forward(&self, x: &[f64]) -> Result<(Vec<f64>, f64)> {
        let h = self.trunk.forward(x)?;
        Ok((self.actor.forward(&h)?, self.critic.forward(&h)?[0]))
    }

    pub fn forward_batch(&self, x: &Array2<f64>) -> Result<(Array2<f64>, Array2<f64>)> {
        let h = self.trunk.forward_batch(x)?;
        Ok((self.actor.forward_batch(&h)?, self.critic.forward_batch(&h)?))
    }

    /// Gradient of `actor_loss + critic_coef * critic_loss`, flattened trunk, actor,
    /// critic.
    pub fn backward(
        &self,
        x: Array2<f64>,
        actor_loss: &dyn Loss,
        critic_loss: &dyn Loss,
        critic_coef: f64,
    ) -> Result<GradientReport> {
        if x.nrows() == 0 {
            return Err(Error::InvalidArgument("empty batch".into()));
        }
        let trunk_cache = self.trunk.forward_cached(x)?;
        let h = trunk_cache.output().clone();
        let actor_cache = self.actor.forward_cached(h.clone())?;
        let critic_cache = self.critic.forward_cached(h)?;
        let (la, da) = actor_loss.evaluate(actor_cache.output())?;
        let (lc, mut dc) = critic_loss.evaluate(critic_cache.output())?;
        dc *= critic_coef;
        let (ga, dha) = self.actor.backward(&actor_cache, &da);
        let (gc, dhc) = self.critic.backward(&critic_cache, &dc);
        let (gt, _) = self.trunk.backward(&trunk_cache, &(dha + dhc));
        let mut grads = gt;
        grads.extend(ga);
        grads.extend(gc);
        Ok(GradientReport { grads, loss: la + critic_coef * lc })
    }
}

impl Parameters for ActorCritic {
    fn visit(&self, f: &mut dyn FnMut(&[f64])) {
        self.trunk.visit(f);
        self.actor.visit(f);
        self.critic.visit(f);
    }

    fn visit_mut(&mut self, f: &mut dyn FnMut(&mut [f64])) {
        self.trunk.visit_mut(f);
        self.actor.visit_mut(f);
        self.critic.visit_mut(f);
    }
}
