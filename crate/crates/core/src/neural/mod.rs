//! Dense networks in 64-bit floats: forward and reverse passes, the losses the
//! agents train on, an adaptive-moment optimizer and a versioned weight file.

mod adam;
mod gradcheck;
mod loss;
mod model;
mod network;
mod weights;

pub use adam::{adam_step, OptimizerState};
pub use gradcheck::max_relative_error;
pub use loss::{
    masked_softmax, GradientReport, KlPenalizedSurrogate, Loss, PolicyGradient, QRegression, ValueRegression,
};
pub use model::{backward, ActorCritic};
pub use network::{batch_matrix, Activation, Dense, ForwardCache, Mlp, Parameters};
pub use weights::{load_weights, save_weights, NetworkBlob, WeightFile, WEIGHT_FORMAT_VERSION};
