//! Minimal dense-network engine: matrices, forward/backward passes, SGD,
//! Polyak averaging and finite-difference gradient checks.
//!
//! Hidden layers use ReLU (subgradient 0 at the kink). The output layer is
//! either the identity or a row-wise softmax.

mod check;
mod matrix;
mod network;

pub use check::{
    gradient_check, gradient_check_with, max_relative_error, randomize_biases, relative_error, ConstantLoss,
    LinearLoss, MseLoss, OutputLoss,
};
pub use matrix::Matrix;
pub use network::{ForwardCache, GradientSet, MlpNetwork, OutputActivation};
