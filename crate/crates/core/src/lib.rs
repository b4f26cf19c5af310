pub mod classify;
pub mod cli;
pub mod design;
pub mod dimred;
pub mod error;
pub mod hyperopt;
pub mod imageio;
pub mod matrix;
pub mod metrics;
pub mod pipeline;
pub mod preprocess;
pub mod stats;
pub mod synth;
pub mod texture;

pub use error::{Error, Result};
pub use matrix::FeatureMatrix;
