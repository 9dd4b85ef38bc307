//! The trainable sequence-labeling engine: per-feature embedding banks, a
//! bidirectional LSTM, a dense layer, and a softmax output, trained with
//! Adamax on categorical cross-entropy.
//!
//! The engine runs in two configurations: a character model (`Cw`) and a
//! word model (`Ce`). All math is generic over `f32`/`f64`; production
//! models train and serialize in `f32`, while the gradient-check oracle
//! instantiates `f64`.

mod adamax;
mod io;
mod lstm;
mod model;
mod params;
mod train;

pub use adamax::Adamax;
pub use io::{read_params, write_params};
pub use model::{DropoutMode, EncodedSeq, SequenceModel};
pub use params::{LstmParams, ParamSet};
pub use train::{evaluate_loss, train, EarlyStopping, EpochStats, TrainingHistory};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid model config: {0}")]
    InvalidConfig(String),
    #[error("empty dataset")]
    EmptyDataset,
}

/// Numeric element type for the engine.
pub trait Scalar:
    num_traits::Float
    + num_traits::NumAssign
    + ndarray::ScalarOperand
    + ndarray::LinalgScalar
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    fn from_f64(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("finite conversion")
    }

    fn into_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("finite conversion")
    }
}

impl<T> Scalar for T where
    T: num_traits::Float
        + num_traits::NumAssign
        + ndarray::ScalarOperand
        + ndarray::LinalgScalar
        + std::fmt::Debug
        + std::fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Which model a config describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelMode {
    /// Character-level core-word model.
    Cw,
    /// Word-level case-ending model.
    Ce,
}

impl ModelMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelMode::Cw => "cw",
            ModelMode::Ce => "ce",
        }
    }
}

/// Architecture hyperparameters. The constructors pin the published
/// defaults per mode; only the vocabulary sizes vary with the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub mode: ModelMode,
    /// One embedding bank per feature; each entry is that bank's
    /// vocabulary size.
    pub feature_vocab_sizes: Vec<usize>,
    pub embed_dim: usize,
    pub lstm_units: usize,
    pub dense_units: usize,
    pub input_dropout: f64,
    pub dense_dropout: f64,
    pub label_count: usize,
}

impl ModelConfig {
    pub fn cw(feature_vocab_sizes: Vec<usize>, label_count: usize) -> ModelConfig {
        ModelConfig {
            mode: ModelMode::Cw,
            feature_vocab_sizes,
            embed_dim: 50,
            lstm_units: 100,
            dense_units: 100,
            input_dropout: 0.0,
            dense_dropout: 0.0,
            label_count,
        }
    }

    pub fn ce(feature_vocab_sizes: Vec<usize>) -> ModelConfig {
        ModelConfig {
            mode: ModelMode::Ce,
            feature_vocab_sizes,
            embed_dim: 100,
            lstm_units: 100,
            dense_units: 100,
            input_dropout: 0.75,
            dense_dropout: 0.15,
            label_count: 15,
        }
    }

    pub fn feature_count(&self) -> usize {
        self.feature_vocab_sizes.len()
    }

    /// Width of the concatenated embedding vector fed to the biLSTM.
    pub fn input_dim(&self) -> usize {
        self.feature_count() * self.embed_dim
    }

    pub fn validate(&self) -> Result<(), NnError> {
        if self.feature_vocab_sizes.is_empty() {
            return Err(NnError::InvalidConfig("no feature banks".into()));
        }
        if self.feature_vocab_sizes.iter().any(|&v| v == 0) {
            return Err(NnError::InvalidConfig("empty feature vocabulary".into()));
        }
        if self.embed_dim == 0
            || self.lstm_units == 0
            || self.dense_units == 0
            || self.label_count == 0
        {
            return Err(NnError::InvalidConfig("zero dimension".into()));
        }
        for (name, p) in [
            ("input_dropout", self.input_dropout),
            ("dense_dropout", self.dense_dropout),
        ] {
            if !(0.0..1.0).contains(&p) {
                return Err(NnError::InvalidConfig(format!(
                    "{name} must lie in [0, 1), got {p}"
                )));
            }
        }
        if self.mode == ModelMode::Ce && self.label_count != 15 {
            return Err(NnError::InvalidConfig(format!(
                "case-ending models have 15 labels, got {}",
                self.label_count
            )));
        }
        Ok(())
    }
}

/// Optimization hyperparameters. Defaults follow the published recipe:
/// Adamax, learning rate 0.001, batch size 256, early-stopping patience 5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub patience: usize,
    pub max_epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.001,
            batch_size: 256,
            patience: 5,
            max_epochs: 100,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), NnError> {
        if self.batch_size == 0 || self.patience == 0 || self.max_epochs == 0 {
            return Err(NnError::InvalidConfig(
                "batch_size, patience, and max_epochs must be positive".into(),
            ));
        }
        if !(self.learning_rate > 0.0) {
            return Err(NnError::InvalidConfig("learning_rate must be positive".into()));
        }
        Ok(())
    }
}
