//! Parameters, hierarchical-softmax steps and training configuration.

mod complexity;
mod params;
mod step;

use serde::{Deserialize, Serialize};

pub use complexity::{complexity_estimate, Complexity, ComplexityParams, ModelKind, OutputLayer};
pub use params::{init_params, AtomicF32, ModelParams, SharedMatrix};
pub use step::{
    log_sigmoid, log_word_probability, sigmoid, word_probability, SigmoidMode, StepOptions, Stepper,
};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Architecture {
    Cbow,
    SkipGram,
}

impl Architecture {
    /// Default maximum window: four history and four future words for
    /// CBOW, five for Skip-gram.
    pub fn default_window(self) -> usize {
        match self {
            Architecture::Cbow => 4,
            Architecture::SkipGram => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub architecture: Architecture,
    pub dim: usize,
    /// Maximum window radius `C`.
    pub window: usize,
    pub epochs: usize,
    /// Initial learning rate.
    pub alpha: f32,
    pub min_count: u64,
    pub workers: usize,
    pub seed: u64,
    /// The learning rate never drops below `alpha * lr_floor_ratio`.
    pub lr_floor_ratio: f32,
    /// Use the full window `C` at every position instead of sampling `R`.
    pub static_window: bool,
    pub step: StepOptions,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            architecture: Architecture::SkipGram,
            dim: 300,
            window: 5,
            epochs: 1,
            alpha: 0.025,
            min_count: 5,
            workers: 1,
            seed: 1,
            lr_floor_ratio: 1e-4,
            static_window: false,
            step: StepOptions::default(),
        }
    }
}

impl TrainingConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.dim == 0 {
            return fail("dim must be positive");
        }
        if self.window == 0 {
            return fail("window must be positive");
        }
        if self.epochs == 0 {
            return fail("epochs must be positive");
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return fail("alpha must be a positive number");
        }
        if self.min_count == 0 {
            return fail("min_count must be positive");
        }
        if self.workers == 0 {
            return fail("workers must be positive");
        }
        if !(self.lr_floor_ratio > 0.0 && self.lr_floor_ratio < 1.0) {
            return fail("lr_floor_ratio must be in (0, 1)");
        }
        Ok(())
    }
}
