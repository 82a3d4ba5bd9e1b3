//! Learning-curve experiments.
//!
//! For each classifier configuration and each even training size, a class's
//! SP and NP pools are sampled in equal halves, a fresh model is trained on
//! the sample, and every remaining trace of the class is classified. The F1
//! score (SP positive by default) is averaged over repetitions.

mod baseline;
mod curve;
mod metrics;
mod sampling;

pub use baseline::baseline_classify;
pub use curve::{
    best_config, run_learning_curve, write_curve, write_curve_verbose, BestConfig, Contender,
    ExperimentGrid, LearningCurvePoint, WnnVariant, CURVE_HEADER, VERBOSE_HEADER,
};
pub use metrics::{f1_score, Confusion};
pub use sampling::{sample_balanced, BalancedSplit};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BenchError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("invalid experiment configuration: {0}")]
    Config(String),
}
