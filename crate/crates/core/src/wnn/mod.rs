//! WiSARD engine: tuple mapping, address extraction, counter RAM
//! discriminators and bleaching classification.
//!
//! A retina of `L` bits is padded with zeros to the next multiple of the
//! tuple width `n`, shuffled by a seeded permutation, and cut into `X`
//! tuples. Each tuple addresses one RAM of `2^n` counters per class.
//! Within a tuple the first mapped bit is the most significant address bit.

mod discriminator;
mod mapping;
mod model;
mod retina;

pub use discriminator::Discriminator;
pub use mapping::{TupleAddresses, TupleMapping};
pub use model::{ClassificationResult, WisardModel};
pub use retina::Retina;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported tuple width; a RAM has `2^n` logical entries.
pub const MAX_BITS_PER_TUPLE: u32 = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WnnError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("retina has {actual} bits but the mapping expects {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("model has no trained discriminators")]
    Untrained,
    #[error("counter overflow in tuple {tuple}")]
    CounterOverflow { tuple: usize },
    #[error("model format error: {0}")]
    Format(String),
}

/// Classifier configuration. The mapping seed fully determines the
/// tuple mapping for a given retina length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WnnConfig {
    pub bits_per_tuple: u32,
    pub bleaching_enabled: bool,
    pub ignore_zero_enabled: bool,
    pub mapping_seed: u64,
}

impl WnnConfig {
    pub fn new(bits_per_tuple: u32) -> Self {
        Self {
            bits_per_tuple,
            bleaching_enabled: true,
            ignore_zero_enabled: false,
            mapping_seed: 0,
        }
    }

    pub fn bleaching(mut self, on: bool) -> Self {
        self.bleaching_enabled = on;
        self
    }

    pub fn ignore_zero(mut self, on: bool) -> Self {
        self.ignore_zero_enabled = on;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.mapping_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), WnnError> {
        if !(1..=MAX_BITS_PER_TUPLE).contains(&self.bits_per_tuple) {
            return Err(WnnError::Config(format!(
                "bits_per_tuple must be in [1, {MAX_BITS_PER_TUPLE}], got {}",
                self.bits_per_tuple
            )));
        }
        Ok(())
    }
}

/// Scores a discriminator on a dense address list: the number of tuples
/// whose counter exceeds `bleach`, skipping zero addresses when
/// `ignore_zero` is set.
pub fn score(disc: &Discriminator, addresses: &[u64], bleach: u64, ignore_zero: bool) -> usize {
    addresses
        .iter()
        .enumerate()
        .filter(|&(_, &addr)| !(ignore_zero && addr == 0))
        .filter(|&(k, &addr)| disc.counter(k, addr) > bleach)
        .count()
}
