//! Weightless neural network (WiSARD) toolkit for classifying
//! business-process flows.
//!
//! - [`wnn`]: tuple mapping, counter-RAM discriminators, bleaching classifier.
//! - [`encoding`]: process traces to unit-by-position process matrices and retinas.
//! - [`dataset`]: event-log ingestion, per-class statistics, synthetic logs.
//! - [`bench`]: learning-curve experiments and a Hamming nearest-neighbor baseline.
//! - [`cli`]: the `procwisard` subcommands.

pub mod bench;
pub mod cli;
pub mod dataset;
pub mod encoding;
pub mod model_file;
pub mod rng;
pub mod wnn;

use std::path::{Path, PathBuf};

pub use model_file::{deserialize_model, serialize_model, ModelFile};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Wnn(#[from] wnn::WnnError),
    #[error(transparent)]
    Encoding(#[from] encoding::EncodingError),
    #[error(transparent)]
    Dataset(#[from] dataset::DatasetError),
    #[error(transparent)]
    Bench(#[from] bench::BenchError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_owned(), source }
    }
}
