//! Event logs: ingestion, per-class statistics and synthetic generation.

mod log;
mod stats;
pub mod synth;

pub use log::{load_event_log, read_event_log, write_event_log, LogFormat};
pub use stats::{class_stats, normalized_entropy, shannon_entropy, summarize, write_stats, ClassStats, StatsFooter};
pub use synth::{generate_synthetic, NoiseModel, SynthClass, SynthSpec, Template};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::encoding::{ProcessTrace, Tag};

/// Group name for traces without a class column value.
pub const UNLABELED: &str = "unlabeled";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error("missing required column {0:?}")]
    MissingColumn(&'static str),
    #[error("case {case_id}: {message}")]
    Case { case_id: String, message: String },
    #[error("malformed event log: {0}")]
    Csv(#[from] csv::Error),
    #[error("class {0:?} not found in log")]
    UnknownClass(String),
    #[error("class {class:?}: {message}")]
    Tags { class: String, message: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid synthetic spec: {0}")]
    Spec(String),
}

/// A set of traces, each belonging to one class and optionally tagged SP/NP.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventLog {
    traces: Vec<ProcessTrace>,
}

impl EventLog {
    pub fn new(traces: Vec<ProcessTrace>) -> Self {
        Self { traces }
    }

    pub fn traces(&self) -> &[ProcessTrace] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Traces grouped by class label, labels ascending.
    pub fn classes(&self) -> BTreeMap<&str, Vec<&ProcessTrace>> {
        let mut map: BTreeMap<&str, Vec<&ProcessTrace>> = BTreeMap::new();
        for t in &self.traces {
            map.entry(t.label.as_deref().unwrap_or(UNLABELED)).or_default().push(t);
        }
        map
    }

    pub fn class(&self, label: &str) -> Result<Vec<&ProcessTrace>, DatasetError> {
        let members: Vec<_> = self
            .traces
            .iter()
            .filter(|t| t.label.as_deref().unwrap_or(UNLABELED) == label)
            .collect();
        if members.is_empty() {
            return Err(DatasetError::UnknownClass(label.to_owned()));
        }
        Ok(members)
    }

    /// SP and NP pools of a class, in log order. Every trace of the class
    /// must carry a tag.
    pub fn pools(&self, label: &str) -> Result<(Vec<&ProcessTrace>, Vec<&ProcessTrace>), DatasetError> {
        let mut sp = Vec::new();
        let mut np = Vec::new();
        for t in self.class(label)? {
            match t.tag {
                Some(Tag::Sp) => sp.push(t),
                Some(Tag::Np) => np.push(t),
                None => {
                    return Err(DatasetError::Tags {
                        class: label.to_owned(),
                        message: format!("trace {} has no SP/NP tag", t.case_id),
                    })
                }
            }
        }
        Ok((sp, np))
    }
}

impl FromIterator<ProcessTrace> for EventLog {
    fn from_iter<I: IntoIterator<Item = ProcessTrace>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}
