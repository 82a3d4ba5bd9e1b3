//! Process traces to retinas.
//!
//! A trace visiting organizational units is drawn on a `U x S` process
//! matrix (one row per unit in catalog order, one column per sequence
//! position) and flattened row-major into a retina of `U * S` bits: cell
//! `(u, s)` lands at offset `u * S + s`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wnn::Retina;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("no traces given")]
    NoTraces,
    #[error("trace {case_id} has no steps")]
    EmptyTrace { case_id: String },
    #[error("trace {case_id}: unit {unit:?} is not in the catalog")]
    UnknownUnit { case_id: String, unit: String },
    #[error("trace {case_id} has {len} steps, more than the {max} sequence positions")]
    TooLong { case_id: String, len: usize, max: usize },
    #[error("invalid catalog: {0}")]
    Catalog(String),
}

/// Conformance tag: standard (conform) or non-conform process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "SP")]
    Sp,
    #[serde(rename = "NP")]
    Np,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Sp => "SP",
            Tag::Np => "NP",
        }
    }

    pub fn other(self) -> Tag {
        match self {
            Tag::Sp => Tag::Np,
            Tag::Np => Tag::Sp,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "SP" | "sp" => Ok(Tag::Sp),
            "NP" | "np" => Ok(Tag::Np),
            other => Err(format!("unknown tag {other:?}, expected SP or NP")),
        }
    }
}

/// One case: the ordered organizational units it visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessTrace {
    pub case_id: String,
    pub label: Option<String>,
    pub tag: Option<Tag>,
    pub steps: Vec<String>,
}

impl ProcessTrace {
    pub fn new<S: Into<String>>(case_id: impl Into<String>, steps: impl IntoIterator<Item = S>) -> Self {
        Self {
            case_id: case_id.into(),
            label: None,
            tag: None,
            steps: steps.into_iter().map(Into::into).collect(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_tag(mut self, tag: Tag) -> Self {
        self.tag = Some(tag);
        self
    }
}

/// Sorted distinct unit identifiers; row `i` of every process matrix is
/// `units[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct UnitCatalog {
    units: Vec<String>,
    index: HashMap<String, usize>,
}

impl UnitCatalog {
    pub fn from_units(units: Vec<String>) -> Result<Self, EncodingError> {
        if units.is_empty() {
            return Err(EncodingError::Catalog("catalog is empty".into()));
        }
        let mut index = HashMap::with_capacity(units.len());
        for (i, u) in units.iter().enumerate() {
            if index.insert(u.clone(), i).is_some() {
                return Err(EncodingError::Catalog(format!("duplicate unit {u:?}")));
            }
        }
        Ok(Self { units, index })
    }

    pub fn units(&self) -> &[String] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn row_of(&self, unit: &str) -> Option<usize> {
        self.index.get(unit).copied()
    }
}

impl TryFrom<Vec<String>> for UnitCatalog {
    type Error = EncodingError;

    fn try_from(units: Vec<String>) -> Result<Self, Self::Error> {
        Self::from_units(units)
    }
}

impl From<UnitCatalog> for Vec<String> {
    fn from(c: UnitCatalog) -> Self {
        c.units
    }
}

pub fn build_catalog<'a, I>(traces: I) -> Result<UnitCatalog, EncodingError>
where
    I: IntoIterator<Item = &'a ProcessTrace>,
{
    let mut seen = false;
    let mut units = BTreeSet::new();
    for t in traces {
        seen = true;
        units.extend(t.steps.iter().cloned());
    }
    if !seen {
        return Err(EncodingError::NoTraces);
    }
    UnitCatalog::from_units(units.into_iter().collect())
}

/// Longest trace length in the collection.
pub fn infer_max_seq<'a, I>(traces: I) -> Result<usize, EncodingError>
where
    I: IntoIterator<Item = &'a ProcessTrace>,
{
    traces
        .into_iter()
        .map(|t| t.steps.len())
        .max()
        .ok_or(EncodingError::NoTraces)
}

/// Rule deciding which process-matrix cells a trace lights.
pub trait CellEncoder {
    /// `rows[s]` is the catalog row visited at position `s`; returns lit
    /// `(row, column)` cells. Callers guarantee `rows.len() <= max_seq`.
    fn cells(&self, rows: &[usize], unit_count: usize, max_seq: usize) -> Vec<(usize, usize)>;
}

/// Cell `(u, s)` lit iff the trace was at unit `u` at position `s`.
#[derive(Debug, Clone, Copy, Default)]
pub struct OneHotEncoder;

impl CellEncoder for OneHotEncoder {
    fn cells(&self, rows: &[usize], _unit_count: usize, _max_seq: usize) -> Vec<(usize, usize)> {
        rows.iter().enumerate().map(|(s, &u)| (u, s)).collect()
    }
}

/// Cell `(u, s)` lit iff unit `u` was visited at least `s + 1` times;
/// columns act as visit-count levels.
#[derive(Debug, Clone, Copy, Default)]
pub struct VisitThermometerEncoder;

impl CellEncoder for VisitThermometerEncoder {
    fn cells(&self, rows: &[usize], unit_count: usize, _max_seq: usize) -> Vec<(usize, usize)> {
        let mut visits = vec![0usize; unit_count];
        for &u in rows {
            visits[u] += 1;
        }
        visits
            .iter()
            .enumerate()
            .flat_map(|(u, &n)| (0..n).map(move |s| (u, s)))
            .collect()
    }
}

/// Built-in encoders, selectable by name (`one-hot`, `visit-thermometer`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncoderKind {
    #[default]
    OneHot,
    VisitThermometer,
}

impl EncoderKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EncoderKind::OneHot => "one-hot",
            EncoderKind::VisitThermometer => "visit-thermometer",
        }
    }

    fn encoder(self) -> &'static dyn CellEncoder {
        match self {
            EncoderKind::OneHot => &OneHotEncoder,
            EncoderKind::VisitThermometer => &VisitThermometerEncoder,
        }
    }
}

impl fmt::Display for EncoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EncoderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one-hot" => Ok(EncoderKind::OneHot),
            "visit-thermometer" => Ok(EncoderKind::VisitThermometer),
            other => Err(format!("unknown encoder {other:?}")),
        }
    }
}

/// Binary `U x S` image of a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessMatrix {
    rows: usize,
    cols: usize,
    bits: Retina,
}

impl ProcessMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, unit: usize, position: usize) -> bool {
        assert!(unit < self.rows && position < self.cols, "cell out of range");
        self.bits.get(unit * self.cols + position)
    }

    pub fn lit_count(&self) -> usize {
        self.bits.count_ones()
    }

    /// Row-major flattening.
    pub fn into_retina(self) -> Retina {
        self.bits
    }
}

/// Catalog, sequence length and encoder: everything needed to turn traces
/// into retinas of a fixed length. Persisted with trained models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetinaGeometry {
    pub units: UnitCatalog,
    pub max_seq: usize,
    #[serde(default)]
    pub encoder: EncoderKind,
}

impl RetinaGeometry {
    pub fn new(units: UnitCatalog, max_seq: usize, encoder: EncoderKind) -> Self {
        Self { units, max_seq, encoder }
    }

    /// Catalog and sequence length inferred from the traces.
    pub fn infer<'a, I>(traces: I, encoder: EncoderKind) -> Result<Self, EncodingError>
    where
        I: IntoIterator<Item = &'a ProcessTrace> + Clone,
    {
        Ok(Self::new(build_catalog(traces.clone())?, infer_max_seq(traces)?, encoder))
    }

    pub fn retina_len(&self) -> usize {
        self.units.len() * self.max_seq
    }

    fn rows(&self, trace: &ProcessTrace) -> Result<Vec<usize>, EncodingError> {
        if trace.steps.is_empty() {
            return Err(EncodingError::EmptyTrace { case_id: trace.case_id.clone() });
        }
        if trace.steps.len() > self.max_seq {
            return Err(EncodingError::TooLong {
                case_id: trace.case_id.clone(),
                len: trace.steps.len(),
                max: self.max_seq,
            });
        }
        trace
            .steps
            .iter()
            .map(|u| {
                self.units.row_of(u).ok_or_else(|| EncodingError::UnknownUnit {
                    case_id: trace.case_id.clone(),
                    unit: u.clone(),
                })
            })
            .collect()
    }

    /// Row-major offsets of the lit cells, ascending.
    pub fn lit_offsets(&self, trace: &ProcessTrace) -> Result<Vec<usize>, EncodingError> {
        let rows = self.rows(trace)?;
        let mut offsets: Vec<usize> = self
            .encoder
            .encoder()
            .cells(&rows, self.units.len(), self.max_seq)
            .into_iter()
            .map(|(u, s)| u * self.max_seq + s)
            .collect();
        offsets.sort_unstable();
        offsets.dedup();
        Ok(offsets)
    }

    pub fn matrix(&self, trace: &ProcessTrace) -> Result<ProcessMatrix, EncodingError> {
        let offsets = self.lit_offsets(trace)?;
        Ok(ProcessMatrix {
            rows: self.units.len(),
            cols: self.max_seq,
            bits: Retina::from_ones(self.retina_len(), offsets),
        })
    }

    pub fn encode(&self, trace: &ProcessTrace) -> Result<Retina, EncodingError> {
        Ok(self.matrix(trace)?.into_retina())
    }

    /// Inverse of one-hot encoding: unit sequence read column by column.
    pub fn decode_one_hot(&self, retina: &Retina) -> Vec<String> {
        let mut cells: Vec<(usize, usize)> = retina
            .ones()
            .map(|o| (o % self.max_seq, o / self.max_seq))
            .collect();
        cells.sort_unstable();
        cells.into_iter().map(|(_, u)| self.units.units()[u].clone()).collect()
    }
}

/// One-hot encoding of a trace against a catalog and sequence length.
pub fn encode_trace(
    trace: &ProcessTrace,
    catalog: &UnitCatalog,
    max_seq: usize,
) -> Result<Retina, EncodingError> {
    RetinaGeometry::new(catalog.clone(), max_seq, EncoderKind::OneHot).encode(trace)
}
