//! Model file format.
//!
//! A model is stored as one compact JSON document:
//!
//! ```text
//! {
//!   "format": "procwisard-model",
//!   "version": 1,
//!   "config": {"bits_per_tuple": 8, "bleaching_enabled": true,
//!              "ignore_zero_enabled": false, "mapping_seed": 42},
//!   "retina_len": 13494,
//!   "order": [...],                  // only for mappings not derived from the seed
//!   "geometry": {"units": [...], "max_seq": 78, "encoder": "one-hot"},   // optional
//!   "classes": {
//!     "NP": {"trained": 12, "counters": [[tuple, address, count], ...]},
//!     "SP": {...}
//!   }
//! }
//! ```
//!
//! Counter triples list every nonzero counter in ascending `(tuple, address)`
//! order; missing entries are 0. Seeded mappings are re-derived on load.
//! Class labels are sorted, so equal models serialize to equal bytes.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::encoding::RetinaGeometry;
use crate::wnn::{Discriminator, TupleMapping, WisardModel, WnnConfig, WnnError};

pub const FORMAT_NAME: &str = "procwisard-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    format: String,
    version: u32,
    config: WnnConfig,
    retina_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<RetinaGeometry>,
    classes: BTreeMap<String, ClassTable>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassTable {
    trained: u64,
    counters: Vec<(u32, u64, u64)>,
}

/// A trained model plus, optionally, the geometry that turns traces into
/// its retinas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelFile {
    pub model: WisardModel,
    pub geometry: Option<RetinaGeometry>,
}

impl ModelFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let model = &self.model;
        let doc = Document {
            format: FORMAT_NAME.to_owned(),
            version: FORMAT_VERSION,
            config: *model.config(),
            retina_len: model.retina_len(),
            order: (!model.mapping().is_seeded()).then(|| model.mapping().order().to_vec()),
            geometry: self.geometry.clone(),
            classes: model
                .discriminators()
                .iter()
                .map(|(label, d)| {
                    let table = ClassTable {
                        trained: model.trained_counts().get(label).copied().unwrap_or(0),
                        counters: d.entries(),
                    };
                    (label.clone(), table)
                })
                .collect(),
        };
        serde_json::to_vec(&doc).expect("model document serializes")
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WnnError> {
        let doc: Document =
            serde_json::from_slice(bytes).map_err(|e| WnnError::Format(e.to_string()))?;
        if doc.format != FORMAT_NAME {
            return Err(WnnError::Format(format!("not a model file (format {:?})", doc.format)));
        }
        if doc.version != FORMAT_VERSION {
            return Err(WnnError::Format(format!(
                "unsupported format version {} (expected {FORMAT_VERSION})",
                doc.version
            )));
        }
        if let Some(g) = &doc.geometry {
            if g.retina_len() != doc.retina_len {
                return Err(WnnError::Format(format!(
                    "geometry describes {} bits but retina_len is {}",
                    g.retina_len(),
                    doc.retina_len
                )));
            }
        }
        let mapping = match doc.order {
            Some(order) => TupleMapping::with_order(doc.retina_len, doc.config.bits_per_tuple, order)?,
            None => TupleMapping::build(doc.retina_len, &doc.config)?,
        };
        let tuples = mapping.tuple_count();
        let mut model = WisardModel::with_mapping(doc.config, mapping)?;
        for (label, table) in doc.classes {
            let disc = Discriminator::from_entries(tuples, doc.config.bits_per_tuple, &table.counters)?;
            model.insert_discriminator(label, disc, table.trained);
        }
        Ok(Self { model, geometry: doc.geometry })
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_bytes())
    }

    pub fn load(path: &Path) -> Result<Self, crate::Error> {
        let bytes = std::fs::read(path).map_err(|e| crate::Error::io(path, e))?;
        Ok(Self::from_bytes(&bytes)?)
    }
}

pub fn serialize_model(model: &WisardModel) -> Vec<u8> {
    ModelFile { model: model.clone(), geometry: None }.to_bytes()
}

pub fn deserialize_model(bytes: &[u8]) -> Result<WisardModel, WnnError> {
    ModelFile::from_bytes(bytes).map(|f| f.model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wnn::Retina;

    fn trained() -> WisardModel {
        let mut m = WisardModel::new(WnnConfig::new(3).seed(17), 30).unwrap();
        m.train(&Retina::from_ones(30, [0, 5, 12]), "SP").unwrap();
        m.train(&Retina::from_ones(30, [0, 5, 12]), "SP").unwrap();
        m.train(&Retina::from_ones(30, [3, 29]), "NP").unwrap();
        m
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let m = trained();
        let bytes = serialize_model(&m);
        let back = deserialize_model(&bytes).unwrap();
        assert_eq!(back, m);
        assert_eq!(serialize_model(&back), bytes);
    }

    #[test]
    fn empty_model_round_trips() {
        let m = WisardModel::new(WnnConfig::new(2), 5).unwrap();
        let back = deserialize_model(&serialize_model(&m)).unwrap();
        assert_eq!(back, m);
        assert!(back.discriminators().is_empty());
    }

    #[test]
    fn custom_mapping_is_stored() {
        let mut m = WisardModel::with_mapping(WnnConfig::new(2), TupleMapping::identity(8, 2).unwrap()).unwrap();
        m.train(&"11000000".parse().unwrap(), "A").unwrap();
        let back = deserialize_model(&serialize_model(&m)).unwrap();
        assert_eq!(back.mapping().order(), m.mapping().order());
        assert_eq!(back, m);
    }

    #[test]
    fn truncated_bytes_fail() {
        let bytes = serialize_model(&trained());
        for cut in [0, 1, bytes.len() / 2, bytes.len() - 1] {
            assert!(matches!(deserialize_model(&bytes[..cut]), Err(WnnError::Format(_))));
        }
    }

    #[test]
    fn version_mismatch_fails() {
        let text = String::from_utf8(serialize_model(&trained())).unwrap();
        let bumped = text.replace("\"version\":1", "\"version\":2");
        assert!(matches!(deserialize_model(bumped.as_bytes()), Err(WnnError::Format(_))));
    }

    #[test]
    fn out_of_range_counters_fail() {
        let text = String::from_utf8(serialize_model(&trained())).unwrap();
        let bad = text.replacen("\"counters\":[[", "\"counters\":[[99999,1,1],[", 1);
        assert!(deserialize_model(bad.as_bytes()).is_err());
    }
}
