use std::collections::BTreeMap;

use super::{Discriminator, Retina, TupleAddresses, TupleMapping, WnnConfig, WnnError};

/// Outcome of classifying one retina.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationResult {
    pub label: String,
    /// Responding RAMs of the winning discriminator at `final_bleach`.
    pub score: usize,
    pub final_bleach: u64,
    /// Set when the top score stayed tied; the lexicographically smallest
    /// tied label is returned.
    pub ambiguous: bool,
    pub per_class_scores: BTreeMap<String, usize>,
}

/// Winner by discriminator index (label order), used on hot paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Decision {
    pub index: usize,
    pub score: usize,
    pub bleach: u64,
    pub ambiguous: bool,
    pub scores: Vec<usize>,
}

/// A WiSARD classifier: one discriminator per class label, all sharing a
/// single tuple mapping and configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WisardModel {
    config: WnnConfig,
    mapping: TupleMapping,
    discriminators: BTreeMap<String, Discriminator>,
    trained_counts: BTreeMap<String, u64>,
}

impl WisardModel {
    /// Empty model for retinas of `retina_len` bits, mapping derived from
    /// the configuration seed.
    pub fn new(config: WnnConfig, retina_len: usize) -> Result<Self, WnnError> {
        let mapping = TupleMapping::build(retina_len, &config)?;
        Ok(Self::from_parts(config, mapping))
    }

    /// Empty model over an explicit mapping.
    pub fn with_mapping(config: WnnConfig, mapping: TupleMapping) -> Result<Self, WnnError> {
        config.validate()?;
        if mapping.bits_per_tuple() != config.bits_per_tuple {
            return Err(WnnError::Config(format!(
                "mapping uses {}-bit tuples but the configuration asks for {}",
                mapping.bits_per_tuple(),
                config.bits_per_tuple
            )));
        }
        Ok(Self::from_parts(config, mapping))
    }

    fn from_parts(config: WnnConfig, mapping: TupleMapping) -> Self {
        Self {
            config,
            mapping,
            discriminators: BTreeMap::new(),
            trained_counts: BTreeMap::new(),
        }
    }

    pub fn config(&self) -> &WnnConfig {
        &self.config
    }

    pub fn mapping(&self) -> &TupleMapping {
        &self.mapping
    }

    pub fn retina_len(&self) -> usize {
        self.mapping.retina_len()
    }

    /// Class labels in ascending order.
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.discriminators.keys().map(String::as_str)
    }

    pub fn discriminator(&self, label: &str) -> Option<&Discriminator> {
        self.discriminators.get(label)
    }

    pub fn discriminators(&self) -> &BTreeMap<String, Discriminator> {
        &self.discriminators
    }

    pub fn trained_counts(&self) -> &BTreeMap<String, u64> {
        &self.trained_counts
    }

    pub fn addresses(&self, retina: &Retina) -> Result<TupleAddresses, WnnError> {
        self.mapping.tuple_addresses(retina)
    }

    pub fn train(&mut self, retina: &Retina, label: &str) -> Result<(), WnnError> {
        let addresses = self.addresses(retina)?;
        self.train_addresses(&addresses, label)
    }

    /// Trains on addresses already extracted with this model's mapping.
    pub fn train_addresses(&mut self, addresses: &TupleAddresses, label: &str) -> Result<(), WnnError> {
        if addresses.tuple_count() != self.mapping.tuple_count() {
            return Err(WnnError::LengthMismatch {
                expected: self.mapping.tuple_count(),
                actual: addresses.tuple_count(),
            });
        }
        let tuples = self.mapping.tuple_count();
        let disc = self
            .discriminators
            .entry(label.to_owned())
            .or_insert_with(|| Discriminator::new(tuples));
        disc.train(addresses, self.config.ignore_zero_enabled)?;
        let count = self.trained_counts.entry(label.to_owned()).or_insert(0);
        *count = count.checked_add(1).ok_or(WnnError::CounterOverflow { tuple: 0 })?;
        Ok(())
    }

    pub fn classify(&self, retina: &Retina) -> Result<ClassificationResult, WnnError> {
        let addresses = self.addresses(retina)?;
        self.classify_addresses(&addresses)
    }

    pub fn classify_addresses(&self, addresses: &TupleAddresses) -> Result<ClassificationResult, WnnError> {
        let d = self.decide(addresses)?;
        let labels: Vec<&String> = self.discriminators.keys().collect();
        Ok(ClassificationResult {
            label: labels[d.index].clone(),
            score: d.score,
            final_bleach: d.bleach,
            ambiguous: d.ambiguous,
            per_class_scores: labels
                .into_iter()
                .cloned()
                .zip(d.scores.iter().copied())
                .collect(),
        })
    }

    /// Bleaching decision loop. `b` starts at 0 and rises by one while the
    /// top score is tied and nonzero.
    pub(crate) fn decide(&self, addresses: &TupleAddresses) -> Result<Decision, WnnError> {
        if self.discriminators.is_empty() {
            return Err(WnnError::Untrained);
        }
        if addresses.tuple_count() != self.mapping.tuple_count() {
            return Err(WnnError::LengthMismatch {
                expected: self.mapping.tuple_count(),
                actual: addresses.tuple_count(),
            });
        }
        let discs: Vec<&Discriminator> = self.discriminators.values().collect();
        let ignore_zero = self.config.ignore_zero_enabled;
        let mut bleach = 0u64;
        let mut scores = vec![0usize; discs.len()];
        let mut last_tie: Option<(u64, Vec<usize>)> = None;
        loop {
            for (s, d) in scores.iter_mut().zip(&discs) {
                *s = d.score_sparse(addresses, bleach, ignore_zero);
            }
            let max = *scores.iter().max().expect("at least one discriminator");
            let first = scores.iter().position(|&s| s == max).expect("max is present");
            if scores.iter().filter(|&&s| s == max).count() == 1 {
                return Ok(Decision { index: first, score: max, bleach, ambiguous: false, scores });
            }
            if max == 0 {
                return Ok(match last_tie {
                    Some((b, prev)) => tie_decision(b, prev),
                    None => tie_decision(bleach, scores),
                });
            }
            if !self.config.bleaching_enabled {
                return Ok(tie_decision(bleach, scores));
            }
            last_tie = Some((bleach, scores.clone()));
            bleach += 1;
        }
    }

    pub(crate) fn insert_discriminator(&mut self, label: String, disc: Discriminator, trained: u64) {
        self.discriminators.insert(label.clone(), disc);
        self.trained_counts.insert(label, trained);
    }
}

fn tie_decision(bleach: u64, scores: Vec<usize>) -> Decision {
    let max = *scores.iter().max().expect("non-empty");
    let index = scores.iter().position(|&s| s == max).expect("max is present");
    Decision { index, score: max, bleach, ambiguous: true, scores }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_model(len: usize, n: u32, bleaching: bool, ignore_zero: bool) -> WisardModel {
        let cfg = WnnConfig::new(n).bleaching(bleaching).ignore_zero(ignore_zero);
        WisardModel::with_mapping(cfg, TupleMapping::identity(len, n).unwrap()).unwrap()
    }

    fn r(s: &str) -> Retina {
        s.parse().unwrap()
    }

    #[test]
    fn single_example_full_response() {
        let mut m = WisardModel::new(WnnConfig::new(3).seed(11), 20).unwrap();
        let e = Retina::from_ones(20, [1, 4, 9, 17]);
        m.train(&e, "A").unwrap();
        let res = m.classify(&e).unwrap();
        assert_eq!(res.label, "A");
        assert_eq!(res.score, m.mapping().tuple_count());
        assert_eq!(res.final_bleach, 0);
        assert!(!res.ambiguous);
    }

    #[test]
    fn disjoint_patterns_separate() {
        let mut m = identity_model(8, 2, false, false);
        let a = r("11110000");
        let b = r("00001111");
        m.train(&a, "A").unwrap();
        m.train(&b, "B").unwrap();
        // A's RAMs hold [3,3,0,0]; B's hold [0,0,3,3].
        let ra = m.classify(&a).unwrap();
        assert_eq!((ra.label.as_str(), ra.per_class_scores["A"], ra.per_class_scores["B"]), ("A", 4, 0));
        let rb = m.classify(&b).unwrap();
        assert_eq!((rb.label.as_str(), rb.per_class_scores["A"], rb.per_class_scores["B"]), ("B", 0, 4));
    }

    #[test]
    fn bleaching_breaks_saturation_tie() {
        let mut m = identity_model(8, 2, true, false);
        let p = r("10011100");
        m.train(&p, "A").unwrap();
        m.train(&p, "A").unwrap();
        m.train(&p, "B").unwrap();
        let res = m.classify(&p).unwrap();
        assert_eq!(res.label, "A");
        assert_eq!(res.score, 4);
        assert_eq!(res.final_bleach, 1);
        assert!(!res.ambiguous);
        assert_eq!(res.per_class_scores["B"], 0);
    }

    #[test]
    fn unresolved_tie_is_flagged_and_deterministic() {
        let mut m = identity_model(8, 2, true, false);
        let p = r("10011100");
        m.train(&p, "B").unwrap();
        m.train(&p, "A").unwrap();
        let res = m.classify(&p).unwrap();
        assert_eq!(res.label, "A");
        assert!(res.ambiguous);
        // b = 0 was the last level with a nonzero maximum.
        assert_eq!(res.final_bleach, 0);
        assert_eq!(res.score, 4);
    }

    #[test]
    fn tie_without_bleaching_stays_at_zero() {
        let mut m = identity_model(8, 2, false, false);
        let p = r("10011100");
        for _ in 0..2 {
            m.train(&p, "A").unwrap();
        }
        m.train(&p, "B").unwrap();
        let res = m.classify(&p).unwrap();
        assert_eq!((res.label.as_str(), res.final_bleach, res.ambiguous), ("A", 0, true));
    }

    #[test]
    fn ignore_zero_training_and_scoring() {
        let mut m = identity_model(8, 2, false, true);
        m.train(&r("11000000"), "A").unwrap();
        let d = m.discriminator("A").unwrap();
        assert_eq!(d.counter(0, 3), 1);
        assert_eq!((1..4).map(|k| d.counter(k, 0)).sum::<u64>(), 0);
        let res = m.classify(&r("11000000")).unwrap();
        assert_eq!(res.score, 1);
    }

    #[test]
    fn untrained_model_is_a_state_error() {
        let m = identity_model(8, 2, true, false);
        assert_eq!(m.classify(&r("10000000")), Err(WnnError::Untrained));
    }

    #[test]
    fn wrong_length_rejected() {
        let mut m = identity_model(8, 2, true, false);
        assert!(matches!(
            m.train(&r("101"), "A"),
            Err(WnnError::LengthMismatch { expected: 8, actual: 3 })
        ));
        assert!(m.discriminators().is_empty());
    }

    #[test]
    fn train_touches_only_its_class() {
        let mut m = identity_model(8, 2, true, false);
        m.train(&r("10000000"), "A").unwrap();
        let before = m.discriminator("A").unwrap().clone();
        m.train(&r("01000000"), "B").unwrap();
        assert_eq!(m.discriminator("A").unwrap(), &before);
        assert_eq!(m.trained_counts()["A"], 1);
        assert_eq!(m.trained_counts()["B"], 1);
    }

    #[test]
    fn model_is_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<WisardModel>();
    }
}
