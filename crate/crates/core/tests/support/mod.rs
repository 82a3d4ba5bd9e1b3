#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use procwisard::wnn::{Retina, WisardModel, WnnConfig};

/// Random model recipe: geometry, flags, a training sequence and a probe.
#[derive(Debug, Clone)]
pub struct Case {
    pub len: usize,
    pub bits: u32,
    pub seed: u64,
    pub bleaching: bool,
    pub ignore_zero: bool,
    pub train: Vec<(Vec<bool>, usize)>,
    pub probe: Vec<bool>,
}

pub const LABELS: [&str; 3] = ["A", "B", "C"];

fn bits_vec(len: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::sample::select(vec![0.05f64, 0.3, 0.7])
        .prop_flat_map(move |p| prop::collection::vec(prop::bool::weighted(p), len))
}

pub fn arb_case_with(max_len: usize, bit_range: std::ops::RangeInclusive<u32>) -> impl Strategy<Value = Case> {
    (1..=max_len, bit_range, any::<u64>(), any::<bool>(), any::<bool>(), 0usize..12).prop_flat_map(
        |(len, bits, seed, bleaching, ignore_zero, n_train)| {
            (
                prop::collection::vec((bits_vec(len), 0usize..LABELS.len()), n_train),
                bits_vec(len),
            )
                .prop_map(move |(train, probe)| Case {
                    len,
                    bits,
                    seed,
                    bleaching,
                    ignore_zero,
                    train,
                    probe,
                })
        },
    )
}

pub fn arb_case() -> impl Strategy<Value = Case> {
    arb_case_with(200, 1..=12)
}

impl Case {
    pub fn config(&self) -> WnnConfig {
        WnnConfig::new(self.bits)
            .bleaching(self.bleaching)
            .ignore_zero(self.ignore_zero)
            .seed(self.seed)
    }

    pub fn model(&self) -> WisardModel {
        let mut m = WisardModel::new(self.config(), self.len).unwrap();
        for (bits, label) in &self.train {
            m.train(&Retina::from_bits(bits), LABELS[*label]).unwrap();
        }
        m
    }

    pub fn probe(&self) -> Retina {
        Retina::from_bits(&self.probe)
    }
}

/// Brute-force WiSARD: reads every tuple address bit by bit from the
/// mapping order and keeps its own `(class, tuple, address) -> count` table.
pub struct OracleWisard {
    pub bits: usize,
    pub order: Vec<usize>,
    pub len: usize,
    pub bleaching: bool,
    pub ignore_zero: bool,
    pub counters: HashMap<(String, usize, u64), u64>,
    pub labels: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub label: String,
    pub score: usize,
    pub bleach: u64,
    pub ambiguous: bool,
    pub scores: Vec<(String, usize)>,
}

impl OracleWisard {
    pub fn new(bits: usize, order: Vec<usize>, len: usize, bleaching: bool, ignore_zero: bool) -> Self {
        Self {
            bits,
            order,
            len,
            bleaching,
            ignore_zero,
            counters: HashMap::new(),
            labels: BTreeSet::new(),
        }
    }

    pub fn tuples(&self) -> usize {
        self.order.len() / self.bits
    }

    pub fn address(&self, input: &[bool], k: usize) -> u64 {
        let mut a = 0u64;
        for j in 0..self.bits {
            let idx = self.order[k * self.bits + j];
            let bit = idx < self.len && input[idx];
            a = a * 2 + bit as u64;
        }
        a
    }

    pub fn train(&mut self, input: &[bool], label: &str) {
        self.labels.insert(label.to_owned());
        for k in 0..self.tuples() {
            let a = self.address(input, k);
            if self.ignore_zero && a == 0 {
                continue;
            }
            *self.counters.entry((label.to_owned(), k, a)).or_insert(0) += 1;
        }
    }

    pub fn score(&self, input: &[bool], label: &str, bleach: u64) -> usize {
        (0..self.tuples())
            .filter(|&k| {
                let a = self.address(input, k);
                if self.ignore_zero && a == 0 {
                    return false;
                }
                self.counters.get(&(label.to_owned(), k, a)).copied().unwrap_or(0) > bleach
            })
            .count()
    }

    pub fn classify(&self, input: &[bool]) -> Option<OracleResult> {
        if self.labels.is_empty() {
            return None;
        }
        let pick = |bleach: u64, scores: &Vec<(String, usize)>, ambiguous: bool| {
            let max = scores.iter().map(|s| s.1).max().unwrap();
            let label = scores.iter().find(|s| s.1 == max).unwrap().0.clone();
            OracleResult { label, score: max, bleach, ambiguous, scores: scores.clone() }
        };
        let mut last: Option<(u64, Vec<(String, usize)>)> = None;
        let mut bleach = 0;
        loop {
            let scores: Vec<(String, usize)> = self
                .labels
                .iter()
                .map(|l| (l.clone(), self.score(input, l, bleach)))
                .collect();
            let max = scores.iter().map(|s| s.1).max().unwrap();
            let winners = scores.iter().filter(|s| s.1 == max).count();
            if winners == 1 {
                return Some(pick(bleach, &scores, false));
            }
            if max == 0 {
                return Some(match &last {
                    Some((b, s)) => pick(*b, s, true),
                    None => pick(bleach, &scores, true),
                });
            }
            if !self.bleaching {
                return Some(pick(bleach, &scores, true));
            }
            last = Some((bleach, scores));
            bleach += 1;
        }
    }
}
