mod support;

use std::collections::HashMap;

use proptest::prelude::*;

use procwisard::dataset::{class_stats, shannon_entropy};
use procwisard::encoding::{EncoderKind, ProcessTrace, RetinaGeometry, UnitCatalog};
use procwisard::wnn::{self, Retina, TupleAddresses, TupleMapping, WnnConfig};
use procwisard::{deserialize_model, serialize_model};

use support::{arb_case, Case};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() }
}

fn dense_bits(case: &Case) -> Vec<u64> {
    let m = TupleMapping::build(case.len, &case.config()).unwrap();
    m.extract_addresses(&case.probe()).unwrap()
}

/// Retina in which every tuple has at least one lit input.
fn all_nonzero(case: &Case) -> Retina {
    let m = TupleMapping::build(case.len, &case.config()).unwrap();
    let n = case.bits as usize;
    let mut r = case.probe();
    for tuple in m.order().chunks(n) {
        if let Some(&i) = tuple.iter().find(|&&i| (i as usize) < case.len) {
            r.set(i as usize);
        }
    }
    r
}

fn catalog(units: usize) -> UnitCatalog {
    UnitCatalog::from_units((0..units).map(|u| format!("u{u:02}")).collect()).unwrap()
}

fn arb_steps(units: usize, max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..units, 1..=max_len)
}

fn trace(id: usize, steps: &[usize]) -> ProcessTrace {
    ProcessTrace::new(id.to_string(), steps.iter().map(|s| format!("u{s:02}")))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn sparse_and_dense_scores_agree(case in arb_case()) {
        let model = case.model();
        let dense = dense_bits(&case);
        let sparse = TupleAddresses::from_dense(&dense);
        prop_assert_eq!(&sparse, &model.addresses(&case.probe()).unwrap());
        prop_assert_eq!(sparse.to_dense(), dense.clone());
        for d in model.discriminators().values() {
            for b in 0..=d.max_counter() + 1 {
                prop_assert_eq!(d.score_sparse(&sparse, b, case.ignore_zero), wnn::score(d, &dense, b, case.ignore_zero));
            }
        }
    }

    #[test]
    fn same_seed_same_model(case in arb_case()) {
        let (a, b) = (case.model(), case.model());
        prop_assert_eq!(serialize_model(&a), serialize_model(&b));
        prop_assert_eq!(a.classify(&case.probe()).ok(), b.classify(&case.probe()).ok());
    }

    #[test]
    fn model_file_round_trip(case in arb_case()) {
        let model = case.model();
        let bytes = serialize_model(&model);
        let back = deserialize_model(&bytes).unwrap();
        prop_assert_eq!(serialize_model(&back), bytes);
        prop_assert_eq!(back.classify(&case.probe()).ok(), model.classify(&case.probe()).ok());
    }

    #[test]
    fn ignore_zero_is_inert_without_zero_addresses(case in arb_case()) {
        let probe = all_nonzero(&case);
        let mut on = case.clone();
        on.ignore_zero = true;
        let mut off = case.clone();
        off.ignore_zero = false;
        prop_assert_eq!(on.model().classify(&probe).ok(), off.model().classify(&probe).ok());
    }

    #[test]
    fn bleaching_is_inert_when_b0_winner_is_unique(case in arb_case()) {
        let mut on = case.clone();
        on.bleaching = true;
        let mut off = case.clone();
        off.bleaching = false;
        if let (Ok(a), Ok(b)) = (on.model().classify(&case.probe()), off.model().classify(&case.probe())) {
            if !b.ambiguous {
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn one_hot_round_trip(units in 1usize..20, max_len in 1usize..30, seqs in prop::collection::vec(arb_steps(19, 29), 1..6)) {
        let seqs: Vec<Vec<usize>> = seqs
            .into_iter()
            .map(|s| s.into_iter().map(|u| u % units).take(max_len).collect())
            .collect();
        let g = RetinaGeometry::new(catalog(units), max_len, EncoderKind::OneHot);
        let retinas: Vec<Retina> = seqs.iter().enumerate().map(|(i, s)| g.encode(&trace(i, s)).unwrap()).collect();
        for (i, (s, r)) in seqs.iter().zip(&retinas).enumerate() {
            prop_assert_eq!(r.len(), units * max_len);
            prop_assert_eq!(r.count_ones(), s.len());
            let m = g.matrix(&trace(i, s)).unwrap();
            for col in 0..max_len {
                let lit = (0..units).filter(|&u| m.get(u, col)).count();
                prop_assert_eq!(lit, usize::from(col < s.len()));
            }
            prop_assert_eq!(g.decode_one_hot(r), trace(i, s).steps);
            for (s2, r2) in seqs.iter().zip(&retinas) {
                prop_assert_eq!(s == s2, r == r2);
            }
        }
    }

    #[test]
    fn entropy_invariances(freqs in prop::collection::vec(1u64..1000, 1..40), scale in 1u64..50, rot in 0usize..40) {
        let h = shannon_entropy(&freqs).unwrap();
        let mut permuted = freqs.clone();
        permuted.rotate_left(rot % freqs.len());
        permuted.reverse();
        let scaled: Vec<u64> = freqs.iter().map(|f| f * scale).collect();
        prop_assert!((shannon_entropy(&permuted).unwrap() - h).abs() < 1e-9);
        prop_assert!((shannon_entropy(&scaled).unwrap() - h).abs() < 1e-9);
        let k = freqs.len() as f64;
        prop_assert!(h >= 0.0 && h <= k.log2() + 1e-9);
        if freqs.iter().all(|&f| f == freqs[0]) {
            prop_assert!((h - k.log2()).abs() < 1e-9);
        }
    }

    #[test]
    fn symbol_count_matches_pairwise_oracle(seqs in prop::collection::vec(arb_steps(4, 4), 1..60)) {
        let traces: Vec<ProcessTrace> = seqs.iter().enumerate().map(|(i, s)| trace(i, s)).collect();
        let refs: Vec<&ProcessTrace> = traces.iter().collect();
        let g = RetinaGeometry::infer(refs.iter().copied(), EncoderKind::OneHot).unwrap();
        let s = class_stats("A", &refs, &g).unwrap();
        // first occurrence of each distinct sequence, by pairwise comparison
        let mut freq: HashMap<usize, u64> = HashMap::new();
        for i in 0..seqs.len() {
            let first = (0..=i).find(|&j| seqs[j] == seqs[i]).unwrap();
            *freq.entry(first).or_insert(0) += 1;
        }
        let mut want: Vec<u64> = freq.into_values().collect();
        want.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(s.symbols, want.len());
        prop_assert_eq!(&s.frequencies, &want);
        prop_assert!(s.norm_entropy >= 0.0 && s.norm_entropy <= 1.0 + 1e-12);
        prop_assert!(s.density > 0.0 && s.density <= 1.0);
    }
}

#[test]
fn counter_config_rejects_wide_tuples() {
    assert!(WnnConfig::new(25).validate().is_err());
    assert!(WnnConfig::new(0).validate().is_err());
}
