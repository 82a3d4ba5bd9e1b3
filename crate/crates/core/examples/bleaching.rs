//! Saturation and bleaching: after heavy training both discriminators
//! respond fully to a shared pattern; raising the threshold b separates
//! them by how often each saw it.

use procwisard::wnn::{Retina, WisardModel, WnnConfig};

fn model(bleaching: bool) -> WisardModel {
    let mut m = WisardModel::new(WnnConfig::new(2).bleaching(bleaching).seed(7), 8).unwrap();
    let shared: Retina = "11001100".parse().unwrap();
    for _ in 0..5 {
        m.train(&shared, "SP").unwrap();
    }
    for _ in 0..2 {
        m.train(&shared, "NP").unwrap();
    }
    m.train(&"00110011".parse().unwrap(), "NP").unwrap();
    m
}

fn main() {
    let probe: Retina = "11001100".parse().unwrap();
    for bleaching in [false, true] {
        let m = model(bleaching);
        let r = m.classify(&probe).unwrap();
        println!(
            "bleaching {bleaching:<5} -> {} (scores {:?}, b = {}, ambiguous = {})",
            r.label, r.per_class_scores, r.final_bleach, r.ambiguous
        );
    }

    let m = model(true);
    let addr = m.addresses(&probe).unwrap();
    for b in 0..6 {
        let scores: Vec<String> = m
            .discriminators()
            .iter()
            .map(|(l, d)| format!("{l}={}", d.score_sparse(&addr, b, false)))
            .collect();
        println!("b = {b}: {}", scores.join(" "));
    }
}
