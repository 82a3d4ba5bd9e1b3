//! The 1-nearest-neighbor Hamming baseline next to a WiSARD on the same
//! balanced sample.

use procwisard::bench::{baseline_classify, f1_score, sample_balanced};
use procwisard::dataset::generate_synthetic;
use procwisard::dataset::synth::presets;
use procwisard::encoding::{EncoderKind, RetinaGeometry, Tag};
use procwisard::rng::SplitMix64;
use procwisard::wnn::{WisardModel, WnnConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let log = generate_synthetic(&presets::class_a_like(3))?;
    let geometry = RetinaGeometry::infer(log.traces(), EncoderKind::OneHot)?;
    let (sp, np) = log.pools("A")?;
    let encode = |ts: Vec<_>| -> Result<Vec<_>, _> { ts.into_iter().map(|t| geometry.encode(t)).collect() };
    let (sp, np) = (encode(sp)?, encode(np)?);

    let mut rng = SplitMix64::new(5);
    let split = sample_balanced(&sp, &np, 16, &mut rng)?;
    let mut model = WisardModel::new(WnnConfig::new(4).seed(1), geometry.retina_len())?;
    for (r, tag) in &split.train {
        model.train(r, tag.as_str())?;
    }

    let actual: Vec<Tag> = split.eval.iter().map(|(_, t)| *t).collect();
    let mut knn = Vec::new();
    let mut wisard = Vec::new();
    for (r, _) in &split.eval {
        knn.push(baseline_classify(&split.train, r)?);
        wisard.push(model.classify(r)?.label.parse()?);
    }
    println!("train {} / eval {}", split.train.len(), split.eval.len());
    println!("1-NN   F1(SP) = {:.4}", f1_score(&knn, &actual, Tag::Sp)?);
    println!("WiSARD F1(SP) = {:.4}", f1_score(&wisard, &actual, Tag::Sp)?);
    Ok(())
}
