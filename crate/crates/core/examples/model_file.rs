//! Train on an event log, save the model with its retina geometry, load it
//! back and classify unseen traces.

use procwisard::dataset::synth::presets;
use procwisard::dataset::generate_synthetic;
use procwisard::encoding::{EncoderKind, ProcessTrace, RetinaGeometry};
use procwisard::wnn::{WisardModel, WnnConfig};
use procwisard::ModelFile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let log = generate_synthetic(&presets::separable(0, 10))?;
    let geometry = RetinaGeometry::infer(log.traces(), EncoderKind::OneHot)?;
    let mut model = WisardModel::new(WnnConfig::new(4).ignore_zero(true).seed(99), geometry.retina_len())?;
    for t in log.class("S")? {
        model.train(&geometry.encode(t)?, t.tag.unwrap().as_str())?;
    }

    let path = std::env::temp_dir().join("procwisard-example-model.json");
    let file = ModelFile { model, geometry: Some(geometry) };
    file.save(&path)?;
    let bytes = std::fs::read(&path)?;
    println!("saved {} ({} bytes)", path.display(), bytes.len());
    println!("{}", String::from_utf8_lossy(&bytes[..bytes.len().min(240)]));

    let loaded = ModelFile::load(&path)?;
    assert_eq!(loaded.to_bytes(), bytes);
    let g = loaded.geometry.as_ref().unwrap();
    for steps in [["OU000", "OU001", "OU002", "OU003"], ["OU004", "OU005", "OU006", "OU007"], ["OU000", "OU005", "OU002", "OU007"]] {
        let r = loaded.model.classify(&g.encode(&ProcessTrace::new("new", steps))?)?;
        println!("{steps:?} -> {} {:?}", r.label, r.per_class_scores);
    }
    std::fs::remove_file(&path)?;
    Ok(())
}
