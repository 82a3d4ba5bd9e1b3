//! Train a two-class WiSARD on hand-written retinas and classify probes.

use procwisard::wnn::{Retina, WisardModel, WnnConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = WnnConfig::new(3).seed(42);
    let mut model = WisardModel::new(config, 12)?;

    let horizontal = ["111100000000", "000011110000", "000000001111"];
    let vertical = ["100010001000", "010001000100", "001000100010"];
    for r in horizontal {
        model.train(&r.parse()?, "horizontal")?;
    }
    for r in vertical {
        model.train(&r.parse()?, "vertical")?;
    }
    println!(
        "{} tuples of {} bits, mapping {:?}",
        model.mapping().tuple_count(),
        model.config().bits_per_tuple,
        model.mapping().order()
    );

    for probe in ["111100000000", "011110000000", "100010001001", "000000000000"] {
        let retina: Retina = probe.parse()?;
        let r = model.classify(&retina)?;
        println!(
            "{probe} -> {:<10} score {} bleach {} ambiguous {} {:?}",
            r.label, r.score, r.final_bleach, r.ambiguous, r.per_class_scores
        );
    }
    Ok(())
}
