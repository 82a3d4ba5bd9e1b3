//! Per-class summary (totals, symbols, entropy, density) of a synthetic
//! log, written as CSV to stdout.

use procwisard::dataset::synth::presets;
use procwisard::dataset::{class_stats, generate_synthetic, normalized_entropy, write_stats};
use procwisard::encoding::{EncoderKind, RetinaGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = presets::class_a_like(1);
    spec.classes.extend(presets::saturating(1).classes);
    spec.unit_count = spec.unit_count.max(12);
    let log = generate_synthetic(&spec)?;

    let geometry = RetinaGeometry::infer(log.traces(), EncoderKind::OneHot)?;
    let stats = log
        .classes()
        .into_iter()
        .map(|(label, traces)| class_stats(label, &traces, &geometry))
        .collect::<Result<Vec<_>, _>>()?;
    write_stats(&stats, std::io::stdout(), b',')?;

    for s in &stats {
        let top: Vec<u64> = s.frequencies.iter().take(6).copied().collect();
        println!("class {} top symbol frequencies {top:?}", s.label);
    }

    // Normalized entropy is entropy / log2(symbols): 3.51056 bits over 95 symbols.
    println!("normalized_entropy(3.51056, 95) = {:.5}", normalized_entropy(3.51056, 95));
    Ok(())
}
