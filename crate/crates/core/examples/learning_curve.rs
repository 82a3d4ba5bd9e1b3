//! Learning curves for a low-entropy class: all 16 WiSARD configurations
//! plus the nearest-neighbor baseline, then the best configuration at F1 0.9.

use procwisard::bench::{best_config, run_learning_curve, write_curve, ExperimentGrid};
use procwisard::dataset::generate_synthetic;
use procwisard::dataset::synth::presets;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let log = generate_synthetic(&presets::class_a_like(1))?;
    let grid = ExperimentGrid {
        reps: 20,
        max_train_size: Some(30),
        include_baseline: true,
        ..Default::default()
    };
    let points = run_learning_curve(&log, "A", &grid)?;
    write_curve(&points, std::io::stdout(), b',')?;

    let wisard: Vec<_> = points.iter().filter(|p| p.contender.variant().is_some()).cloned().collect();
    let best = best_config(&wisard, 0.9)?;
    match best.train_size {
        Some(size) => {
            let ids: Vec<String> = best.contenders.iter().map(ToString::to_string).collect();
            println!("best: {} at train_size {size}", ids.join(" "));
        }
        None => println!("no configuration reached 0.9: {}", best.diagnostic.unwrap_or_default()),
    }
    Ok(())
}
