//! Build a synthetic spec, print its JSON (the input of `procwisard
//! generate`) and the event log it produces.

use procwisard::dataset::{generate_synthetic, write_event_log, LogFormat, NoiseModel, SynthClass, SynthSpec, Template};
use procwisard::encoding::Tag;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = SynthSpec {
        seed: 2024,
        unit_count: 6,
        noise: NoiseModel::new(0.1, 0.1, 0.1),
        classes: vec![SynthClass {
            label: "purchase".into(),
            templates: vec![
                Template::new(vec![0, 1, 2, 3], 4, Tag::Sp),
                Template::new(vec![0, 2, 1, 3], 2, Tag::Sp).with_noise(NoiseModel::NONE),
                Template::new(vec![0, 4, 5], 2, Tag::Np),
            ],
        }],
    };
    println!("{}", spec.to_json());

    let log = generate_synthetic(&spec)?;
    for t in log.traces() {
        println!("{} {:?} {}", t.case_id, t.tag.unwrap(), t.steps.join(" > "));
    }
    println!();
    write_event_log(&log, std::io::stdout(), &LogFormat::default())?;
    Ok(())
}
