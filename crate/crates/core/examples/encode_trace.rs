//! Process matrix of a trace: units as rows, sequence positions as columns.

use procwisard::encoding::{EncoderKind, ProcessTrace, RetinaGeometry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let traces = [
        ProcessTrace::new("p1", ["registry", "dean", "registry", "archive"]),
        ProcessTrace::new("p2", ["registry", "hr", "dean", "hr", "archive"]),
    ];
    for encoder in [EncoderKind::OneHot, EncoderKind::VisitThermometer] {
        let g = RetinaGeometry::infer(&traces, encoder)?;
        println!("{encoder}: {} units x {} positions = {} bits", g.units.len(), g.max_seq, g.retina_len());
        for t in &traces {
            let m = g.matrix(t)?;
            println!("  {} ({} lit)", t.case_id, m.lit_count());
            for (u, unit) in g.units.units().iter().enumerate() {
                let row: String = (0..m.cols()).map(|s| if m.get(u, s) { '#' } else { '.' }).collect();
                println!("    {unit:>8} {row}");
            }
        }
    }

    let g = RetinaGeometry::infer(&traces, EncoderKind::OneHot)?;
    let retina = g.encode(&traces[1])?;
    println!("retina {retina}");
    println!("decoded {:?}", g.decode_one_hot(&retina));

    let unknown = ProcessTrace::new("p3", ["registry", "rectorate"]);
    println!("p3: {}", g.encode(&unknown).unwrap_err());
    Ok(())
}
