use std::collections::HashMap;
use std::io::Write;

use super::DatasetError;
use crate::encoding::{ProcessTrace, RetinaGeometry};
use crate::wnn::Retina;

/// Shannon entropy in bits of a frequency multiset.
pub fn shannon_entropy(frequencies: &[u64]) -> Result<f64, DatasetError> {
    if frequencies.is_empty() {
        return Err(DatasetError::Input("entropy of an empty distribution".into()));
    }
    if frequencies.contains(&0) {
        return Err(DatasetError::Input("frequencies must be positive".into()));
    }
    let total: f64 = frequencies.iter().map(|&f| f as f64).sum();
    let h = frequencies
        .iter()
        .map(|&f| {
            let p = f as f64 / total;
            -p * p.log2()
        })
        .sum::<f64>();
    // -0.0 for a single symbol
    Ok(h.max(0.0))
}

/// Entropy divided by `log2(symbols)`; 0 for a single symbol.
pub fn normalized_entropy(entropy: f64, symbols: usize) -> f64 {
    if symbols <= 1 {
        0.0
    } else {
        entropy / (symbols as f64).log2()
    }
}

/// Per-class dataset summary. A symbol is a distinct retina.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub label: String,
    pub total: usize,
    pub symbols: usize,
    pub entropy: f64,
    pub norm_entropy: f64,
    /// Most lit pixels in any retina of the class.
    pub max_px: usize,
    /// `max_px / retina_len`.
    pub density: f64,
    pub mean_px: f64,
    /// `mean_px / retina_len`.
    pub mean_density: f64,
    /// Symbol frequencies, descending.
    pub frequencies: Vec<u64>,
}

pub fn class_stats(
    label: &str,
    traces: &[&ProcessTrace],
    geometry: &RetinaGeometry,
) -> Result<ClassStats, crate::Error> {
    if traces.is_empty() {
        return Err(DatasetError::Input(format!("class {label:?} is empty")).into());
    }
    let mut counts: HashMap<Retina, u64> = HashMap::new();
    let mut max_px = 0;
    let mut sum_px = 0usize;
    for t in traces {
        let r = geometry.encode(t)?;
        let px = r.count_ones();
        max_px = max_px.max(px);
        sum_px += px;
        *counts.entry(r).or_insert(0) += 1;
    }
    let mut frequencies: Vec<u64> = counts.into_values().collect();
    frequencies.sort_unstable_by(|a, b| b.cmp(a));
    let entropy = shannon_entropy(&frequencies)?;
    let len = geometry.retina_len() as f64;
    let mean_px = sum_px as f64 / traces.len() as f64;
    Ok(ClassStats {
        label: label.to_owned(),
        total: traces.len(),
        symbols: frequencies.len(),
        entropy,
        norm_entropy: normalized_entropy(entropy, frequencies.len()),
        max_px,
        density: max_px as f64 / len,
        mean_px,
        mean_density: mean_px / len,
        frequencies,
    })
}

/// Summary rows under the per-class table.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsFooter {
    pub total_traces: usize,
    pub total_symbols: usize,
    pub min: [f64; 8],
    pub avg: [f64; 8],
    pub max: [f64; 8],
}

fn numeric_row(s: &ClassStats) -> [f64; 8] {
    [
        s.total as f64,
        s.symbols as f64,
        s.entropy,
        s.norm_entropy,
        s.max_px as f64,
        s.density,
        s.mean_px,
        s.mean_density,
    ]
}

pub fn summarize(stats: &[ClassStats]) -> Option<StatsFooter> {
    if stats.is_empty() {
        return None;
    }
    let rows: Vec<[f64; 8]> = stats.iter().map(numeric_row).collect();
    let mut min = [f64::INFINITY; 8];
    let mut max = [f64::NEG_INFINITY; 8];
    let mut avg = [0.0; 8];
    for row in &rows {
        for i in 0..8 {
            min[i] = min[i].min(row[i]);
            max[i] = max[i].max(row[i]);
            avg[i] += row[i] / rows.len() as f64;
        }
    }
    Some(StatsFooter {
        total_traces: stats.iter().map(|s| s.total).sum(),
        total_symbols: stats.iter().map(|s| s.symbols).sum(),
        min,
        avg,
        max,
    })
}

pub const STATS_HEADER: [&str; 10] = [
    "row",
    "class",
    "total",
    "symbols",
    "entropy",
    "norm_entropy",
    "max_px",
    "density_max",
    "mean_px",
    "density_mean",
];

/// Writes one `class` record per class, then `total`, `min`, `avg` and
/// `max` footer records.
pub fn write_stats<W: Write>(stats: &[ClassStats], writer: W, delimiter: u8) -> Result<(), DatasetError> {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(writer);
    w.write_record(STATS_HEADER)?;
    for s in stats {
        let mut rec = vec!["class".to_owned(), s.label.clone()];
        rec.extend([s.total.to_string(), s.symbols.to_string()]);
        rec.extend([s.entropy, s.norm_entropy].map(|v| v.to_string()));
        rec.push(s.max_px.to_string());
        rec.extend([s.density, s.mean_px, s.mean_density].map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    if let Some(f) = summarize(stats) {
        let mut total = vec!["total".to_owned(), String::new()];
        total.extend([f.total_traces.to_string(), f.total_symbols.to_string()]);
        total.extend(std::iter::repeat_n(String::new(), 6));
        w.write_record(&total)?;
        for (name, row) in [("min", f.min), ("avg", f.avg), ("max", f.max)] {
            let mut rec = vec![name.to_owned(), String::new()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::EncoderKind;

    #[test]
    fn entropy_basics() {
        assert_eq!(shannon_entropy(&[1, 1, 1, 1]).unwrap(), 2.0);
        assert_eq!(shannon_entropy(&[42]).unwrap(), 0.0);
        assert!(shannon_entropy(&[]).is_err());
        assert!(shannon_entropy(&[3, 0]).is_err());
    }

    #[test]
    fn class_a_sp_frequencies_match_oracle() {
        // High-precision value of -sum p log2 p for {567, 35, 45, 52}, computed
        // independently with 40-digit arithmetic.
        let h = shannon_entropy(&[567, 35, 45, 52]).unwrap();
        assert!((h - 0.994_862_017_745_265_1).abs() < 1e-9, "{h}");
    }

    #[test]
    fn normalized_entropy_single_symbol_is_zero() {
        assert_eq!(normalized_entropy(0.0, 1), 0.0);
        assert!((normalized_entropy(3.51056, 95) - 0.53434).abs() < 1e-4);
    }

    #[test]
    fn stats_of_repeated_trace() {
        let t = ProcessTrace::new("1", ["a", "b"]);
        let traces = [&t, &t, &t];
        let g = RetinaGeometry::infer(traces.iter().copied(), EncoderKind::OneHot).unwrap();
        let s = class_stats("A", &traces, &g).unwrap();
        assert_eq!((s.total, s.symbols, s.max_px), (3, 1, 2));
        assert_eq!((s.entropy, s.norm_entropy), (0.0, 0.0));
        assert_eq!(s.density, 0.5);
        assert_eq!(s.frequencies, vec![3]);
    }

    #[test]
    fn empty_class_rejected() {
        let g = RetinaGeometry::infer([&ProcessTrace::new("1", ["a"])], EncoderKind::OneHot).unwrap();
        assert!(class_stats("A", &[], &g).is_err());
    }

    #[test]
    fn footer_rows() {
        let mk = |label: &str, total, symbols| ClassStats {
            label: label.into(),
            total,
            symbols,
            entropy: 1.0,
            norm_entropy: 0.5,
            max_px: 3,
            density: 0.1,
            mean_px: 2.0,
            mean_density: 0.05,
            frequencies: vec![],
        };
        let f = summarize(&[mk("A", 10, 2), mk("B", 30, 6)]).unwrap();
        assert_eq!((f.total_traces, f.total_symbols), (40, 8));
        assert_eq!((f.min[0], f.avg[0], f.max[0]), (10.0, 20.0, 30.0));
        let mut out = Vec::new();
        write_stats(&[mk("A", 10, 2)], &mut out, b',').unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert!(text.starts_with("row,class,total,symbols,entropy"));
    }
}
