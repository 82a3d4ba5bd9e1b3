use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use super::baseline::nearest_sparse;
use super::{sample_balanced, BenchError, Confusion};
use crate::dataset::{DatasetError, EventLog};
use crate::encoding::{EncoderKind, RetinaGeometry, Tag};
use crate::rng::{derive_seed, SplitMix64};
use crate::wnn::{TupleMapping, WisardModel, WnnConfig};

const SAMPLE_STREAM: u64 = 0x5A4D_504C;
const MAPPING_STREAM: u64 = 0x4D41_5050;

/// One WiSARD setting of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WnnVariant {
    pub bits_per_tuple: u32,
    pub bleaching: bool,
    pub ignore_zero: bool,
}

impl WnnVariant {
    pub fn config(&self, mapping_seed: u64) -> WnnConfig {
        WnnConfig::new(self.bits_per_tuple)
            .bleaching(self.bleaching)
            .ignore_zero(self.ignore_zero)
            .seed(mapping_seed)
    }
}

/// A curve's classifier: a WiSARD variant or the nearest-neighbor baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Contender {
    Wisard(WnnVariant),
    Baseline,
}

impl Contender {
    pub fn variant(&self) -> Option<WnnVariant> {
        match self {
            Contender::Wisard(v) => Some(*v),
            Contender::Baseline => None,
        }
    }
}

/// `n8-b1-z0` for 8-bit tuples, bleaching on, ignore-zero off;
/// `baseline-1nn` for the baseline.
impl fmt::Display for Contender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Contender::Wisard(v) => write!(
                f,
                "n{}-b{}-z{}",
                v.bits_per_tuple, v.bleaching as u8, v.ignore_zero as u8
            ),
            Contender::Baseline => f.write_str("baseline-1nn"),
        }
    }
}

/// Experiment grid and protocol switches.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub ram_sizes: Vec<u32>,
    pub bleaching: Vec<bool>,
    pub ignore_zero: Vec<bool>,
    pub reps: usize,
    /// Distance between consecutive training sizes; even.
    pub step: usize,
    /// Upper bound on training sizes in addition to `2 * min(|SP|, |NP|)`.
    pub max_train_size: Option<usize>,
    /// Explicit training sizes; overrides `step` and `max_train_size`.
    pub train_sizes: Option<Vec<usize>>,
    pub master_seed: u64,
    /// Use one mapping per tuple width instead of one per repetition.
    pub freeze_mapping: bool,
    pub positive: Tag,
    pub include_baseline: bool,
    pub parallel: bool,
    pub encoder: EncoderKind,
    pub keep_per_rep: bool,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        Self {
            ram_sizes: vec![2, 4, 8, 16],
            bleaching: vec![false, true],
            ignore_zero: vec![false, true],
            reps: 50,
            step: 2,
            max_train_size: None,
            train_sizes: None,
            master_seed: 0,
            freeze_mapping: false,
            positive: Tag::Sp,
            include_baseline: false,
            parallel: true,
            encoder: EncoderKind::OneHot,
            keep_per_rep: false,
        }
    }
}

impl ExperimentGrid {
    /// WiSARD variants in output order: tuple width, then bleaching, then
    /// ignore-zero.
    pub fn variants(&self) -> Vec<WnnVariant> {
        let mut out = Vec::new();
        for &bits_per_tuple in &self.ram_sizes {
            for &bleaching in &self.bleaching {
                for &ignore_zero in &self.ignore_zero {
                    out.push(WnnVariant { bits_per_tuple, bleaching, ignore_zero });
                }
            }
        }
        out
    }

    pub fn contenders(&self) -> Vec<Contender> {
        let mut out: Vec<Contender> = self.variants().into_iter().map(Contender::Wisard).collect();
        if self.include_baseline {
            out.push(Contender::Baseline);
        }
        out
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.ram_sizes.is_empty() || self.bleaching.is_empty() || self.ignore_zero.is_empty() {
            return Err(BenchError::Config("empty configuration axis".into()));
        }
        for &n in &self.ram_sizes {
            WnnConfig::new(n).validate().map_err(|e| BenchError::Config(e.to_string()))?;
        }
        if self.reps == 0 {
            return Err(BenchError::Config("reps must be at least 1".into()));
        }
        if self.step == 0 || !self.step.is_multiple_of(2) {
            return Err(BenchError::Config(format!("step {} must be a positive even number", self.step)));
        }
        if let Some(sizes) = &self.train_sizes {
            if let Some(bad) = sizes.iter().find(|&&s| s < 2 || s % 2 != 0) {
                return Err(BenchError::Config(format!("training size {bad} must be even and at least 2")));
            }
        }
        Ok(())
    }

    /// Training sizes for pools whose smaller side has `min_pool` traces.
    pub fn sizes_for(&self, min_pool: usize) -> Vec<usize> {
        let cap = 2 * min_pool;
        match &self.train_sizes {
            Some(sizes) => sizes.iter().copied().filter(|&s| s <= cap).collect(),
            None => {
                let cap = self.max_train_size.map_or(cap, |m| m.min(cap));
                (2..=cap).step_by(self.step).collect()
            }
        }
    }

    fn sample_seed(&self, size: usize, rep: usize) -> u64 {
        derive_seed(self.master_seed, &[SAMPLE_STREAM, size as u64, rep as u64])
    }

    /// Mapping seeds depend on the tuple width only, so variants differing
    /// in bleaching or ignore-zero share mappings and samples.
    fn mapping_seed(&self, bits: u32, size: usize, rep: usize) -> u64 {
        if self.freeze_mapping {
            derive_seed(self.master_seed, &[MAPPING_STREAM, bits as u64])
        } else {
            derive_seed(self.master_seed, &[MAPPING_STREAM, bits as u64, size as u64, rep as u64])
        }
    }
}

/// Aggregate over the repetitions of one (contender, size) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurvePoint {
    pub contender: Contender,
    pub train_size: usize,
    pub reps: usize,
    pub mean_f1: f64,
    /// Sample standard deviation; 0 for fewer than two repetitions.
    pub std_f1: f64,
    /// No traces were left for evaluation.
    pub degenerate: bool,
    /// Per-repetition F1, kept when the grid asks for it.
    pub per_rep: Vec<f64>,
}

impl LearningCurvePoint {
    pub fn config_id(&self) -> String {
        self.contender.to_string()
    }
}

/// Class traces encoded once and grouped into distinct retinas.
struct EncodedClass {
    symbols: Vec<Vec<usize>>,
    sp: Vec<usize>,
    np: Vec<usize>,
    retina_len: usize,
}

fn encode_class(log: &EventLog, class: &str, encoder: EncoderKind) -> Result<EncodedClass, crate::Error> {
    let (sp, np) = log.pools(class)?;
    if sp.is_empty() || np.is_empty() {
        return Err(DatasetError::Tags {
            class: class.to_owned(),
            message: format!("needs both SP and NP traces, found {} SP and {} NP", sp.len(), np.len()),
        }
        .into());
    }
    let geometry = RetinaGeometry::infer(log.traces(), encoder)?;
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut symbols = Vec::new();
    let mut intern = |offsets: Vec<usize>| -> usize {
        *ids.entry(offsets.clone()).or_insert_with(|| {
            symbols.push(offsets);
            symbols.len() - 1
        })
    };
    let mut sp_ids = Vec::with_capacity(sp.len());
    for t in sp {
        sp_ids.push(intern(geometry.lit_offsets(t)?));
    }
    let mut np_ids = Vec::with_capacity(np.len());
    for t in np {
        np_ids.push(intern(geometry.lit_offsets(t)?));
    }
    Ok(EncodedClass { symbols, sp: sp_ids, np: np_ids, retina_len: geometry.retina_len() })
}

/// F1 of one repetition, `None` when the evaluation set is empty.
fn run_rep(
    data: &EncodedClass,
    grid: &ExperimentGrid,
    contender: Contender,
    size: usize,
    rep: usize,
) -> Result<Option<f64>, crate::Error> {
    let mut rng = SplitMix64::new(grid.sample_seed(size, rep));
    let split = sample_balanced(&data.sp, &data.np, size, &mut rng)?;
    if split.is_degenerate() {
        return Ok(None);
    }
    // Evaluation multiplicity per (symbol, tag); identical retinas always
    // receive identical predictions.
    let mut weights: BTreeMap<usize, [u64; 2]> = BTreeMap::new();
    for &(sym, tag) in &split.eval {
        weights.entry(sym).or_default()[(tag == Tag::Np) as usize] += 1;
    }
    let mut predict: Box<dyn FnMut(usize) -> Result<Tag, crate::Error>> = match contender {
        Contender::Wisard(v) => {
            let config = v.config(grid.mapping_seed(v.bits_per_tuple, size, rep));
            let mapping = TupleMapping::build(data.retina_len, &config)?;
            let mut model = WisardModel::with_mapping(config, mapping)?;
            for &(sym, tag) in &split.train {
                let addrs = model.mapping().sparse_from_ones(data.symbols[sym].iter().copied());
                model.train_addresses(&addrs, tag.as_str())?;
            }
            // Labels sort as ["NP", "SP"].
            let labels: Vec<Tag> = model
                .labels()
                .map(|l| l.parse::<Tag>().expect("trained on tag labels"))
                .collect();
            Box::new(move |sym| {
                let addrs = model.mapping().sparse_from_ones(data.symbols[sym].iter().copied());
                Ok(labels[model.decide(&addrs)?.index])
            })
        }
        Contender::Baseline => {
            let train: Vec<(&[usize], Tag)> = split
                .train
                .iter()
                .map(|&(sym, tag)| (data.symbols[sym].as_slice(), tag))
                .collect();
            Box::new(move |sym| Ok(nearest_sparse(&train, &data.symbols[sym]).expect("non-empty train set")))
        }
    };
    let mut confusion = Confusion::default();
    for (sym, [n_sp, n_np]) in weights {
        let predicted = predict(sym)?;
        confusion.record(predicted, Tag::Sp, grid.positive, n_sp);
        confusion.record(predicted, Tag::Np, grid.positive, n_np);
    }
    Ok(Some(confusion.f1()))
}

fn aggregate(contender: Contender, train_size: usize, f1s: Vec<Option<f64>>, keep: bool) -> LearningCurvePoint {
    let values: Vec<f64> = f1s.into_iter().flatten().collect();
    let reps = values.len();
    let mean = if reps == 0 { 0.0 } else { values.iter().sum::<f64>() / reps as f64 };
    let std = if reps < 2 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt()
    };
    LearningCurvePoint {
        contender,
        train_size,
        reps,
        mean_f1: mean,
        std_f1: std,
        degenerate: reps == 0,
        per_rep: if keep { values } else { Vec::new() },
    }
}

/// Runs every (contender, training size, repetition) cell of the grid on
/// one class. Output order is contenders in grid order, sizes ascending.
/// The result depends only on the log and the grid, not on scheduling.
pub fn run_learning_curve(
    log: &EventLog,
    class: &str,
    grid: &ExperimentGrid,
) -> Result<Vec<LearningCurvePoint>, crate::Error> {
    grid.validate()?;
    let data = encode_class(log, class, grid.encoder)?;
    let sizes = grid.sizes_for(data.sp.len().min(data.np.len()));
    if sizes.is_empty() {
        return Err(BenchError::Config(format!(
            "pools of {} SP and {} NP are too small for any configured training size",
            data.sp.len(),
            data.np.len()
        ))
        .into());
    }
    let contenders = grid.contenders();
    let mut cells = Vec::with_capacity(contenders.len() * sizes.len() * grid.reps);
    for &c in &contenders {
        for &size in &sizes {
            for rep in 0..grid.reps {
                cells.push((c, size, rep));
            }
        }
    }
    let run = |&(c, size, rep): &(Contender, usize, usize)| run_rep(&data, grid, c, size, rep);
    let results: Vec<Option<f64>> = if grid.parallel {
        cells.par_iter().map(run).collect::<Result<_, _>>()?
    } else {
        cells.iter().map(run).collect::<Result<_, _>>()?
    };
    let mut points = Vec::with_capacity(contenders.len() * sizes.len());
    let mut chunks = results.chunks(grid.reps);
    for &c in &contenders {
        for &size in &sizes {
            let chunk = chunks.next().expect("one chunk per point");
            points.push(aggregate(c, size, chunk.to_vec(), grid.keep_per_rep));
        }
    }
    Ok(points)
}

/// Configurations that first reach `threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct BestConfig {
    /// All contenders tied at the smallest crossing size.
    pub contenders: Vec<Contender>,
    pub train_size: Option<usize>,
    pub diagnostic: Option<String>,
}

/// Finds the contender(s) whose smallest training size with
/// `mean_f1 >= threshold` is minimal. Degenerate points are ignored.
pub fn best_config(points: &[LearningCurvePoint], threshold: f64) -> Result<BestConfig, BenchError> {
    if points.is_empty() {
        return Err(BenchError::Input("no learning-curve points".into()));
    }
    let mut first_cross: Vec<(Contender, usize)> = Vec::new();
    for p in points.iter().filter(|p| !p.degenerate && p.mean_f1 >= threshold) {
        match first_cross.iter_mut().find(|(c, _)| *c == p.contender) {
            Some((_, size)) => *size = (*size).min(p.train_size),
            None => first_cross.push((p.contender, p.train_size)),
        }
    }
    let Some(best) = first_cross.iter().map(|&(_, s)| s).min() else {
        let top = points
            .iter()
            .filter(|p| !p.degenerate)
            .map(|p| p.mean_f1)
            .fold(f64::NEG_INFINITY, f64::max);
        return Ok(BestConfig {
            contenders: Vec::new(),
            train_size: None,
            diagnostic: Some(format!("no configuration reaches F1 >= {threshold}; best mean F1 is {top}")),
        });
    };
    Ok(BestConfig {
        contenders: first_cross.iter().filter(|&&(_, s)| s == best).map(|&(c, _)| c).collect(),
        train_size: Some(best),
        diagnostic: None,
    })
}

pub const CURVE_HEADER: [&str; 9] = [
    "config",
    "ram_bits",
    "bleaching",
    "ignore_zero",
    "train_size",
    "reps",
    "mean_f1",
    "std_f1",
    "degenerate",
];

pub const VERBOSE_HEADER: [&str; 7] = ["config", "ram_bits", "bleaching", "ignore_zero", "train_size", "rep", "f1"];

fn config_columns(c: &Contender) -> [String; 4] {
    match c.variant() {
        Some(v) => [
            c.to_string(),
            v.bits_per_tuple.to_string(),
            (v.bleaching as u8).to_string(),
            (v.ignore_zero as u8).to_string(),
        ],
        None => [c.to_string(), String::new(), String::new(), String::new()],
    }
}

/// One row per point. Booleans are written as 0/1; floats in shortest
/// round-trip form.
pub fn write_curve<W: Write>(points: &[LearningCurvePoint], writer: W, delimiter: u8) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(writer);
    w.write_record(CURVE_HEADER)?;
    for p in points {
        let mut rec = config_columns(&p.contender).to_vec();
        rec.extend([
            p.train_size.to_string(),
            p.reps.to_string(),
            p.mean_f1.to_string(),
            p.std_f1.to_string(),
            (p.degenerate as u8).to_string(),
        ]);
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per repetition; needs points produced with `keep_per_rep`.
pub fn write_curve_verbose<W: Write>(points: &[LearningCurvePoint], writer: W, delimiter: u8) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().delimiter(delimiter).from_writer(writer);
    w.write_record(VERBOSE_HEADER)?;
    for p in points {
        for (rep, f1) in p.per_rep.iter().enumerate() {
            let mut rec = config_columns(&p.contender).to_vec();
            rec.extend([p.train_size.to_string(), rep.to_string(), f1.to_string()]);
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::generate_synthetic;
    use crate::dataset::synth::presets;

    fn point(c: Contender, size: usize, f1: f64) -> LearningCurvePoint {
        LearningCurvePoint {
            contender: c,
            train_size: size,
            reps: 1,
            mean_f1: f1,
            std_f1: 0.0,
            degenerate: false,
            per_rep: vec![],
        }
    }

    fn v(n: u32) -> Contender {
        Contender::Wisard(WnnVariant { bits_per_tuple: n, bleaching: true, ignore_zero: false })
    }

    #[test]
    fn default_grid_has_sixteen_configs() {
        let g = ExperimentGrid::default();
        let ids: Vec<String> = g.contenders().iter().map(|c| c.to_string()).collect();
        assert_eq!(ids.len(), 16);
        assert_eq!(ids[0], "n2-b0-z0");
        assert_eq!(ids[15], "n16-b1-z1");
        let mut unique = ids.clone();
        unique.sort();
        unique.dedup();
        assert_eq!(unique.len(), 16);
    }

    #[test]
    fn sizes() {
        let mut g = ExperimentGrid::default();
        assert_eq!(g.sizes_for(4), vec![2, 4, 6, 8]);
        g.step = 4;
        assert_eq!(g.sizes_for(5), vec![2, 6, 10]);
        g.max_train_size = Some(6);
        assert_eq!(g.sizes_for(5), vec![2, 6]);
        g.train_sizes = Some(vec![2, 12, 40]);
        assert_eq!(g.sizes_for(10), vec![2, 12]);
        g.step = 3;
        assert!(g.validate().is_err());
    }

    #[test]
    fn best_single_crossing() {
        let pts = vec![point(v(2), 10, 0.8), point(v(2), 12, 0.91), point(v(2), 14, 0.95)];
        let b = best_config(&pts, 0.9).unwrap();
        assert_eq!((b.contenders, b.train_size), (vec![v(2)], Some(12)));
    }

    #[test]
    fn best_reports_ties() {
        let pts = vec![
            point(v(2), 12, 0.92),
            point(v(4), 12, 0.95),
            point(v(8), 10, 0.5),
            point(v(8), 14, 0.99),
        ];
        let b = best_config(&pts, 0.9).unwrap();
        assert_eq!(b.contenders, vec![v(2), v(4)]);
        assert_eq!(b.train_size, Some(12));
    }

    #[test]
    fn best_without_crossing() {
        let b = best_config(&[point(v(2), 2, 0.4)], 0.9).unwrap();
        assert!(b.contenders.is_empty());
        assert!(b.diagnostic.is_some());
        assert!(best_config(&[], 0.9).is_err());
    }

    #[test]
    fn separable_log_is_perfect_from_size_two() {
        let log = generate_synthetic(&presets::separable(1, 20)).unwrap();
        let grid = ExperimentGrid {
            reps: 3,
            max_train_size: Some(4),
            include_baseline: true,
            ..ExperimentGrid::default()
        };
        let pts = run_learning_curve(&log, "S", &grid).unwrap();
        assert_eq!(pts.len(), 17 * 2);
        assert!(pts.iter().all(|p| p.mean_f1 == 1.0 && p.reps == 3), "{pts:?}");
    }

    #[test]
    fn exhausted_size_is_degenerate() {
        let log = generate_synthetic(&presets::separable(1, 3)).unwrap();
        let grid = ExperimentGrid { reps: 2, ram_sizes: vec![2], ..ExperimentGrid::default() };
        let pts = run_learning_curve(&log, "S", &grid).unwrap();
        let last = pts.iter().find(|p| p.train_size == 6).unwrap();
        assert!(last.degenerate);
        assert_eq!(last.reps, 0);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let log = generate_synthetic(&presets::class_a_like(4)).unwrap();
        let mut grid = ExperimentGrid {
            reps: 3,
            max_train_size: Some(8),
            include_baseline: true,
            keep_per_rep: true,
            ..ExperimentGrid::default()
        };
        let par = run_learning_curve(&log, "A", &grid).unwrap();
        grid.parallel = false;
        let ser = run_learning_curve(&log, "A", &grid).unwrap();
        assert_eq!(par, ser);
    }

    #[test]
    fn untagged_or_one_sided_class_rejected() {
        let log = generate_synthetic(&presets::class_a_sp(1)).unwrap();
        assert!(run_learning_curve(&log, "A", &ExperimentGrid::default()).is_err());
        assert!(run_learning_curve(&log, "nope", &ExperimentGrid::default()).is_err());
    }

    #[test]
    fn curve_file_layout() {
        let pts = vec![point(v(8), 12, 0.5), point(Contender::Baseline, 12, 0.25)];
        let mut out = Vec::new();
        write_curve(&pts, &mut out, b',').unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "config,ram_bits,bleaching,ignore_zero,train_size,reps,mean_f1,std_f1,degenerate\n\
             n8-b1-z0,8,1,0,12,1,0.5,0,0\n\
             baseline-1nn,,,,12,1,0.25,0,0\n"
        );
    }
}
