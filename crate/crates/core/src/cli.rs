//! `procwisard` subcommands: `stats`, `train`, `classify`, `curve`,
//! `generate`.
//!
//! Every run echoes its fully resolved settings to stderr; `stats` and
//! `curve` also prefix their output files with the same settings as
//! `# key: value` comment lines.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, ExperimentGrid};
use crate::dataset::{self, LogFormat, SynthSpec};
use crate::encoding::{EncoderKind, RetinaGeometry, Tag};
use crate::model_file::ModelFile;
use crate::wnn::{WisardModel, WnnConfig};

#[derive(Debug, Parser)]
#[command(name = "procwisard", version, about = "WiSARD classifier toolkit for process-mining event logs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Input file (event log; synthetic spec for `generate`)
    #[arg(long, short)]
    pub input: PathBuf,
    /// Output file; stdout when omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Seed for every random decision
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Field delimiter of delimited files
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Encoding {
    OneHot,
    VisitThermometer,
}

impl From<Encoding> for EncoderKind {
    fn from(e: Encoding) -> Self {
        match e {
            Encoding::OneHot => EncoderKind::OneHot,
            Encoding::VisitThermometer => EncoderKind::VisitThermometer,
        }
    }
}

/// Grid axis selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
    Both,
}

impl Switch {
    fn values(self) -> Vec<bool> {
        match self {
            Switch::On => vec![true],
            Switch::Off => vec![false],
            Switch::Both => vec![false, true],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TagArg {
    #[value(name = "SP")]
    Sp,
    #[value(name = "NP")]
    Np,
}

impl From<TagArg> for Tag {
    fn from(t: TagArg) -> Self {
        match t {
            TagArg::Sp => Tag::Sp,
            TagArg::Np => Tag::Np,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-class dataset summary (totals, symbols, entropy, density)
    Stats {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = Encoding::OneHot)]
        encoding: Encoding,
    },
    /// Train an SP/NP model for one class
    Train {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 8)]
        ram_bits: u32,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        bleaching: bool,
        #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
        ignore_zero: bool,
        #[arg(long, value_enum, default_value_t = Encoding::OneHot)]
        encoding: Encoding,
    },
    /// Classify every trace of a log with a trained model
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        model: PathBuf,
    },
    /// Learning curves over a grid of WiSARD configurations
    Curve {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        class: String,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16")]
        ram_bits: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Switch::Both)]
        bleaching: Switch,
        #[arg(long, value_enum, default_value_t = Switch::Both)]
        ignore_zero: Switch,
        #[arg(long, default_value_t = 50)]
        reps: usize,
        #[arg(long, default_value_t = 2)]
        step: usize,
        #[arg(long)]
        max_train_size: Option<usize>,
        /// One mapping per tuple width instead of one per repetition
        #[arg(long)]
        freeze_mapping: bool,
        #[arg(long, value_enum, default_value_t = TagArg::Sp)]
        positive: TagArg,
        /// Add the 1-nearest-neighbor Hamming baseline curve
        #[arg(long)]
        baseline: bool,
        /// Disable repetition-level parallelism
        #[arg(long)]
        serial: bool,
        /// F1 level used to report the best configuration
        #[arg(long, default_value_t = 0.9)]
        threshold: f64,
        /// Per-repetition output file
        #[arg(long)]
        verbose_output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Encoding::OneHot)]
        encoding: Encoding,
    },
    /// Generate a synthetic event log from a JSON spec
    Generate {
        /// Synthetic spec (JSON)
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Overrides the spec's seed
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = ',')]
        delimiter: char,
    },
}

/// Outcome of a successful run: how many per-row failures were reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Outcome {
    pub row_failures: usize,
}

fn delimiter_byte(c: char) -> Result<u8> {
    u8::try_from(c)
        .ok()
        .filter(u8::is_ascii)
        .ok_or_else(|| anyhow!("delimiter {c:?} must be a single ASCII character"))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn path_or_stdout(p: Option<&Path>) -> String {
    p.map_or_else(|| "-".to_owned(), |p| p.display().to_string())
}

/// Resolved settings as `key: value` lines.
fn settings_block(settings: &[(&str, String)], prefix: &str) -> String {
    let mut out = String::new();
    for (k, v) in settings {
        out.push_str(&format!("{prefix}{k}: {v}\n"));
    }
    out
}

fn echo(settings: &[(&str, String)]) {
    eprint!("{}", settings_block(settings, "# "));
}

fn base_settings(command: &str, common: &CommonArgs) -> Vec<(&'static str, String)> {
    vec![
        ("procwisard", env!("CARGO_PKG_VERSION").to_owned()),
        ("command", command.to_owned()),
        ("input", common.input.display().to_string()),
        ("output", path_or_stdout(common.output.as_deref())),
        ("seed", common.seed.to_string()),
        ("delimiter", common.delimiter.to_string()),
    ]
}

fn load_log(common: &CommonArgs) -> Result<dataset::EventLog> {
    let format = LogFormat { delimiter: delimiter_byte(common.delimiter)? };
    dataset::load_event_log(&common.input, &format).map_err(|e| anyhow!(e))
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Stats { common, encoding } => cmd_stats(&common, encoding.into()),
        Command::Train { common, class, ram_bits, bleaching, ignore_zero, encoding } => {
            let config = WnnConfig::new(ram_bits)
                .bleaching(bleaching)
                .ignore_zero(ignore_zero)
                .seed(common.seed);
            cmd_train(&common, &class, config, encoding.into())
        }
        Command::Classify { common, model } => cmd_classify(&common, &model),
        Command::Curve {
            common,
            class,
            ram_bits,
            bleaching,
            ignore_zero,
            reps,
            step,
            max_train_size,
            freeze_mapping,
            positive,
            baseline,
            serial,
            threshold,
            verbose_output,
            encoding,
        } => {
            let grid = ExperimentGrid {
                ram_sizes: ram_bits,
                bleaching: bleaching.values(),
                ignore_zero: ignore_zero.values(),
                reps,
                step,
                max_train_size,
                train_sizes: None,
                master_seed: common.seed,
                freeze_mapping,
                positive: positive.into(),
                include_baseline: baseline,
                parallel: !serial,
                encoder: encoding.into(),
                keep_per_rep: verbose_output.is_some(),
            };
            cmd_curve(&common, &class, &grid, threshold, verbose_output.as_deref())
        }
        Command::Generate { input, output, seed, delimiter } => {
            cmd_generate(&input, output.as_deref(), seed, delimiter)
        }
    }
}

pub fn cmd_stats(common: &CommonArgs, encoder: EncoderKind) -> Result<Outcome> {
    let mut settings = base_settings("stats", common);
    settings.push(("encoding", encoder.to_string()));
    echo(&settings);
    let log = load_log(common)?;
    if log.is_empty() {
        bail!("event log {} has no traces", common.input.display());
    }
    let geometry = RetinaGeometry::infer(log.traces(), encoder)?;
    settings.push(("units", geometry.units.len().to_string()));
    settings.push(("max_seq", geometry.max_seq.to_string()));
    settings.push(("retina_len", geometry.retina_len().to_string()));
    let stats = log
        .classes()
        .into_iter()
        .map(|(label, traces)| dataset::class_stats(label, &traces, &geometry))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = open_output(common.output.as_deref())?;
    out.write_all(settings_block(&settings, "# ").as_bytes())?;
    dataset::write_stats(&stats, &mut out, delimiter_byte(common.delimiter)?)?;
    out.flush()?;
    Ok(Outcome::default())
}

pub fn cmd_train(common: &CommonArgs, class: &str, config: WnnConfig, encoder: EncoderKind) -> Result<Outcome> {
    let mut settings = base_settings("train", common);
    settings.extend([
        ("class", class.to_owned()),
        ("ram_bits", config.bits_per_tuple.to_string()),
        ("bleaching", config.bleaching_enabled.to_string()),
        ("ignore_zero", config.ignore_zero_enabled.to_string()),
        ("encoding", encoder.to_string()),
    ]);
    echo(&settings);
    let Some(output) = common.output.as_deref() else {
        bail!("train needs --output for the model file");
    };
    let log = load_log(common)?;
    let (sp, np) = log.pools(class)?;
    let geometry = RetinaGeometry::infer(log.traces(), encoder)?;
    let mut model = WisardModel::new(config, geometry.retina_len())?;
    for t in log.class(class)? {
        let tag = t.tag.expect("pools() checked tags");
        model.train(&geometry.encode(t)?, tag.as_str())?;
    }
    ModelFile { model, geometry: Some(geometry) }
        .save(output)
        .with_context(|| format!("writing {}", output.display()))?;
    eprintln!("# trained: {} SP, {} NP", sp.len(), np.len());
    Ok(Outcome::default())
}

pub const PREDICTIONS_HEADER: [&str; 7] =
    ["case_id", "predicted", "score", "tuples", "final_bleach", "ambiguous", "error"];

pub fn cmd_classify(common: &CommonArgs, model_path: &Path) -> Result<Outcome> {
    let mut settings = base_settings("classify", common);
    settings.push(("model", model_path.display().to_string()));
    echo(&settings);
    let file = ModelFile::load(model_path)?;
    let geometry = file
        .geometry
        .as_ref()
        .ok_or_else(|| anyhow!("model {} carries no retina geometry", model_path.display()))?;
    let model = &file.model;
    let ignore_zero = model.config().ignore_zero_enabled;
    let log = load_log(common)?;
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter_byte(common.delimiter)?)
        .from_writer(open_output(common.output.as_deref())?);
    w.write_record(PREDICTIONS_HEADER)?;
    let mut failures = 0;
    for t in log.traces() {
        let result = geometry
            .encode(t)
            .map_err(crate::Error::from)
            .and_then(|r| Ok(model.addresses(&r)?))
            .and_then(|a| Ok((model.classify_addresses(&a)?, a.effective_count(ignore_zero))));
        match result {
            Ok((res, tuples)) => w.write_record([
                t.case_id.as_str(),
                &res.label,
                &res.score.to_string(),
                &tuples.to_string(),
                &res.final_bleach.to_string(),
                if res.ambiguous { "1" } else { "0" },
                "",
            ])?,
            Err(e) => {
                failures += 1;
                w.write_record([t.case_id.as_str(), "", "", "", "", "", &e.to_string()])?;
            }
        }
    }
    w.flush()?;
    if failures > 0 {
        eprintln!("# {failures} trace(s) could not be classified");
    }
    Ok(Outcome { row_failures: failures })
}

pub fn cmd_curve(
    common: &CommonArgs,
    class: &str,
    grid: &ExperimentGrid,
    threshold: f64,
    verbose_output: Option<&Path>,
) -> Result<Outcome> {
    let mut settings = base_settings("curve", common);
    let join = |v: Vec<String>| v.join(",");
    settings.extend([
        ("class", class.to_owned()),
        ("ram_bits", join(grid.ram_sizes.iter().map(u32::to_string).collect())),
        ("bleaching", join(grid.bleaching.iter().map(bool::to_string).collect())),
        ("ignore_zero", join(grid.ignore_zero.iter().map(bool::to_string).collect())),
        ("reps", grid.reps.to_string()),
        ("step", grid.step.to_string()),
        ("max_train_size", grid.max_train_size.map_or_else(|| "none".into(), |m| m.to_string())),
        ("freeze_mapping", grid.freeze_mapping.to_string()),
        ("positive", grid.positive.to_string()),
        ("baseline", grid.include_baseline.to_string()),
        ("encoding", grid.encoder.to_string()),
        ("threshold", threshold.to_string()),
        ("verbose_output", path_or_stdout(verbose_output)),
    ]);
    // Parallelism does not change results, so it stays out of the file preamble.
    echo(&settings);
    eprintln!("# parallel: {}", grid.parallel);
    let log = load_log(common)?;
    let points = bench::run_learning_curve(&log, class, grid)?;
    let delimiter = delimiter_byte(common.delimiter)?;
    let mut out = open_output(common.output.as_deref())?;
    out.write_all(settings_block(&settings, "# ").as_bytes())?;
    bench::write_curve(&points, &mut out, delimiter)?;
    out.flush()?;
    if let Some(p) = verbose_output {
        let mut v = open_output(Some(p))?;
        bench::write_curve_verbose(&points, &mut v, delimiter)?;
        v.flush()?;
    }
    let wisard: Vec<_> = points.iter().filter(|p| p.contender.variant().is_some()).cloned().collect();
    let best = bench::best_config(&wisard, threshold)?;
    match best.train_size {
        Some(size) => {
            let ids: Vec<String> = best.contenders.iter().map(ToString::to_string).collect();
            eprintln!("# best: {} at train_size {size}", ids.join(" "));
        }
        None => eprintln!("# best: none ({})", best.diagnostic.unwrap_or_default()),
    }
    Ok(Outcome::default())
}

pub fn cmd_generate(spec_path: &Path, output: Option<&Path>, seed: Option<u64>, delimiter: char) -> Result<Outcome> {
    let text = std::fs::read_to_string(spec_path).with_context(|| format!("reading {}", spec_path.display()))?;
    let mut spec = SynthSpec::from_json(&text)?;
    if let Some(s) = seed {
        spec.seed = s;
    }
    echo(&[
        ("procwisard", env!("CARGO_PKG_VERSION").to_owned()),
        ("command", "generate".to_owned()),
        ("input", spec_path.display().to_string()),
        ("output", path_or_stdout(output)),
        ("seed", spec.seed.to_string()),
        ("delimiter", delimiter.to_string()),
    ]);
    let log = dataset::generate_synthetic(&spec)?;
    let mut out = open_output(output)?;
    dataset::write_event_log(&log, &mut out, &LogFormat { delimiter: delimiter_byte(delimiter)? })?;
    out.flush()?;
    Ok(Outcome::default())
}

/// Parses arguments, runs, and maps the outcome to an exit status:
/// 0 on success, 1 when some rows failed, 2 on a fatal error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(o) if o.row_failures == 0 => 0,
        Ok(_) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
