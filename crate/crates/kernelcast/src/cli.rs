//! Command-line interface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kernelcast_core::data::{Dataset, ScalerKind};
use kernelcast_core::ensemble::{build_ensemble, consensus_curve};
use kernelcast_core::modelsel::{
    ber_breakdown, config_seed, kms_fit, BerVariant, SearchMode, SearchOptions, DEFAULT_FOLD_COUNT,
    DEFAULT_SAMPLE_SIZE,
};
use kernelcast_core::sampling::SamplerKind;
use kernelcast_core::Matrix;

use crate::benchmark::{read_manifest, run_benchmark, BenchmarkOptions, Method};
use crate::format::{read_config, read_model, read_report, write_json, write_model, write_report, Model};
use crate::io::{load_csv, read_table, write_labels, write_matrix, LabelColumn, Table};
use crate::{runner, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "kernelcast", version, about = "Kernel-mapped model selection for kNN and naive Bayes classifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cross-validate sampled (or all) configurations and write a search report.
    Search(SearchArgs),
    /// Fit the best configuration, or an ensemble of the best ones.
    Train(TrainArgs),
    /// Predict labels with a fitted model.
    Predict(PredictArgs),
    /// Write the kernel-mapped features of a single-pipeline model.
    Map(MapArgs),
    /// Disagreement between ensembles of size ell and ell + step.
    Consensus(ConsensusArgs),
    /// Run methods over the train/test splits listed in a manifest.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Args)]
pub struct DataArgs {
    /// CSV file with one sample per row.
    #[arg(long)]
    pub data: PathBuf,
    /// Label column: `last`, a zero-based index, or a header name.
    #[arg(long, default_value = "last")]
    pub label_col: String,
    /// The first row is data, not a header.
    #[arg(long)]
    pub no_header: bool,
}

impl DataArgs {
    fn load(&self) -> Result<Dataset> {
        load_csv(&self.data, &LabelColumn::from(self.label_col.as_str()), !self.no_header)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Random,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Any,
    Random,
    Kmeans,
    Density,
    Fft,
}

impl SamplerArg {
    fn filter(self) -> Option<SamplerKind> {
        match self {
            Self::Any => None,
            Self::Random => Some(SamplerKind::Random),
            Self::Kmeans => Some(SamplerKind::KMeans),
            Self::Density => Some(SamplerKind::Density),
            Self::Fft => Some(SamplerKind::Fft),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalerArg {
    None,
    Standardize,
    Minmax,
    Maxabs,
}

impl From<ScalerArg> for ScalerKind {
    fn from(s: ScalerArg) -> Self {
        match s {
            ScalerArg::None => Self::None,
            ScalerArg::Standardize => Self::Standardize,
            ScalerArg::Minmax => Self::MinMax,
            ScalerArg::Maxabs => Self::MaxAbs,
        }
    }
}

/// `fp-fn`: per-class false positives plus false negatives over class size.
/// `fn`: per-class false negatives over class size (one minus recall).
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    FpFn,
    Fn,
}

impl From<MetricArg> for BerVariant {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::FpFn => Self::FalsePositivesAndNegatives,
            MetricArg::Fn => Self::FalseNegatives,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value_t = DEFAULT_FOLD_COUNT)]
    pub folds: usize,
    /// Configurations sampled in random mode.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
    pub budget: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Random)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = SamplerArg::Any)]
    pub sampler: SamplerArg,
    #[arg(long, value_enum, default_value_t = ScalerArg::None)]
    pub scaler: ScalerArg,
    /// Cross-validation score.
    #[arg(long, value_enum, default_value_t = MetricArg::FpFn)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Search report whose best configurations are fitted.
    #[arg(long, required_unless_present = "config", conflicts_with = "config")]
    pub report: Option<PathBuf>,
    /// A single configuration as JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// 0 fits the best configuration alone; the bare flag means 15.
    #[arg(long, num_args = 0..=1, default_value_t = 0, default_missing_value = "15")]
    pub ensemble_size: usize,
    /// Vote tie-break seed for ensembles; fitting seed with --config.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// CSV of feature rows, plus the truth column if --truth-col is given.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub no_header: bool,
    /// Column with true labels; the balanced error rate is printed.
    #[arg(long)]
    pub truth_col: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub no_header: bool,
    /// Column to drop before mapping.
    #[arg(long)]
    pub label_col: Option<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ConsensusArgs {
    /// Training data the report was computed on.
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub report: PathBuf,
    /// Rows to compare predictions on; the training rows by default.
    #[arg(long)]
    pub eval: Option<PathBuf>,
    /// Column of --eval to drop.
    #[arg(long)]
    pub eval_label_col: Option<String>,
    #[arg(long, default_value_t = 3)]
    pub ell_start: usize,
    #[arg(long, default_value_t = 2)]
    pub step: usize,
    #[arg(long, default_value_t = 29)]
    pub ell_max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Comma-separated, e.g. kms-rs,kmse-rs,kmse-fft.
    #[arg(long, value_delimiter = ',', default_value = "kms-rs,kmse-rs")]
    pub methods: Vec<String>,
    #[arg(long)]
    pub max_splits: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
    pub budget: usize,
    #[arg(long, default_value_t = DEFAULT_FOLD_COUNT)]
    pub folds: usize,
    #[arg(long, default_value_t = kernelcast_core::ensemble::DEFAULT_ENSEMBLE_SIZE)]
    pub ensemble_size: usize,
    /// Overrides the scalers named in the manifest.
    #[arg(long, value_enum)]
    pub scaler: Option<ScalerArg>,
    /// Test-set error measure.
    #[arg(long, value_enum, default_value_t = MetricArg::FpFn)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Reads features, dropping `drop` if given, and checks the width.
fn read_features(path: &PathBuf, drop: Option<&str>, has_header: bool) -> Result<Table> {
    read_table(path, drop.map(LabelColumn::from).as_ref(), has_header)
}

fn search(args: &SearchArgs) -> Result<()> {
    let ds = args.data.load()?;
    let options = SearchOptions {
        mode: match args.mode {
            ModeArg::Random => SearchMode::Random { sample_size: args.budget },
            ModeArg::Grid => SearchMode::Grid,
        },
        fold_count: args.folds,
        seed: args.seed,
        sampler_filter: args.sampler.filter(),
        scaler: args.scaler.into(),
        ber: args.metric.into(),
    };
    let report = runner::with_pool(|| runner::search(&ds, options))??;
    write_report(&args.out, &report)?;
    let viable = report.ranked().len();
    println!("evaluated {} configurations ({viable} viable)", report.evaluated.len());
    if let Some(best) = report.best() {
        println!("best cv_ber {:.6}: {}", best.cv_ber, best.config.label());
    }
    Ok(())
}

fn train(args: &TrainArgs) -> Result<()> {
    let ds = args.data.load()?;
    let model = match (&args.report, &args.config) {
        (Some(path), _) => {
            let report = read_report(path)?;
            if args.ensemble_size == 0 {
                let best = report.best().ok_or(kernelcast_core::Error::NoViableConfiguration)?;
                let mut m = kms_fit(&best.config, &ds, best.seed)?;
                m.cv_ber = Some(best.cv_ber);
                Model::Kms(Box::new(m))
            } else {
                Model::Ensemble(runner::with_pool(|| build_ensemble(&report, &ds, args.ensemble_size, args.seed))??)
            }
        }
        (None, Some(path)) => {
            if args.ensemble_size != 0 {
                return Err(Error::Usage("--ensemble-size needs --report".into()));
            }
            let cfg = read_config(path)?;
            Model::Kms(Box::new(kms_fit(&cfg, &ds, config_seed(args.seed, &cfg))?))
        }
        (None, None) => return Err(Error::Usage("one of --report or --config is required".into())),
    };
    write_model(&args.out, &model)
}

/// Label indices for `labels` under `names`, extending it with unseen labels.
fn encode(labels: &[String], names: &mut Vec<String>) -> Vec<usize> {
    labels
        .iter()
        .map(|l| match names.iter().position(|n| n == l) {
            Some(i) => i,
            None => {
                names.push(l.clone());
                names.len() - 1
            }
        })
        .collect()
}

fn predict(args: &PredictArgs) -> Result<()> {
    let model = read_model(&args.model)?;
    let table = read_features(&args.data, args.truth_col.as_deref(), !args.no_header)?;
    let predicted = model.predict(&table.features)?;
    let mut names = model.label_names().to_vec();
    let strings: Vec<String> = predicted.iter().map(|&p| names[p].clone()).collect();
    write_labels(&args.out, &strings)?;
    if let Some(truth) = &table.labels {
        let truth = encode(truth, &mut names);
        for (tag, variant) in [("ber", BerVariant::FalsePositivesAndNegatives), ("ber_fn", BerVariant::FalseNegatives)] {
            let b = ber_breakdown(variant, &truth, &predicted, names.len())?;
            println!("{tag}: {:.6}", b.value);
        }
    }
    Ok(())
}

fn map(args: &MapArgs) -> Result<()> {
    let Model::Kms(model) = read_model(&args.model)? else {
        return Err(Error::Usage("map needs a single-pipeline model, not an ensemble".into()));
    };
    let table = read_features(&args.data, args.label_col.as_deref(), !args.no_header)?;
    let mapped = model.transform(&table.features)?;
    let header: Vec<String> = (0..mapped.cols()).map(|j| format!("ref{j}")).collect();
    write_matrix(&args.out, &header, &mapped)
}

fn consensus(args: &ConsensusArgs) -> Result<()> {
    let ds = args.data.load()?;
    let report = read_report(&args.report)?;
    let eval: Matrix = match &args.eval {
        Some(path) => read_features(path, args.eval_label_col.as_deref(), !args.data.no_header)?.features,
        None => ds.features().clone(),
    };
    let curve = runner::with_pool(|| {
        consensus_curve(&report, &ds, &eval, args.ell_start, args.step, args.ell_max, args.seed)
    })??;
    let path = &args.out;
    let csv_err = |source| Error::Csv { path: path.clone(), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["ell", "raw_ratio", "normalized_ratio"]).map_err(csv_err)?;
    for p in &curve.points {
        w.write_record([p.ell.to_string(), p.raw.to_string(), p.normalized.to_string()]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn benchmark(args: &BenchmarkArgs) -> Result<()> {
    let manifest = read_manifest(&args.manifest)?;
    let options = BenchmarkOptions {
        methods: args.methods.iter().map(|m| m.parse::<Method>()).collect::<Result<_>>()?,
        max_splits: args.max_splits,
        budget: args.budget,
        folds: args.folds,
        ensemble_size: args.ensemble_size,
        scaler: args.scaler.map(Into::into),
        metric: args.metric.into(),
        seed: args.seed,
    };
    let report = run_benchmark(&manifest, &options)?;
    write_json(&args.out, &report)?;
    print!("{}", report.to_table());
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Search(a) => search(a),
        Command::Train(a) => train(a),
        Command::Predict(a) => predict(a),
        Command::Map(a) => map(a),
        Command::Consensus(a) => consensus(a),
        Command::Benchmark(a) => benchmark(a),
    }
}
