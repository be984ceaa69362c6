//! Multi-dataset benchmarks over pre-split train/test files, summarized by
//! mean test BER and average rank.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kernelcast_core::data::{Dataset, ScalerKind};
use kernelcast_core::ensemble::build_ensemble;
use kernelcast_core::modelsel::{ber_breakdown, kms_fit, BerVariant, SearchMode, SearchOptions, SearchReport};
use kernelcast_core::sampling::SamplerKind;
use kernelcast_core::seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::FORMAT_VERSION;
use crate::io::{load_csv, read_table, LabelColumn};
use crate::{runner, Error, Result};

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitFiles {
    pub train: PathBuf,
    pub test: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestDataset {
    pub name: String,
    pub splits: Vec<SplitFiles>,
    /// Defaults to the last column.
    #[serde(default)]
    pub label_column: Option<String>,
    #[serde(default = "default_true")]
    pub has_header: bool,
    /// Per-dataset scaler, unless the run overrides it.
    #[serde(default)]
    pub scaler: Option<ScalerKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub datasets: Vec<ManifestDataset>,
}

/// Reads a manifest; relative split paths are taken from the manifest's directory.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut manifest: Manifest =
        serde_json::from_str(&text).map_err(|source| Error::Json { path: path.to_path_buf(), source })?;
    let base = path.parent().unwrap_or(Path::new(""));
    for ds in &mut manifest.datasets {
        if ds.splits.is_empty() {
            return Err(Error::Manifest(format!("dataset {:?} lists no splits", ds.name)));
        }
        for s in &mut ds.splits {
            s.train = base.join(&s.train);
            s.test = base.join(&s.test);
        }
    }
    let mut names: Vec<&str> = manifest.datasets.iter().map(|d| d.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Manifest(format!("dataset {:?} listed twice", w[0])));
    }
    Ok(manifest)
}

/// How a method's search is run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Random,
    Grid,
    /// Random search restricted to one sampler.
    Sampler(SamplerKind),
}

/// `kms-<strategy>` or `kmse-<strategy>` with strategy `rs`, `gs`, or a sampler name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Method {
    pub ensemble: bool,
    pub strategy: Strategy,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.ensemble { "kmse" } else { "kms" };
        match self.strategy {
            Strategy::Random => write!(f, "{prefix}-rs"),
            Strategy::Grid => write!(f, "{prefix}-gs"),
            Strategy::Sampler(s) => write!(f, "{prefix}-{}", s.name()),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("unknown method {s:?}; expected kms-<x> or kmse-<x> with x in rs, gs, random, kmeans, density, fft"));
        let (prefix, rest) = s.split_once('-').ok_or_else(bad)?;
        let ensemble = match prefix {
            "kms" => false,
            "kmse" => true,
            _ => return Err(bad()),
        };
        let strategy = match rest {
            "rs" => Strategy::Random,
            "gs" => Strategy::Grid,
            _ => Strategy::Sampler(SamplerKind::ALL.into_iter().find(|k| k.name() == rest).ok_or_else(bad)?),
        };
        Ok(Self { ensemble, strategy })
    }
}

impl From<Method> for String {
    fn from(m: Method) -> Self {
        m.to_string()
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkOptions {
    pub methods: Vec<Method>,
    /// Use at most this many splits per dataset.
    pub max_splits: Option<usize>,
    pub budget: usize,
    pub folds: usize,
    pub ensemble_size: usize,
    /// Overrides every dataset's scaler when set.
    pub scaler: Option<ScalerKind>,
    /// Test-set error measure.
    pub metric: BerVariant,
    pub seed: u64,
}

impl Default for BenchmarkOptions {
    fn default() -> Self {
        Self {
            methods: vec![
                Method { ensemble: false, strategy: Strategy::Random },
                Method { ensemble: true, strategy: Strategy::Random },
            ],
            max_splits: None,
            budget: kernelcast_core::modelsel::DEFAULT_SAMPLE_SIZE,
            folds: kernelcast_core::modelsel::DEFAULT_FOLD_COUNT,
            ensemble_size: kernelcast_core::ensemble::DEFAULT_ENSEMBLE_SIZE,
            scaler: None,
            metric: BerVariant::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    pub mean_ber: f64,
    pub std_ber: f64,
    /// Test BER of every split used, in manifest order.
    pub split_bers: Vec<f64>,
    /// Mid-rank of `mean_ber` among the methods on this dataset (1 = best).
    pub rank: f64,
    /// Ensembles that had fewer viable configurations than requested.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetResult {
    pub name: String,
    pub splits_used: usize,
    pub splits_available: usize,
    pub methods: Vec<MethodResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageRank {
    pub method: Method,
    pub rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub version: u32,
    pub options: BenchmarkOptions,
    /// Set when `max_splits` dropped splits from any dataset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_cap: Option<String>,
    pub datasets: Vec<DatasetResult>,
    /// Ascending, ties in the order methods were requested.
    pub average_ranks: Vec<AverageRank>,
}

/// Ranks starting at 1, ascending; tied values share the mean of their positions.
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]].total_cmp(&values[order[i]]).is_eq() {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

struct LoadedSplit {
    train: Dataset,
    test_rows: Vec<Vec<f64>>,
    truth: Vec<usize>,
    n_classes: usize,
}

/// Loads `test` with the labels of `train`; labels unseen in training get
/// indices past the training vocabulary.
fn load_split(entry: &ManifestDataset, files: &SplitFiles) -> Result<LoadedSplit> {
    let label = entry.label_column.as_deref().map_or(LabelColumn::Last, LabelColumn::from);
    let train = load_csv(&files.train, &label, entry.has_header)?;
    let test = read_table(&files.test, Some(&label), entry.has_header)?;
    let mut names = train.label_names().to_vec();
    let truth = test
        .labels
        .unwrap_or_default()
        .into_iter()
        .map(|l| match names.iter().position(|n| *n == l) {
            Some(i) => i,
            None => {
                names.push(l);
                names.len() - 1
            }
        })
        .collect();
    let rows = test.features.iter_rows().map(<[f64]>::to_vec).collect();
    Ok(LoadedSplit { train, test_rows: rows, truth, n_classes: names.len() })
}

struct Cell {
    dataset: usize,
    split: usize,
    strategy: Strategy,
}

/// Test BER for every requested method that shares `cell`'s search.
fn run_cell(
    entry: &ManifestDataset,
    cell: &Cell,
    options: &BenchmarkOptions,
) -> Result<Vec<(Method, f64, Option<String>)>> {
    let LoadedSplit { train, test_rows, truth, n_classes } = load_split(entry, &entry.splits[cell.split])?;
    let test = kernelcast_core::Matrix::from_rows(&test_rows)?;
    let split_seed = seed::derive(seed::derive(options.seed, seed::fnv1a(entry.name.as_bytes())), cell.split as u64);
    let mode = match cell.strategy {
        Strategy::Grid => SearchMode::Grid,
        _ => SearchMode::Random { sample_size: options.budget },
    };
    let search = SearchOptions {
        mode,
        fold_count: options.folds,
        seed: split_seed,
        sampler_filter: match cell.strategy {
            Strategy::Sampler(s) => Some(s),
            _ => None,
        },
        scaler: options.scaler.or(entry.scaler).unwrap_or_default(),
        ber: BerVariant::default(),
    };
    let report: SearchReport = runner::search(&train, search)?;
    let mut out = Vec::new();
    for &method in options.methods.iter().filter(|m| m.strategy == cell.strategy) {
        let (predicted, note) = if method.ensemble {
            let available = report.ranked().len();
            let ell = options.ensemble_size.min(available);
            let note = (ell < options.ensemble_size)
                .then(|| format!("split {}: only {ell} viable configurations for the ensemble", cell.split));
            (build_ensemble(&report, &train, ell, seed::derive(split_seed, 1))?.predict(&test)?, note)
        } else {
            let best = report.best().ok_or(kernelcast_core::Error::NoViableConfiguration)?;
            (kms_fit(&best.config, &train, best.seed)?.predict(&test)?, None)
        };
        let ber = ber_breakdown(options.metric, &truth, &predicted, n_classes)?.value;
        out.push((method, ber, note));
    }
    Ok(out)
}

pub fn run_benchmark(manifest: &Manifest, options: &BenchmarkOptions) -> Result<BenchmarkReport> {
    if options.methods.is_empty() {
        return Err(Error::Usage("no methods requested".into()));
    }
    let mut strategies: Vec<Strategy> = Vec::new();
    for m in &options.methods {
        if !strategies.contains(&m.strategy) {
            strategies.push(m.strategy);
        }
    }
    let used = |d: &ManifestDataset| options.max_splits.map_or(d.splits.len(), |cap| cap.min(d.splits.len()));
    let cells: Vec<Cell> = manifest
        .datasets
        .iter()
        .enumerate()
        .flat_map(|(dataset, d)| {
            let strategies = &strategies;
            (0..used(d)).flat_map(move |split| strategies.iter().map(move |&strategy| Cell { dataset, split, strategy }))
        })
        .collect();
    let results: Vec<Vec<(Method, f64, Option<String>)>> = runner::with_pool(|| {
        cells.par_iter().map(|c| run_cell(&manifest.datasets[c.dataset], c, options)).collect::<Result<_>>()
    })??;
    let mut bers: HashMap<(usize, Method), (Vec<f64>, Vec<String>)> = HashMap::new();
    for (cell, res) in cells.iter().zip(results) {
        for (method, ber, note) in res {
            let entry = bers.entry((cell.dataset, method)).or_default();
            entry.0.push(ber);
            entry.1.extend(note);
        }
    }
    let mut datasets = Vec::new();
    let mut rank_sums = vec![0.0; options.methods.len()];
    for (d, entry) in manifest.datasets.iter().enumerate() {
        let mut methods: Vec<MethodResult> = options
            .methods
            .iter()
            .map(|&method| {
                let (split_bers, notes) = bers.remove(&(d, method)).unwrap_or_default();
                let n = split_bers.len() as f64;
                let mean_ber = split_bers.iter().sum::<f64>() / n;
                let std_ber = (split_bers.iter().map(|b| (b - mean_ber).powi(2)).sum::<f64>() / n).sqrt();
                MethodResult { method, mean_ber, std_ber, split_bers, rank: 0.0, notes }
            })
            .collect();
        let ranks = mid_ranks(&methods.iter().map(|m| m.mean_ber).collect::<Vec<_>>());
        for ((m, r), sum) in methods.iter_mut().zip(ranks).zip(&mut rank_sums) {
            m.rank = r;
            *sum += r;
        }
        datasets.push(DatasetResult {
            name: entry.name.clone(),
            splits_used: used(entry),
            splits_available: entry.splits.len(),
            methods,
        });
    }
    let n_datasets = manifest.datasets.len().max(1) as f64;
    let mut average_ranks: Vec<AverageRank> = options
        .methods
        .iter()
        .zip(rank_sums)
        .map(|(&method, s)| AverageRank { method, rank: s / n_datasets })
        .collect();
    average_ranks.sort_by(|a, b| a.rank.total_cmp(&b.rank));
    let split_cap = datasets.iter().any(|d| d.splits_used < d.splits_available).then(|| {
        format!(
            "averaged over the first {} splits of each dataset instead of all available splits",
            options.max_splits.unwrap_or_default()
        )
    });
    Ok(BenchmarkReport { version: FORMAT_VERSION, options: options.clone(), split_cap, datasets, average_ranks })
}

impl BenchmarkReport {
    /// Plain-text table: datasets as rows, methods as columns in rank order,
    /// BER in percent.
    pub fn to_table(&self) -> String {
        let order: Vec<Method> = self.average_ranks.iter().map(|a| a.method).collect();
        let width = order.iter().map(|m| m.to_string().len()).max().unwrap_or(0).max(8);
        let name_width = self.datasets.iter().map(|d| d.name.len()).max().unwrap_or(0).max(9);
        let mut out = format!("{:name_width$}", "benchmark");
        for m in &order {
            out += &format!(" {:>width$}", m.to_string());
        }
        out.push('\n');
        for d in &self.datasets {
            out += &format!("{:name_width$}", d.name);
            for m in &order {
                let r = d.methods.iter().find(|r| r.method == *m).expect("every method has a result");
                out += &format!(" {:>width$.2}", 100.0 * r.mean_ber);
            }
            out.push('\n');
        }
        out += &format!("{:name_width$}", "avg. rank");
        for a in &self.average_ranks {
            out += &format!(" {:>width$.2}", a.rank);
        }
        out.push('\n');
        out
    }
}
