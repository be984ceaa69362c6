use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] kernelcast_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: row {row}, column {column}: cannot parse {value:?} as a finite number")]
    Cell { path: PathBuf, row: usize, column: String, value: String },
    #[error("{path}: row {row} has {found} fields, expected {expected}")]
    Ragged { path: PathBuf, row: usize, expected: usize, found: usize },
    #[error("{path}: label column {column} not found")]
    MissingLabelColumn { path: PathBuf, column: String },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: unsupported format version {found} (expected {expected})")]
    Version { path: PathBuf, found: u32, expected: u32 },
    #[error("{0}")]
    Manifest(String),
    #[error("{0}")]
    Usage(String),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl Error {
    /// Short stable tag for the `error[<code>]` prefix printed by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Core(_) => "data",
            Self::Io { .. } => "io",
            Self::Csv { .. } | Self::Cell { .. } | Self::Ragged { .. } | Self::MissingLabelColumn { .. } => "csv",
            Self::Json { .. } | Self::Version { .. } => "format",
            Self::Manifest(_) => "manifest",
            Self::Usage(_) => "usage",
            Self::ThreadPool(_) => "threads",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
