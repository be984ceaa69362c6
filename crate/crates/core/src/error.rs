use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 rows, found {0}")]
    TooFewRows(usize),
    #[error("need at least 2 classes, found {0}")]
    TooFewClasses(usize),
    #[error("class {class} has {count} samples, need at least {required}")]
    ClassTooSmall { class: usize, count: usize, required: usize },
    #[error("label {label} out of range for {n_classes} classes")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("fraction {0} is outside (0, 1)")]
    InvalidFraction(f64),
    #[error("fold count must be at least 2, got {0}")]
    InvalidFoldCount(usize),
    #[error("requested {requested} references from {available} rows")]
    TooManyReferences { requested: usize, available: usize },
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("kernel scale must be positive and finite, got {0}")]
    InvalidSigma(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("no configuration matches the requested filter")]
    EmptyGrid,
    #[error("every evaluated configuration failed")]
    NoViableConfiguration,
    #[error("need {requested} viable configurations, report has {available}")]
    NotEnoughModels { requested: usize, available: usize },
}
