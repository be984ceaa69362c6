//! CSV datasets and prediction files.

use std::fmt;
use std::fs::File;
use std::path::Path;
use std::str::FromStr;

use kernelcast_core::data::Dataset;
use kernelcast_core::Matrix;

use crate::{Error, Result};

/// Which column holds the class label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum LabelColumn {
    #[default]
    Last,
    /// Zero-based position.
    Index(usize),
    /// Header name; needs a header row.
    Name(String),
}

impl From<&str> for LabelColumn {
    /// `last`, a zero-based index, or a header name.
    fn from(s: &str) -> Self {
        if s == "last" {
            Self::Last
        } else if let Ok(i) = s.parse() {
            Self::Index(i)
        } else {
            Self::Name(s.to_string())
        }
    }
}

impl FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(s.into())
    }
}

impl fmt::Display for LabelColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Last => f.write_str("last"),
            Self::Index(i) => write!(f, "{i}"),
            Self::Name(n) => f.write_str(n),
        }
    }
}

/// Raw contents of a numeric CSV with an optional string column split off.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub features: Matrix,
    pub labels: Option<Vec<String>>,
    /// Feature column names (header names, or positions without a header).
    pub feature_names: Vec<String>,
}

fn resolve(path: &Path, label: &LabelColumn, header: Option<&csv::StringRecord>, width: usize) -> Result<usize> {
    let missing = || Error::MissingLabelColumn { path: path.to_path_buf(), column: label.to_string() };
    match label {
        LabelColumn::Last => width.checked_sub(1).ok_or_else(missing),
        LabelColumn::Index(i) => (*i < width).then_some(*i).ok_or_else(missing),
        LabelColumn::Name(n) => header.and_then(|h| h.iter().position(|c| c == n)).ok_or_else(missing),
    }
}

/// Reads every row; all cells except the label column must be finite numbers.
pub fn read_table(path: impl AsRef<Path>, label: Option<&LabelColumn>, has_header: bool) -> Result<Table> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let header = if has_header { Some(reader.headers().map_err(csv_err)?.clone()) } else { None };
    let mut width = header.as_ref().map(|h| h.len());
    let mut label_idx = match (label, &header) {
        (Some(l), Some(h)) => Some(resolve(path, l, Some(h), h.len())?),
        _ => None,
    };
    let mut data = Vec::new();
    let mut labels = Vec::new();
    let mut rows = 0;
    // data rows are numbered from 1, after the header if any
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let row = r + 1;
        let w = *width.get_or_insert(record.len());
        if record.len() != w {
            return Err(Error::Ragged { path: path.to_path_buf(), row, expected: w, found: record.len() });
        }
        if let (Some(l), None) = (label, label_idx) {
            label_idx = Some(resolve(path, l, None, w)?);
        }
        for (c, cell) in record.iter().enumerate() {
            if Some(c) == label_idx {
                labels.push(cell.to_string());
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => data.push(v),
                _ => {
                    let column = header.as_ref().and_then(|h| h.get(c)).map_or_else(|| c.to_string(), str::to_string);
                    return Err(Error::Cell { path: path.to_path_buf(), row, column, value: cell.to_string() });
                }
            }
        }
        rows += 1;
    }
    let width = width.unwrap_or(0);
    let feature_names: Vec<String> = (0..width)
        .filter(|&c| Some(c) != label_idx)
        .map(|c| header.as_ref().and_then(|h| h.get(c)).map_or_else(|| c.to_string(), str::to_string))
        .collect();
    Ok(Table {
        features: Matrix::new(rows, feature_names.len(), data)?,
        labels: label.map(|_| labels),
        feature_names,
    })
}

/// Loads a labeled dataset. Labels are encoded by first appearance.
pub fn load_csv(path: impl AsRef<Path>, label_column: &LabelColumn, has_header: bool) -> Result<Dataset> {
    let table = read_table(path, Some(label_column), has_header)?;
    let labels = table.labels.unwrap_or_default();
    let rows: Vec<&[f64]> = table.features.iter_rows().collect();
    Ok(Dataset::from_labeled_rows(&rows, &labels)?)
}

/// One label per line under a `label` header.
pub fn write_labels(path: impl AsRef<Path>, labels: &[String]) -> Result<()> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(["label"]).map_err(csv_err)?;
    for l in labels {
        w.write_record([l]).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes a numeric matrix with the given header.
pub fn write_matrix(path: impl AsRef<Path>, header: &[String], m: &Matrix) -> Result<()> {
    let path = path.as_ref();
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in m.iter_rows() {
        w.write_record(row.iter().map(f64::to_string)).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
