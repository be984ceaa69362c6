//! Versioned JSON documents for models, search reports and configurations.

use std::fs;
use std::path::Path;

use kernelcast_core::ensemble::Ensemble;
use kernelcast_core::modelsel::{Configuration, KmsModel, SearchReport};
use kernelcast_core::Matrix;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// A fitted single pipeline or a voting ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    Kms(Box<KmsModel>),
    Ensemble(Ensemble),
}

impl Model {
    pub fn label_names(&self) -> &[String] {
        match self {
            Self::Kms(m) => &m.label_names,
            Self::Ensemble(e) => e.members.first().map_or(&[], |m| &m.label_names),
        }
    }

    pub fn predict(&self, x: &Matrix) -> Result<Vec<usize>> {
        Ok(match self {
            Self::Kms(m) => m.predict(x)?,
            Self::Ensemble(e) => e.predict(x)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub version: u32,
    #[serde(flatten)]
    pub model: Model,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: u32,
    pub report: SearchReport,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u32,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize to JSON");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_json(value)).map_err(|e| Error::io(path, e))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|source| Error::Json { path: path.to_path_buf(), source })
}

/// Parses a versioned document, checking the version before the payload.
fn read_versioned<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    let probe: VersionProbe = parse(path, &text)?;
    if probe.version != FORMAT_VERSION {
        return Err(Error::Version { path: path.to_path_buf(), found: probe.version, expected: FORMAT_VERSION });
    }
    parse(path, &text)
}

pub fn write_model(path: impl AsRef<Path>, model: &Model) -> Result<()> {
    write_json(path, &ModelDocument { version: FORMAT_VERSION, model: model.clone() })
}

pub fn read_model(path: impl AsRef<Path>) -> Result<Model> {
    Ok(read_versioned::<ModelDocument>(path.as_ref())?.model)
}

pub fn write_report(path: impl AsRef<Path>, report: &SearchReport) -> Result<()> {
    write_json(path, &ReportDocument { version: FORMAT_VERSION, report: report.clone() })
}

pub fn read_report(path: impl AsRef<Path>) -> Result<SearchReport> {
    Ok(read_versioned::<ReportDocument>(path.as_ref())?.report)
}

/// A bare configuration object, as found in a report's `evaluated` entries.
pub fn read_config(path: impl AsRef<Path>) -> Result<Configuration> {
    let path = path.as_ref();
    let config: Configuration = parse(path, &read_text(path)?)?;
    config.validate()?;
    Ok(config)
}
