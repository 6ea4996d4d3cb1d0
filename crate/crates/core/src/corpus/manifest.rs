use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProgramEntry {
    pub id: String,
    pub path: PathBuf,
    pub programmer: String,
    pub application: String,
}

/// One grid worth of programs, plus free-form metadata carried into reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub name: String,
    pub entries: Vec<ProgramEntry>,
    pub metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    name: Option<String>,
    programs: Vec<ProgramEntry>,
    #[serde(default)]
    metadata: BTreeMap<String, serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    name: Option<String>,
    programs: Option<Vec<ProgramEntry>>,
    datasets: Option<Vec<RawDataset>>,
    #[serde(default)]
    metadata: BTreeMap<String, serde_json::Value>,
}

fn json_error(e: serde_json::Error) -> CorpusError {
    CorpusError::Manifest {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn resolve(entries: Vec<ProgramEntry>, base_dir: &Path) -> Result<Vec<ProgramEntry>, CorpusError> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(entries.len());
    for (index, mut entry) in entries.into_iter().enumerate() {
        if !seen.insert(entry.id.clone()) {
            return Err(CorpusError::DuplicateId { id: entry.id, index });
        }
        if entry.path.is_relative() {
            entry.path = base_dir.join(&entry.path);
        }
        if let Err(e) = File::open(&entry.path) {
            return Err(CorpusError::UnreadablePath {
                id: entry.id,
                path: entry.path.display().to_string(),
                message: e.to_string(),
            });
        }
        out.push(entry);
    }
    Ok(out)
}

/// Loads every dataset of a manifest document.
///
/// Accepts either `{"programs": [...]}` (one dataset) or
/// `{"datasets": [{"name": ..., "programs": [...]}, ...]}`. Relative paths
/// are resolved against `base_dir` and must be readable. Unnamed datasets
/// are called `default_name`, or `default_name-<k>` inside a list.
pub fn load_datasets(
    bytes: &[u8],
    base_dir: &Path,
    default_name: &str,
) -> Result<Vec<Dataset>, CorpusError> {
    let raw: RawManifest = serde_json::from_slice(bytes).map_err(json_error)?;
    match (raw.programs, raw.datasets) {
        (Some(programs), None) => Ok(vec![Dataset {
            name: raw.name.unwrap_or_else(|| default_name.to_string()),
            entries: resolve(programs, base_dir)?,
            metadata: raw.metadata,
        }]),
        (None, Some(datasets)) => datasets
            .into_iter()
            .enumerate()
            .map(|(k, ds)| {
                let mut metadata = raw.metadata.clone();
                metadata.extend(ds.metadata);
                Ok(Dataset {
                    name: ds.name.unwrap_or_else(|| format!("{default_name}-{}", k + 1)),
                    entries: resolve(ds.programs, base_dir)?,
                    metadata,
                })
            })
            .collect(),
        (Some(_), Some(_)) => Err(CorpusError::Manifest {
            line: 1,
            column: 1,
            message: "manifest has both `programs` and `datasets`".to_string(),
        }),
        (None, None) => Err(CorpusError::Manifest {
            line: 1,
            column: 1,
            message: "missing field `programs`".to_string(),
        }),
    }
}

/// Loads a single-dataset manifest into its program entries.
pub fn load_manifest(bytes: &[u8], base_dir: &Path) -> Result<Vec<ProgramEntry>, CorpusError> {
    let mut datasets = load_datasets(bytes, base_dir, "dataset")?;
    if datasets.len() != 1 {
        return Err(CorpusError::Manifest {
            line: 1,
            column: 1,
            message: format!("expected one dataset, found {}", datasets.len()),
        });
    }
    Ok(datasets.remove(0).entries)
}
