use std::path::{Path, PathBuf};

use crate::config::ToolConfig;
use crate::error::CliError;
use crate::programs::{load_features, write_stdout};

/// Expands directories to the files under them matching `pattern`, in
/// lexicographic order. Plain file arguments are kept as given.
pub fn expand_inputs(inputs: &[PathBuf], pattern: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for input in inputs {
        if !input.is_dir() {
            files.push(input.clone());
            continue;
        }
        let full = input.join(pattern);
        let paths = glob::glob(&full.to_string_lossy()).map_err(|e| CliError::Usage {
            message: format!("bad --glob pattern `{pattern}`: {e}"),
        })?;
        let mut matched: Vec<PathBuf> = paths
            .filter_map(Result::ok)
            .filter(|p| p.is_file())
            .collect();
        matched.sort();
        files.extend(matched);
    }
    Ok(files)
}

fn dump_name(path: &Path, index: usize) -> String {
    let stem = path
        .file_stem()
        .map_or_else(|| format!("input{index}"), |s| s.to_string_lossy().into_owned());
    format!("{stem}.json")
}

pub fn run(
    inputs: &[PathBuf],
    pattern: &str,
    out_dir: Option<&Path>,
    config: &ToolConfig,
) -> Result<(), CliError> {
    let files = expand_inputs(inputs, pattern)?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut out = String::new();
    for (i, file) in files.iter().enumerate() {
        let dump = load_features(file, config)?.to_dump();
        match out_dir {
            Some(dir) => {
                let target = dir.join(dump_name(file, i));
                let mut text = serde_json::to_string_pretty(&dump).expect("dump serializes");
                text.push('\n');
                std::fs::write(&target, text).map_err(|e| CliError::io(&target, e))?;
            }
            None => {
                out.push_str(&serde_json::to_string(&dump).expect("dump serializes"));
                out.push('\n');
            }
        }
    }
    write_stdout(&out)
}
