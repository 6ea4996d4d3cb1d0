//! Cross-compilation of C sources to assembly with a content-hash cache.

use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::process::Command;

use asmsim_core::corpus::{load_datasets, Dataset};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ToolConfig;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Compiled,
    Cached,
}

/// Cache key: compiler template, flags, source extension and contents.
pub fn cache_key(config: &ToolConfig, source_path: &Path, source: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(b"asmsim-compile-v1\0");
    h.update(config.compiler_command.as_deref().unwrap_or_default().as_bytes());
    h.update(b"\0");
    for f in &config.compiler_flags {
        h.update(f.as_bytes());
        h.update(b"\0");
    }
    let ext = source_path.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_default();
    h.update(ext.as_bytes());
    h.update(b"\0");
    h.update(source);
    hex::encode(h.finalize())
}

fn compiler_program(config: &ToolConfig) -> String {
    config
        .compiler_argv(Path::new(""), Path::new(""))
        .into_iter()
        .next()
        .unwrap_or_default()
}

fn compiler_version(program: &str) -> Result<String, CliError> {
    match Command::new(program).arg("--version").output() {
        Ok(out) => Ok(String::from_utf8_lossy(&out.stdout)
            .lines()
            .next()
            .unwrap_or("unknown")
            .trim()
            .to_string()),
        Err(e) if e.kind() == ErrorKind::NotFound => Err(CliError::Compiler {
            entity: program.to_string(),
            message: format!("compiler `{program}` not found"),
        }),
        Err(e) => Err(CliError::Compiler {
            entity: program.to_string(),
            message: format!("cannot run `{program}`: {e}"),
        }),
    }
}

fn compile_one(
    config: &ToolConfig,
    cache_dir: &Path,
    source_path: &Path,
) -> Result<(PathBuf, Outcome), String> {
    let source = std::fs::read(source_path).map_err(|e| e.to_string())?;
    let target = cache_dir.join(format!("{}.s", cache_key(config, source_path, &source)));
    if target.is_file() {
        return Ok((target, Outcome::Cached));
    }
    let partial = target.with_extension(format!("s.partial{}", std::process::id()));
    let argv = config.compiler_argv(source_path, &partial);
    let output = Command::new(&argv[0])
        .args(&argv[1..])
        .output()
        .map_err(|e| format!("cannot run `{}`: {e}", argv[0]))?;
    if !output.status.success() || !partial.is_file() {
        let _ = std::fs::remove_file(&partial);
        let stderr = String::from_utf8_lossy(&output.stderr);
        let first = stderr.lines().next().unwrap_or("").trim();
        return Err(format!("compiler exited with {}: {first}", output.status));
    }
    std::fs::rename(&partial, &target).map_err(|e| e.to_string())?;
    Ok((target, Outcome::Compiled))
}

fn manifest_value(datasets: &[Dataset]) -> Value {
    let dataset_value = |d: &Dataset| {
        json!({
            "name": d.name,
            "metadata": d.metadata,
            "programs": d.entries,
        })
    };
    match datasets {
        [one] => dataset_value(one),
        many => json!({ "datasets": many.iter().map(dataset_value).collect::<Vec<_>>() }),
    }
}

pub fn run(
    manifest: &Path,
    output: Option<&Path>,
    cache_dir: Option<&Path>,
    config: &ToolConfig,
) -> Result<(), CliError> {
    let bytes = std::fs::read(manifest).map_err(|e| CliError::io(manifest, e))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let stem = manifest.file_stem().map_or("corpus".into(), |s| s.to_string_lossy().into_owned());
    let mut datasets = load_datasets(&bytes, base, &stem).map_err(|source| CliError::Corpus {
        entity: manifest.display().to_string(),
        source,
    })?;

    let program = compiler_program(config);
    let version = compiler_version(&program)?;

    let cache_dir = cache_dir
        .map(Path::to_path_buf)
        .or_else(|| config.cache_dir.clone())
        .unwrap_or_else(|| base.join(".asmsim-cache"));
    std::fs::create_dir_all(&cache_dir).map_err(|e| CliError::io(&cache_dir, e))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Usage { message: e.to_string() })?;

    let mut compiled = 0;
    let mut cached = 0;
    let mut failures = Vec::new();
    let mut total = 0;
    for dataset in &mut datasets {
        let results: Vec<_> = pool.install(|| {
            dataset
                .entries
                .par_iter()
                .map(|e| compile_one(config, &cache_dir, &e.path))
                .collect()
        });
        let mut kept = Vec::new();
        for (mut entry, result) in dataset.entries.drain(..).zip(results) {
            total += 1;
            match result {
                Ok((path, outcome)) => {
                    match outcome {
                        Outcome::Compiled => compiled += 1,
                        Outcome::Cached => cached += 1,
                    }
                    entry.path = std::path::absolute(&path).unwrap_or(path);
                    kept.push(entry);
                }
                Err(message) => failures.push(format!("{}/{}: {message}", dataset.name, entry.id)),
            }
        }
        dataset.entries = kept;
        dataset.metadata.insert(
            "compiler".to_string(),
            json!({
                "command": config.compiler_command,
                "flags": config.compiler_flags,
                "version": version,
            }),
        );
    }

    let out_path = output.map(Path::to_path_buf).unwrap_or_else(|| base.join(format!("{stem}.asm.json")));
    let mut text = serde_json::to_string_pretty(&manifest_value(&datasets)).expect("manifest serializes");
    text.push('\n');
    std::fs::write(&out_path, text).map_err(|e| CliError::io(&out_path, e))?;

    eprintln!(
        "compiled {compiled}, cached {cached}, failed {} of {total}",
        failures.len()
    );
    for f in &failures {
        eprintln!("failed: {f}");
    }
    println!("{}", out_path.display());

    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Compiler {
            entity: manifest.display().to_string(),
            message: format!("{} of {total} programs failed to compile", failures.len()),
        })
    }
}
