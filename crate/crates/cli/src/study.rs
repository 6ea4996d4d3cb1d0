use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use asmsim_core::corpus::{self, load_datasets, render, run_study, summarize, DatasetFeatures};
use asmsim_core::{ProgramFeatures, StudyConfig, StudyReport};
use rayon::prelude::*;

use crate::config::{OutputFormat, ToolConfig};
use crate::error::CliError;
use crate::programs::{load_features, write_stdout};

fn corpus_error(entity: &str) -> impl Fn(asmsim_core::CorpusError) -> CliError + '_ {
    move |source| CliError::Corpus {
        entity: entity.to_string(),
        source,
    }
}

fn study_dataset(
    dataset: corpus::Dataset,
    pool: &rayon::ThreadPool,
    config: &ToolConfig,
) -> Result<StudyReport, CliError> {
    let grid = corpus::build_grid(&dataset.entries).map_err(corpus_error(&dataset.name))?;
    let entries: Vec<_> = grid.entries().collect();
    let parsed: Vec<Result<ProgramFeatures, CliError>> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| load_features(&e.path, config))
            .collect()
    });
    let mut by_id = BTreeMap::new();
    for (entry, features) in entries.iter().zip(parsed) {
        by_id.insert(entry.id.clone(), features?);
    }
    let features = DatasetFeatures::new(by_id);
    let study_config = StudyConfig {
        strides: config.strides.clone(),
        jobs: config.jobs,
    };
    let mut report: StudyReport =
        run_study(&grid, &features, &study_config).map_err(corpus_error(&dataset.name))?;
    report.dataset = dataset.name;
    report.metadata = dataset.metadata;
    Ok(report)
}

pub fn run(manifests: &[PathBuf], out: Option<&Path>, config: &ToolConfig) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Usage { message: e.to_string() })?;

    let mut reports = Vec::new();
    for manifest in manifests {
        let bytes = std::fs::read(manifest).map_err(|e| CliError::io(manifest, e))?;
        let base = manifest.parent().unwrap_or(Path::new("."));
        let stem = manifest.file_stem().map_or("dataset".into(), |s| s.to_string_lossy().into_owned());
        let entity = manifest.display().to_string();
        let datasets = load_datasets(&bytes, base, &stem).map_err(corpus_error(&entity))?;
        for dataset in datasets {
            reports.push(study_dataset(dataset, &pool, config)?);
        }
    }
    let summary = summarize(&reports).map_err(corpus_error("summary"))?;
    let text = match config.output_format {
        OutputFormat::Json => render::to_json(&reports, &summary),
        OutputFormat::Csv => render::to_csv(&reports, &summary),
        OutputFormat::Markdown => render::to_markdown(&reports, &summary),
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => write_stdout(&text),
    }
}
