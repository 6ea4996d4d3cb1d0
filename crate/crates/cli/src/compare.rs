use std::collections::BTreeMap;
use std::path::Path;

use asmsim_core::features::build_universe_for;
use asmsim_core::metrics::{cosine, euclidean_pattern_distance, jaccard};
use asmsim_core::{MetricError, MetricKind, ProgramFeatures};
use clap::ValueEnum;

use crate::config::{OutputFormat, ToolConfig};
use crate::error::CliError;
use crate::programs::{load_features, write_stdout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricChoice {
    Jaccard,
    Cosine,
    Ngram2,
    Ngram3,
    All,
}

impl MetricChoice {
    fn kinds(self) -> Vec<MetricKind> {
        match self {
            MetricChoice::Jaccard => vec![MetricKind::Jaccard],
            MetricChoice::Cosine => vec![MetricKind::Cosine],
            MetricChoice::Ngram2 => vec![MetricKind::Euclidean2],
            MetricChoice::Ngram3 => vec![MetricKind::Euclidean3],
            MetricChoice::All => MetricKind::ALL.to_vec(),
        }
    }
}

fn label(kind: MetricKind) -> &'static str {
    match kind {
        MetricKind::Euclidean2 => "ngram2",
        MetricKind::Euclidean3 => "ngram3",
        other => other.as_str(),
    }
}

/// Compares two programs; the pattern universe is the union of their
/// patterns.
pub fn compare(
    a: &ProgramFeatures,
    b: &ProgramFeatures,
    kind: MetricKind,
) -> Result<f64, MetricError> {
    Ok(match kind {
        MetricKind::Jaccard => jaccard::<f64>(&a.existence, &b.existence).value,
        MetricKind::Cosine => cosine::<f64>(&a.frequency, &b.frequency)?.value,
        MetricKind::Euclidean2 => {
            let u = build_universe_for(2, &[&a.patterns2, &b.patterns2])?;
            euclidean_pattern_distance::<f64>(&a.patterns2, &b.patterns2, &u)?.value
        }
        MetricKind::Euclidean3 => {
            let u = build_universe_for(3, &[&a.patterns3, &b.patterns3])?;
            euclidean_pattern_distance::<f64>(&a.patterns3, &b.patterns3, &u)?.value
        }
    })
}

pub fn run(a: &Path, b: &Path, metric: MetricChoice, config: &ToolConfig) -> Result<(), CliError> {
    let fa = load_features(a, config)?;
    let fb = load_features(b, config)?;
    let entity = format!("{}~{}", a.display(), b.display());
    let mut values = BTreeMap::new();
    let mut ordered = Vec::new();
    for kind in metric.kinds() {
        let v = compare(&fa, &fb, kind).map_err(|source| CliError::Metric {
            entity: entity.clone(),
            source,
        })?;
        values.insert(label(kind), v);
        ordered.push((kind, v));
    }
    let mut out = String::new();
    match config.output_format {
        OutputFormat::Json => {
            out = serde_json::to_string(&values).expect("values serialize");
            out.push('\n');
        }
        OutputFormat::Csv => {
            out.push_str("metric,value\n");
            for (kind, v) in ordered {
                out.push_str(&format!("{},{}\n", label(kind), v));
            }
        }
        OutputFormat::Markdown => {
            for (kind, v) in ordered {
                out.push_str(&format!("{} {:.*}\n", label(kind), kind.display_precision(), v));
            }
        }
    }
    write_stdout(&out)
}
