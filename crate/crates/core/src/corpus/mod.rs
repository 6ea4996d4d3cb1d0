//! Programmer × application corpus grids, grouping schemes and the
//! averaging/normalization arithmetic of a grouping study.

mod aggregate;
mod grid;
mod manifest;
pub mod render;
mod study;

use thiserror::Error;

use crate::metrics::{MetricError, MetricKind};

pub use aggregate::{
    cross_dataset_mean, group_mean, mean, normalize, subset_mean, summarize, td_aggregate,
    SummaryBlock, SummaryRow, SummaryTable,
};
pub use grid::{
    admissible_strides, build_grid, default_strides, enumerate_subsets, gcd, CorpusGrid,
    GroupingScheme, Subset,
};
pub use manifest::{load_datasets, load_manifest, Dataset, ProgramEntry};
pub use study::{
    pairwise_values, run_study, DatasetFeatures, GroupingReport, MetricReport, Normalized,
    NormalizedIndices, PairValue, StudyConfig, StudyReport, SubsetSummary,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("manifest line {line}, column {column}: {message}")]
    Manifest {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("program id `{id}` appears more than once (entry {index})")]
    DuplicateId { id: String, index: usize },
    #[error("program `{id}`: cannot read `{path}`: {message}")]
    UnreadablePath {
        id: String,
        path: String,
        message: String,
    },
    #[error("incomplete grid: {}", describe_cells(missing, duplicated))]
    IncompleteGrid {
        /// (application, programmer) cells without a program.
        missing: Vec<(String, String)>,
        /// (application, programmer) cells with more than one program.
        duplicated: Vec<(String, String)>,
    },
    #[error("grid needs at least 2 programmers and 2 applications, got {programmers}×{applications}")]
    GridTooSmall {
        programmers: usize,
        applications: usize,
    },
    #[error("totally-different groupings need a square grid, got {programmers} programmers × {applications} applications")]
    NotSquare {
        programmers: usize,
        applications: usize,
    },
    #[error("stride {stride} is not coprime to {n} or out of range 1..{n}")]
    InvalidStride { stride: usize, n: usize },
    #[error("cannot average an empty list of {0}")]
    EmptyInput(&'static str),
    #[error("normalization needs positive values, got {what} = {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("program `{id}` has no instructions")]
    EmptyProgram { id: String },
    #[error("no features for program `{id}`")]
    MissingFeatures { id: String },
    #[error("{kind} for pair ({a}, {b}): {source}")]
    Metric {
        kind: MetricKind,
        a: String,
        b: String,
        source: MetricError,
    },
    #[error("worker pool: {0}")]
    Pool(String),
}

fn describe_cells(missing: &[(String, String)], duplicated: &[(String, String)]) -> String {
    let fmt = |cells: &[(String, String)]| {
        cells
            .iter()
            .map(|(a, p)| format!("({a}, {p})"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut parts = Vec::new();
    if !missing.is_empty() {
        parts.push(format!("missing {}", fmt(missing)));
    }
    if !duplicated.is_empty() {
        parts.push(format!("duplicated {}", fmt(duplicated)));
    }
    parts.join("; ")
}
