use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::aggregate::{group_mean, normalize, subset_mean, td_aggregate};
use super::grid::{default_strides, enumerate_subsets, CorpusGrid, GroupingScheme, Subset};
use super::CorpusError;
use crate::features::{build_universe_for, PatternUniverse, ProgramFeatures};
use crate::metrics::{cosine, euclidean_pattern_distance, jaccard, MetricError, MetricKind};
use crate::scalar::Scalar;

/// Features of every program in a dataset plus the dataset-wide pattern
/// universes.
#[derive(Debug, Clone)]
pub struct DatasetFeatures {
    pub by_id: BTreeMap<String, ProgramFeatures>,
    pub universe2: PatternUniverse,
    pub universe3: PatternUniverse,
}

impl DatasetFeatures {
    pub fn new(by_id: BTreeMap<String, ProgramFeatures>) -> Self {
        let sets2: Vec<_> = by_id.values().map(|f| &f.patterns2).collect();
        let sets3: Vec<_> = by_id.values().map(|f| &f.patterns3).collect();
        DatasetFeatures {
            universe2: build_universe_for(2, &sets2).expect("bigram sets share n = 2"),
            universe3: build_universe_for(3, &sets3).expect("trigram sets share n = 3"),
            by_id,
        }
    }

    fn get(&self, id: &str) -> Result<&ProgramFeatures, CorpusError> {
        self.by_id
            .get(id)
            .ok_or_else(|| CorpusError::MissingFeatures { id: id.to_string() })
    }

    /// One metric evaluated on two programs.
    pub fn compare<F: Scalar>(&self, kind: MetricKind, a: &str, b: &str) -> Result<F, CorpusError> {
        let (fa, fb) = (self.get(a)?, self.get(b)?);
        let value: Result<F, MetricError> = match kind {
            MetricKind::Jaccard => Ok(jaccard(&fa.existence, &fb.existence).value),
            MetricKind::Cosine => cosine(&fa.frequency, &fb.frequency).map(|v| v.value),
            MetricKind::Euclidean2 => {
                euclidean_pattern_distance(&fa.patterns2, &fb.patterns2, &self.universe2)
                    .map(|v| v.value)
            }
            MetricKind::Euclidean3 => {
                euclidean_pattern_distance(&fa.patterns3, &fb.patterns3, &self.universe3)
                    .map(|v| v.value)
            }
        };
        value.map_err(|source| CorpusError::Metric {
            kind,
            a: a.to_string(),
            b: b.to_string(),
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairValue<F> {
    pub a: String,
    pub b: String,
    pub value: F,
}

fn pairs_of(subset: &Subset) -> Vec<(&str, &str)> {
    let m = &subset.members;
    let mut out = Vec::with_capacity(m.len() * m.len().saturating_sub(1) / 2);
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            out.push((m[i].id.as_str(), m[j].id.as_str()));
        }
    }
    out
}

/// Metric values for every unordered pair of the subset, ordered by member
/// index `(i, j)` with `i < j`.
pub fn pairwise_values<F: Scalar>(
    subset: &Subset,
    kind: MetricKind,
    features: &DatasetFeatures,
) -> Result<Vec<PairValue<F>>, CorpusError> {
    pairs_of(subset)
        .into_iter()
        .map(|(a, b)| {
            Ok(PairValue {
                a: a.to_string(),
                b: b.to_string(),
                value: features.compare(kind, a, b)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    /// Totally-different strides; `None` picks [`default_strides`].
    pub strides: Option<Vec<usize>>,
    pub jobs: usize,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            strides: None,
            jobs: 1,
        }
    }
}

/// A normalized index, or the reason it could not be formed.
#[derive(Debug, Clone, PartialEq)]
pub enum Normalized<F> {
    Value(F),
    Degenerate(String),
}

impl<F: Copy> Normalized<F> {
    pub fn value(&self) -> Option<F> {
        match self {
            Normalized::Value(v) => Some(*v),
            Normalized::Degenerate(_) => None,
        }
    }
}

impl<F: Serialize> Serialize for Normalized<F> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(1))?;
        match self {
            Normalized::Value(v) => map.serialize_entry("value", v)?,
            Normalized::Degenerate(why) => map.serialize_entry("degenerate", why)?,
        }
        map.end()
    }
}

pub(crate) fn normalized<F: Scalar>(group: F, td: F, kind: MetricKind) -> Normalized<F> {
    match normalize(group, td, kind) {
        Ok(v) => Normalized::Value(v),
        Err(e) => Normalized::Degenerate(e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedIndices<F> {
    pub programmer_specific: Normalized<F>,
    pub application_specific: Normalized<F>,
    pub totally_different: Normalized<F>,
}

impl<F: Scalar> NormalizedIndices<F> {
    pub(crate) fn compute(ps: F, app: F, td: F, kind: MetricKind) -> Self {
        NormalizedIndices {
            programmer_specific: normalized(ps, td, kind),
            application_specific: normalized(app, td, kind),
            totally_different: normalized(td, td, kind),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetSummary<F> {
    pub id: String,
    pub members: Vec<String>,
    pub pairs: Vec<PairValue<F>>,
    pub mean: F,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupingReport<F> {
    pub scheme: GroupingScheme,
    pub subsets: Vec<SubsetSummary<F>>,
    pub group_mean: F,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport<F> {
    pub kind: MetricKind,
    /// Programmer specific, application specific, then one entry per stride.
    pub groupings: Vec<GroupingReport<F>>,
    pub td_mean: F,
    pub normalized: NormalizedIndices<F>,
}

impl<F: Scalar> MetricReport<F> {
    pub fn grouping(&self, scheme: GroupingScheme) -> Option<&GroupingReport<F>> {
        self.groupings.iter().find(|g| g.scheme == scheme)
    }

    pub fn totally_different(&self) -> impl Iterator<Item = &GroupingReport<F>> {
        self.groupings.iter().filter(|g| g.scheme.is_totally_different())
    }

    pub fn programmer_specific_mean(&self) -> F {
        self.grouping(GroupingScheme::ProgrammerSpecific)
            .expect("report has a programmer-specific grouping")
            .group_mean
    }

    pub fn application_specific_mean(&self) -> F {
        self.grouping(GroupingScheme::ApplicationSpecific)
            .expect("report has an application-specific grouping")
            .group_mean
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport<F> {
    pub dataset: String,
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub programmers: Vec<String>,
    pub applications: Vec<String>,
    pub strides: Vec<usize>,
    pub metrics: Vec<MetricReport<F>>,
}

impl<F: Scalar> StudyReport<F> {
    pub fn metric(&self, kind: MetricKind) -> &MetricReport<F> {
        self.metrics
            .iter()
            .find(|m| m.kind == kind)
            .expect("report covers every metric kind")
    }
}

fn resolve_strides(grid: &CorpusGrid, config: &StudyConfig) -> Result<Vec<usize>, CorpusError> {
    let n = grid.square_size().ok_or(CorpusError::NotSquare {
        programmers: grid.programmers.len(),
        applications: grid.applications.len(),
    })?;
    let strides = config.strides.clone().unwrap_or_else(|| default_strides(n));
    if strides.is_empty() {
        return Err(CorpusError::EmptyInput("totally-different strides"));
    }
    Ok(strides)
}

/// Runs every grouping scheme under all four metrics.
///
/// Pair values are computed on up to `config.jobs` threads and assembled
/// in a fixed order, so the report does not depend on the worker count.
pub fn run_study<F: Scalar>(
    grid: &CorpusGrid,
    features: &DatasetFeatures,
    config: &StudyConfig,
) -> Result<StudyReport<F>, CorpusError> {
    for entry in grid.entries() {
        if features.get(&entry.id)?.frequency.is_empty() {
            return Err(CorpusError::EmptyProgram {
                id: entry.id.clone(),
            });
        }
    }
    let strides = resolve_strides(grid, config)?;
    let mut schemes = vec![
        GroupingScheme::ProgrammerSpecific,
        GroupingScheme::ApplicationSpecific,
    ];
    schemes.extend(strides.iter().map(|&stride| GroupingScheme::TotallyDifferent { stride }));
    let groupings: Vec<Vec<Subset>> = schemes
        .iter()
        .map(|&s| enumerate_subsets(grid, s))
        .collect::<Result<_, _>>()?;

    let tasks: Vec<(MetricKind, usize, usize, &str, &str)> = MetricKind::ALL
        .iter()
        .flat_map(|&kind| {
            groupings.iter().enumerate().flat_map(move |(g, subsets)| {
                subsets.iter().enumerate().flat_map(move |(s, subset)| {
                    pairs_of(subset).into_iter().map(move |(a, b)| (kind, g, s, a, b))
                })
            })
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| CorpusError::Pool(e.to_string()))?;
    let values: Vec<Result<F, CorpusError>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(kind, _, _, a, b)| features.compare::<F>(kind, a, b))
            .collect()
    });

    let mut values = tasks.iter().zip(values);
    let mut metrics = Vec::with_capacity(MetricKind::ALL.len());
    for kind in MetricKind::ALL {
        let mut reports = Vec::with_capacity(schemes.len());
        for (scheme, subsets) in schemes.iter().zip(&groupings) {
            let mut summaries = Vec::with_capacity(subsets.len());
            for subset in subsets {
                let n_pairs = subset.members.len() * (subset.members.len() - 1) / 2;
                let pairs = values
                    .by_ref()
                    .take(n_pairs)
                    .map(|(&(_, _, _, a, b), v)| {
                        Ok(PairValue {
                            a: a.to_string(),
                            b: b.to_string(),
                            value: v?,
                        })
                    })
                    .collect::<Result<Vec<_>, CorpusError>>()?;
                let pair_values: Vec<F> = pairs.iter().map(|p| p.value).collect();
                summaries.push(SubsetSummary {
                    id: subset.id.clone(),
                    members: subset.members.iter().map(|m| m.id.clone()).collect(),
                    mean: subset_mean(&pair_values)?,
                    pairs,
                });
            }
            let means: Vec<F> = summaries.iter().map(|s| s.mean).collect();
            reports.push(GroupingReport {
                scheme: *scheme,
                group_mean: group_mean(&means)?,
                subsets: summaries,
            });
        }
        let td_means: Vec<F> = reports
            .iter()
            .filter(|r| r.scheme.is_totally_different())
            .map(|r| r.group_mean)
            .collect();
        let td_mean = td_aggregate(&td_means)?;
        let normalized = NormalizedIndices::compute(reports[0].group_mean, reports[1].group_mean, td_mean, kind);
        metrics.push(MetricReport {
            kind,
            groupings: reports,
            td_mean,
            normalized,
        });
    }

    Ok(StudyReport {
        dataset: String::new(),
        metadata: BTreeMap::new(),
        programmers: grid.programmers.clone(),
        applications: grid.applications.clone(),
        strides,
        metrics,
    })
}
