use serde::Serialize;

use super::study::{normalized, Normalized, NormalizedIndices, StudyReport};
use super::CorpusError;
use crate::metrics::MetricKind;
use crate::scalar::Scalar;

/// Arithmetic mean, summed in index order.
pub fn mean<F: Scalar>(values: &[F], what: &'static str) -> Result<F, CorpusError> {
    if values.is_empty() {
        return Err(CorpusError::EmptyInput(what));
    }
    let sum = values.iter().fold(F::zero(), |acc, &v| acc + v);
    Ok(sum / F::from_count(values.len() as u128))
}

/// Mean of the pair values of one subset.
pub fn subset_mean<F: Scalar>(pair_values: &[F]) -> Result<F, CorpusError> {
    mean(pair_values, "pair values")
}

/// Mean of the subset means of one grouping.
pub fn group_mean<F: Scalar>(subset_means: &[F]) -> Result<F, CorpusError> {
    mean(subset_means, "subset means")
}

/// Totally-different value of a dataset: the mean over its TD groupings.
/// Every grouping has the same number of pairs, so this equals the pooled
/// mean of all TD pair values.
pub fn td_aggregate<F: Scalar>(grouping_means: &[F]) -> Result<F, CorpusError> {
    mean(grouping_means, "totally-different grouping means")
}

pub fn cross_dataset_mean<F: Scalar>(per_dataset: &[F]) -> Result<F, CorpusError> {
    mean(per_dataset, "per-dataset values")
}

/// Rescales a group value so the totally-different baseline maps to 1 and
/// larger always means more alike: `group / td` for similarities,
/// `td / group` for distances.
pub fn normalize<F: Scalar>(group: F, td: F, kind: MetricKind) -> Result<F, CorpusError> {
    let check = |v: F, what: &'static str| {
        if v > F::zero() {
            Ok(())
        } else {
            Err(CorpusError::NonPositive {
                what,
                value: v.to_f64_lossy(),
            })
        }
    };
    check(group, "group value")?;
    check(td, "totally-different value")?;
    Ok(if kind.is_distance() { td / group } else { group / td })
}

/// One row of a summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow<F> {
    pub label: String,
    pub programmer_specific: F,
    pub application_specific: F,
    /// One value per totally-different grouping.
    pub totally_different: Vec<F>,
    pub td_mean: F,
}

/// Dataset rows of one metric, with their average and normalized rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryTable<F> {
    pub kind: MetricKind,
    pub rows: Vec<SummaryRow<F>>,
    /// Present when the block holds more than one dataset.
    pub average: Option<SummaryRow<F>>,
    pub normalized: NormalizedIndices<F>,
}

/// Consecutive datasets sharing grid shape and strides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryBlock<F> {
    pub datasets: Vec<String>,
    pub size: (usize, usize),
    pub strides: Vec<usize>,
    pub tables: Vec<SummaryTable<F>>,
}

fn average_row<F: Scalar>(rows: &[SummaryRow<F>]) -> Result<SummaryRow<F>, CorpusError> {
    let column = |f: &dyn Fn(&SummaryRow<F>) -> F| -> Result<F, CorpusError> {
        cross_dataset_mean(&rows.iter().map(f).collect::<Vec<_>>())
    };
    let n_td = rows[0].totally_different.len();
    Ok(SummaryRow {
        label: "Average".to_string(),
        programmer_specific: column(&|r| r.programmer_specific)?,
        application_specific: column(&|r| r.application_specific)?,
        totally_different: (0..n_td)
            .map(|i| column(&|r| r.totally_different[i]))
            .collect::<Result<_, _>>()?,
        td_mean: column(&|r| r.td_mean)?,
    })
}

fn table_for<F: Scalar>(reports: &[&StudyReport<F>], kind: MetricKind) -> Result<SummaryTable<F>, CorpusError> {
    let rows: Vec<SummaryRow<F>> = reports
        .iter()
        .map(|r| {
            let m = r.metric(kind);
            SummaryRow {
                label: r.dataset.clone(),
                programmer_specific: m.programmer_specific_mean(),
                application_specific: m.application_specific_mean(),
                totally_different: m.totally_different().map(|g| g.group_mean).collect(),
                td_mean: m.td_mean,
            }
        })
        .collect();
    let average = if rows.len() > 1 {
        Some(average_row(&rows)?)
    } else {
        None
    };
    let basis = average.as_ref().unwrap_or(&rows[0]);
    let normalized = NormalizedIndices {
        programmer_specific: normalized(basis.programmer_specific, basis.td_mean, kind),
        application_specific: normalized(basis.application_specific, basis.td_mean, kind),
        totally_different: normalized(basis.td_mean, basis.td_mean, kind),
    };
    Ok(SummaryTable {
        kind,
        rows,
        average,
        normalized,
    })
}

/// Groups consecutive reports with the same grid size and strides into
/// blocks and builds the per-metric summary tables of each block.
pub fn summarize<F: Scalar>(reports: &[StudyReport<F>]) -> Result<Vec<SummaryBlock<F>>, CorpusError> {
    let mut blocks: Vec<Vec<&StudyReport<F>>> = Vec::new();
    for r in reports {
        let same_shape = blocks.last().is_some_and(|b| {
            let first = b[0];
            first.programmers.len() == r.programmers.len()
                && first.applications.len() == r.applications.len()
                && first.strides == r.strides
        });
        if same_shape {
            blocks.last_mut().unwrap().push(r);
        } else {
            blocks.push(vec![r]);
        }
    }
    blocks
        .into_iter()
        .map(|block| {
            Ok(SummaryBlock {
                datasets: block.iter().map(|r| r.dataset.clone()).collect(),
                size: (block[0].applications.len(), block[0].programmers.len()),
                strides: block[0].strides.clone(),
                tables: MetricKind::ALL
                    .iter()
                    .map(|&k| table_for(&block, k))
                    .collect::<Result<_, _>>()?,
            })
        })
        .collect()
}

impl<F: Scalar> SummaryTable<F> {
    pub fn normalized_row(&self) -> [&Normalized<F>; 3] {
        [
            &self.normalized.programmer_specific,
            &self.normalized.application_specific,
            &self.normalized.totally_different,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn means() {
        assert_eq!(subset_mean(&[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert!((group_mean(&[0.2, 0.4]).unwrap() - 0.3f64).abs() < 1e-15);
        assert_eq!(td_aggregate(&[0.5, 0.5, 0.5]).unwrap(), 0.5);
        assert_eq!(
            subset_mean::<f64>(&[]).unwrap_err(),
            CorpusError::EmptyInput("pair values")
        );
        assert!(cross_dataset_mean::<f64>(&[]).is_err());
        assert!(td_aggregate::<f64>(&[]).is_err());
    }

    #[test]
    fn normalization_direction() {
        assert!((normalize(0.6, 0.3, MetricKind::Jaccard).unwrap() - 2.0f64).abs() < 1e-15);
        assert!((normalize(0.6, 0.3, MetricKind::Cosine).unwrap() - 2.0f64).abs() < 1e-15);
        assert!((normalize(4.0, 8.0, MetricKind::Euclidean2).unwrap() - 2.0f64).abs() < 1e-15);
        assert!((normalize(4.0, 8.0, MetricKind::Euclidean3).unwrap() - 2.0f64).abs() < 1e-15);
        for kind in MetricKind::ALL {
            assert_eq!(normalize(0.7, 0.7, kind).unwrap(), 1.0);
        }
    }

    #[test]
    fn normalization_rejects_non_positive() {
        assert!(matches!(
            normalize(0.0, 8.0, MetricKind::Euclidean2),
            Err(CorpusError::NonPositive { what: "group value", .. })
        ));
        assert!(matches!(
            normalize(0.5, -1.0, MetricKind::Jaccard),
            Err(CorpusError::NonPositive { what: "totally-different value", .. })
        ));
    }
}
