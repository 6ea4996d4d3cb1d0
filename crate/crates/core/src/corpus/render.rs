//! Text renderings of study reports.
//!
//! JSON carries every pair value. CSV has one row per metric × grouping ×
//! subset plus summary rows, at full precision. Markdown mirrors the
//! classic summary-table layout: datasets as rows, groupings as columns,
//! then Average and Normalized rows, rounded for reading.

use std::fmt::Write;

use serde::Serialize;

use super::aggregate::{SummaryBlock, SummaryRow, SummaryTable};
use super::study::{Normalized, StudyReport};
use crate::metrics::MetricKind;
use crate::scalar::Scalar;

const NORMALIZED_PRECISION: usize = 3;

#[derive(Serialize)]
struct JsonDocument<'a, F> {
    datasets: &'a [StudyReport<F>],
    summary: &'a [SummaryBlock<F>],
}

pub fn to_json<F: Scalar>(reports: &[StudyReport<F>], summary: &[SummaryBlock<F>]) -> String {
    let doc = JsonDocument {
        datasets: reports,
        summary,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn fmt_value<F: Scalar>(v: F, kind: MetricKind) -> String {
    format!("{:.*}", kind.display_precision(), v.to_f64_lossy())
}

fn fmt_normalized<F: Scalar>(n: &Normalized<F>) -> String {
    match n {
        Normalized::Value(v) => format!("{:.*}", NORMALIZED_PRECISION, v.to_f64_lossy()),
        Normalized::Degenerate(_) => "degenerate".to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_normalized<F: Scalar>(n: &Normalized<F>) -> String {
    match n {
        Normalized::Value(v) => v.to_string(),
        Normalized::Degenerate(_) => "degenerate".to_string(),
    }
}

fn block_label(block: &SummaryBlock<impl Scalar>) -> String {
    match block.datasets.as_slice() {
        [only] => only.clone(),
        [first, .., last] => format!("average({first}..{last})"),
        [] => String::new(),
    }
}

/// Columns: `dataset,metric,grouping,row,subset,pairs,value`.
///
/// `row` is `subset` for per-subset means, `group_mean`, `td_mean` or
/// `normalized`. Cross-dataset rows use `average(<first>..<last>)` as the
/// dataset name.
pub fn to_csv<F: Scalar>(reports: &[StudyReport<F>], summary: &[SummaryBlock<F>]) -> String {
    let mut out = String::from("dataset,metric,grouping,row,subset,pairs,value\n");
    let mut line = |fields: [&str; 7]| {
        let joined: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
        out.push_str(&joined.join(","));
        out.push('\n');
    };
    for r in reports {
        for m in &r.metrics {
            let kind = m.kind.as_str();
            for g in &m.groupings {
                let key = g.scheme.key();
                let mut total = 0;
                for s in &g.subsets {
                    total += s.pairs.len();
                    line([&r.dataset, kind, &key, "subset", &s.id, &s.pairs.len().to_string(), &s.mean.to_string()]);
                }
                line([&r.dataset, kind, &key, "group_mean", "", &total.to_string(), &g.group_mean.to_string()]);
            }
            line([&r.dataset, kind, "totally_different", "td_mean", "", "", &m.td_mean.to_string()]);
            let n = &m.normalized;
            line([&r.dataset, kind, "programmer_specific", "normalized", "", "", &csv_normalized(&n.programmer_specific)]);
            line([&r.dataset, kind, "application_specific", "normalized", "", "", &csv_normalized(&n.application_specific)]);
            line([&r.dataset, kind, "totally_different", "normalized", "", "", &csv_normalized(&n.totally_different)]);
        }
    }
    for block in summary.iter().filter(|b| b.datasets.len() > 1) {
        let label = block_label(block);
        for t in &block.tables {
            let kind = t.kind.as_str();
            if let Some(avg) = &t.average {
                line([&label, kind, "programmer_specific", "group_mean", "", "", &avg.programmer_specific.to_string()]);
                line([&label, kind, "application_specific", "group_mean", "", "", &avg.application_specific.to_string()]);
                for (stride, v) in block.strides.iter().zip(&avg.totally_different) {
                    line([&label, kind, &format!("totally_different_s{stride}"), "group_mean", "", "", &v.to_string()]);
                }
                line([&label, kind, "totally_different", "td_mean", "", "", &avg.td_mean.to_string()]);
            }
            let n = &t.normalized;
            line([&label, kind, "programmer_specific", "normalized", "", "", &csv_normalized(&n.programmer_specific)]);
            line([&label, kind, "application_specific", "normalized", "", "", &csv_normalized(&n.application_specific)]);
            line([&label, kind, "totally_different", "normalized", "", "", &csv_normalized(&n.totally_different)]);
        }
    }
    out
}

fn md_row(out: &mut String, cells: &[String]) {
    out.push('|');
    for c in cells {
        out.push(' ');
        out.push_str(c);
        out.push_str(" |");
    }
    out.push('\n');
}

fn md_value_row<F: Scalar>(row: &SummaryRow<F>, kind: MetricKind, td_columns: usize) -> Vec<String> {
    let mut cells = vec![
        row.label.clone(),
        fmt_value(row.programmer_specific, kind),
        fmt_value(row.application_specific, kind),
    ];
    for i in 0..td_columns {
        cells.push(row.totally_different.get(i).map_or(String::new(), |&v| fmt_value(v, kind)));
    }
    cells.push(fmt_value(row.td_mean, kind));
    cells
}

fn md_table<F: Scalar>(out: &mut String, kind: MetricKind, tables: &[&SummaryTable<F>], td_columns: usize) {
    let mut header = vec![
        "Data Set".to_string(),
        "Programmer Specific".to_string(),
        "Application Specific".to_string(),
    ];
    header.extend((1..=td_columns).map(|i| format!("Totally Different {i}")));
    header.push("Totally Different".to_string());
    md_row(out, &header);
    let mut rule = vec!["---".to_string()];
    rule.extend(std::iter::repeat_n("---:".to_string(), header.len() - 1));
    md_row(out, &rule);

    for t in tables {
        for row in &t.rows {
            md_row(out, &md_value_row(row, kind, td_columns));
        }
        if let Some(avg) = &t.average {
            md_row(out, &md_value_row(avg, kind, td_columns));
        }
        let [ps, app, td] = t.normalized_row();
        let mut cells = vec!["Normalized".to_string(), fmt_normalized(ps), fmt_normalized(app)];
        cells.extend(std::iter::repeat_n(String::new(), td_columns));
        cells.push(fmt_normalized(td));
        md_row(out, &cells);
    }
}

pub fn to_markdown<F: Scalar>(reports: &[StudyReport<F>], summary: &[SummaryBlock<F>]) -> String {
    let mut out = String::from("# Program similarity study\n\n");
    md_row(
        &mut out,
        &["Dataset", "Programmers", "Applications", "Totally different strides"].map(String::from),
    );
    md_row(&mut out, &["---", "---:", "---:", "---"].map(String::from));
    for r in reports {
        let strides: Vec<String> = r.strides.iter().map(|s| s.to_string()).collect();
        md_row(
            &mut out,
            &[
                r.dataset.clone(),
                r.programmers.len().to_string(),
                r.applications.len().to_string(),
                strides.join(", "),
            ],
        );
    }
    let with_metadata: Vec<_> = reports.iter().filter(|r| !r.metadata.is_empty()).collect();
    if !with_metadata.is_empty() {
        out.push('\n');
        for r in with_metadata {
            for (k, v) in &r.metadata {
                let _ = writeln!(out, "- {} {}: {}", r.dataset, k, v);
            }
        }
    }

    let td_columns = summary.iter().map(|b| b.strides.len()).max().unwrap_or(0);
    for kind in MetricKind::ALL {
        let _ = write!(out, "\n## {}\n\n", kind.title());
        let tables: Vec<&SummaryTable<F>> = summary
            .iter()
            .filter_map(|b| b.tables.iter().find(|t| t.kind == kind))
            .collect();
        md_table(&mut out, kind, &tables, td_columns);
    }
    out
}
