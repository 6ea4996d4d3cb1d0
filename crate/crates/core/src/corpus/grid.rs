use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{CorpusError, ProgramEntry};

/// Programs laid out by application (rows) and programmer (columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusGrid {
    pub programmers: Vec<String>,
    pub applications: Vec<String>,
    /// `cells[application][programmer]`
    cells: Vec<Vec<ProgramEntry>>,
}

impl CorpusGrid {
    pub fn cell(&self, application: usize, programmer: usize) -> &ProgramEntry {
        &self.cells[application][programmer]
    }

    pub fn entries(&self) -> impl Iterator<Item = &ProgramEntry> {
        self.cells.iter().flatten()
    }

    /// Side length when the grid is square.
    pub fn square_size(&self) -> Option<usize> {
        (self.programmers.len() == self.applications.len()).then_some(self.programmers.len())
    }
}

fn first_appearance<'a>(labels: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for l in labels {
        if !out.iter().any(|x| x == l) {
            out.push(l.to_string());
        }
    }
    out
}

/// Arranges entries into a complete grid. Label order follows first
/// appearance in `entries`; it affects display only.
pub fn build_grid(entries: &[ProgramEntry]) -> Result<CorpusGrid, CorpusError> {
    let programmers = first_appearance(entries.iter().map(|e| e.programmer.as_str()));
    let applications = first_appearance(entries.iter().map(|e| e.application.as_str()));

    let mut slots: BTreeMap<(usize, usize), Vec<&ProgramEntry>> = BTreeMap::new();
    for e in entries {
        let a = applications.iter().position(|x| *x == e.application).unwrap();
        let p = programmers.iter().position(|x| *x == e.programmer).unwrap();
        slots.entry((a, p)).or_default().push(e);
    }

    let mut missing = Vec::new();
    let mut duplicated = Vec::new();
    for (a, app) in applications.iter().enumerate() {
        for (p, prog) in programmers.iter().enumerate() {
            let coord = (app.clone(), prog.clone());
            match slots.get(&(a, p)).map_or(0, Vec::len) {
                0 => missing.push(coord),
                1 => {}
                _ => duplicated.push(coord),
            }
        }
    }
    if !missing.is_empty() || !duplicated.is_empty() {
        return Err(CorpusError::IncompleteGrid { missing, duplicated });
    }
    if programmers.len() < 2 || applications.len() < 2 {
        return Err(CorpusError::GridTooSmall {
            programmers: programmers.len(),
            applications: applications.len(),
        });
    }

    let cells = (0..applications.len())
        .map(|a| {
            (0..programmers.len())
                .map(|p| slots[&(a, p)][0].clone())
                .collect()
        })
        .collect();
    Ok(CorpusGrid {
        programmers,
        applications,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupingScheme {
    /// One subset per application, spanning all programmers.
    ApplicationSpecific,
    /// One subset per programmer, spanning all applications.
    ProgrammerSpecific,
    /// Cyclic transversals: subset `j` holds cell
    /// `(application i, programmer (j + stride·i) mod N)` for every `i`,
    /// indexing labels in sorted order.
    TotallyDifferent { stride: usize },
}

impl GroupingScheme {
    /// Stable machine-readable key.
    pub fn key(&self) -> String {
        match self {
            GroupingScheme::ApplicationSpecific => "application_specific".to_string(),
            GroupingScheme::ProgrammerSpecific => "programmer_specific".to_string(),
            GroupingScheme::TotallyDifferent { stride } => format!("totally_different_s{stride}"),
        }
    }

    pub fn is_totally_different(&self) -> bool {
        matches!(self, GroupingScheme::TotallyDifferent { .. })
    }
}

impl fmt::Display for GroupingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupingScheme::ApplicationSpecific => f.write_str("Application Specific"),
            GroupingScheme::ProgrammerSpecific => f.write_str("Programmer Specific"),
            GroupingScheme::TotallyDifferent { stride } => {
                write!(f, "Totally Different (stride {stride})")
            }
        }
    }
}

impl Serialize for GroupingScheme {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subset {
    pub scheme: GroupingScheme,
    /// Application label, programmer label, or `t<j>` for a transversal.
    pub id: String,
    pub members: Vec<ProgramEntry>,
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Strides `s` in `1..n` coprime to `n`.
pub fn admissible_strides(n: usize) -> Vec<usize> {
    (1..n).filter(|&s| gcd(s, n) == 1).collect()
}

/// The smallest three admissible strides (fewer when `n` has fewer).
pub fn default_strides(n: usize) -> Vec<usize> {
    admissible_strides(n).into_iter().take(3).collect()
}

/// Label indices in sorted label order.
fn sorted_indices(labels: &[String]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..labels.len()).collect();
    idx.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    idx
}

/// Subsets of one grouping scheme. Labels are walked in sorted order, not
/// grid order, so the subsets (and every sum over them) do not depend on
/// the order of manifest entries.
pub fn enumerate_subsets(grid: &CorpusGrid, scheme: GroupingScheme) -> Result<Vec<Subset>, CorpusError> {
    let progs = sorted_indices(&grid.programmers);
    let apps = sorted_indices(&grid.applications);
    let subsets = match scheme {
        GroupingScheme::ApplicationSpecific => apps
            .iter()
            .map(|&a| Subset {
                scheme,
                id: grid.applications[a].clone(),
                members: progs.iter().map(|&p| grid.cell(a, p).clone()).collect(),
            })
            .collect(),
        GroupingScheme::ProgrammerSpecific => progs
            .iter()
            .map(|&p| Subset {
                scheme,
                id: grid.programmers[p].clone(),
                members: apps.iter().map(|&a| grid.cell(a, p).clone()).collect(),
            })
            .collect(),
        GroupingScheme::TotallyDifferent { stride } => {
            let n = grid.square_size().ok_or(CorpusError::NotSquare {
                programmers: progs.len(),
                applications: apps.len(),
            })?;
            if stride == 0 || stride >= n || gcd(stride, n) != 1 {
                return Err(CorpusError::InvalidStride { stride, n });
            }
            (0..n)
                .map(|j| Subset {
                    scheme,
                    id: format!("t{j}"),
                    members: (0..n)
                        .map(|i| grid.cell(apps[i], progs[(j + stride * i) % n]).clone())
                        .collect(),
                })
                .collect()
        }
    };
    Ok(subsets)
}
