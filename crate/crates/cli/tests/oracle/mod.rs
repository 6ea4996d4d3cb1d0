//! Reference implementations for the acceptance suite. Written for
//! obviousness, not speed, and sharing no code with the library.

use std::collections::{BTreeMap, BTreeSet};

const BRANCHES: [&str; 6] = ["b", "bl", "blx", "bx", "cbz", "cbnz"];
const CONDS: [&str; 17] = [
    "eq", "ne", "cs", "hs", "cc", "lo", "mi", "pl", "vs", "vc", "hi", "ls", "ge", "lt", "gt", "le", "al",
];

pub struct Listing {
    /// (mnemonic, operands)
    pub insns: Vec<(String, String)>,
    pub labels: BTreeMap<String, usize>,
}

fn is_label_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_.$".contains(c))
}

pub fn parse(text: &str) -> Listing {
    let mut insns = Vec::new();
    let mut labels = BTreeMap::new();
    for raw in text.split(['\n', '\r']) {
        let mut line = raw;
        for marker in ["@", "//"] {
            if let Some(i) = line.find(marker) {
                line = &line[..i];
            }
        }
        let mut line = line.trim();
        while let Some(colon) = line.find(':') {
            let name = &line[..colon];
            if !is_label_name(name) {
                break;
            }
            labels.entry(name.to_string()).or_insert(insns.len());
            line = line[colon + 1..].trim();
        }
        if line.is_empty() || line.starts_with('.') {
            continue;
        }
        let (m, ops) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let mut m = m.to_lowercase();
        if m.ends_with(".n") || m.ends_with(".w") {
            m.truncate(m.len() - 2);
        }
        insns.push((m, ops.trim().to_string()));
    }
    Listing { insns, labels }
}

fn tokens(ops: &str) -> impl Iterator<Item = &str> {
    ops.split(|c: char| !(c.is_ascii_alphanumeric() || "_.$".contains(c)))
        .filter(|t| !t.is_empty())
}

pub fn is_branch(m: &str, ops: &str) -> bool {
    for b in BRANCHES {
        if m == b || CONDS.iter().any(|c| m == format!("{b}{c}")) {
            return true;
        }
    }
    m == "pop" && tokens(ops).any(|t| t.eq_ignore_ascii_case("pc"))
}

pub fn leaders(l: &Listing) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    if l.insns.is_empty() {
        return out;
    }
    out.insert(0);
    for (i, (m, ops)) in l.insns.iter().enumerate() {
        if is_branch(m, ops) {
            out.insert(i + 1);
            for t in tokens(ops) {
                if let Some(&target) = l.labels.get(t) {
                    out.insert(target);
                }
            }
        }
    }
    out.retain(|&i| i < l.insns.len());
    out
}

/// Block ranges as inclusive `(start, end)` pairs.
pub fn blocks(l: &Listing) -> Vec<(usize, usize)> {
    let starts: Vec<usize> = leaders(l).into_iter().collect();
    starts
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, starts.get(k + 1).map_or(l.insns.len(), |&e| e) - 1))
        .collect()
}

/// Every window of `n` instructions not crossing a leader.
pub fn ngrams(l: &Listing, n: usize) -> BTreeSet<Vec<String>> {
    let lead = leaders(l);
    let mut out = BTreeSet::new();
    if l.insns.len() < n {
        return out;
    }
    for i in 0..=l.insns.len() - n {
        if (i + 1..i + n).any(|k| lead.contains(&k)) {
            continue;
        }
        out.insert(l.insns[i..i + n].iter().map(|(m, _)| m.clone()).collect());
    }
    out
}

pub fn counts(l: &Listing) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for (m, _) in &l.insns {
        *out.entry(m.clone()).or_insert(0.0) += 1.0;
    }
    out
}

pub fn jaccard<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

pub fn cosine(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> f64 {
    let vocab: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for k in vocab {
        let x = a.get(k).copied().unwrap_or(0.0);
        let y = b.get(k).copied().unwrap_or(0.0);
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    dot / (na.sqrt() * nb.sqrt())
}

/// Euclidean distance between 0/1 vectors materialized over `universe`.
pub fn euclidean(a: &BTreeSet<Vec<String>>, b: &BTreeSet<Vec<String>>, universe: &BTreeSet<Vec<String>>) -> f64 {
    let vx: Vec<f64> = universe.iter().map(|p| if a.contains(p) { 1.0 } else { 0.0 }).collect();
    let vy: Vec<f64> = universe.iter().map(|p| if b.contains(p) { 1.0 } else { 0.0 }).collect();
    vx.iter().zip(&vy).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Grouping values of an N×N corpus: `cells[app][prog]` holds program
/// listings with labels already in sorted order.
pub struct StudyValues {
    /// metric name → (ps, as, [td per stride], td mean)
    pub rows: BTreeMap<&'static str, (f64, f64, Vec<f64>, f64)>,
}

pub fn study(cells: &[Vec<Listing>], strides: &[usize]) -> StudyValues {
    let n = cells.len();
    let flat: Vec<&Listing> = cells.iter().flatten().collect();
    let u2: BTreeSet<Vec<String>> = flat.iter().flat_map(|l| ngrams(l, 2)).collect();
    let u3: BTreeSet<Vec<String>> = flat.iter().flat_map(|l| ngrams(l, 3)).collect();
    let metric = |name: &str, x: &Listing, y: &Listing| -> f64 {
        match name {
            "jaccard" => {
                let sx: BTreeSet<String> = x.insns.iter().map(|(m, _)| m.clone()).collect();
                let sy: BTreeSet<String> = y.insns.iter().map(|(m, _)| m.clone()).collect();
                jaccard(&sx, &sy)
            }
            "cosine" => cosine(&counts(x), &counts(y)),
            "euclidean2" => euclidean(&ngrams(x, 2), &ngrams(y, 2), &u2),
            _ => euclidean(&ngrams(x, 3), &ngrams(y, 3), &u3),
        }
    };
    let subset_mean = |name: &str, members: &[(usize, usize)]| {
        let mut vals = Vec::new();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let (a1, p1) = members[i];
                let (a2, p2) = members[j];
                vals.push(metric(name, &cells[a1][p1], &cells[a2][p2]));
            }
        }
        mean(&vals)
    };
    let mut rows = BTreeMap::new();
    for name in ["jaccard", "cosine", "euclidean2", "euclidean3"] {
        let ps: Vec<f64> = (0..n)
            .map(|p| subset_mean(name, &(0..n).map(|a| (a, p)).collect::<Vec<_>>()))
            .collect();
        let as_: Vec<f64> = (0..n)
            .map(|a| subset_mean(name, &(0..n).map(|p| (a, p)).collect::<Vec<_>>()))
            .collect();
        let td: Vec<f64> = strides
            .iter()
            .map(|&s| {
                let subs: Vec<f64> = (0..n)
                    .map(|j| subset_mean(name, &(0..n).map(|i| (i, (j + s * i) % n)).collect::<Vec<_>>()))
                    .collect();
                mean(&subs)
            })
            .collect();
        let td_mean = mean(&td);
        rows.insert(name, (mean(&ps), mean(&as_), td, td_mean));
    }
    StudyValues { rows }
}
