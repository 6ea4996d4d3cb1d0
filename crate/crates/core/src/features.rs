//! Per-program feature families: mnemonic existence sets, frequency
//! vectors and n-gram pattern sets over basic blocks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asm_parser::{self, AssemblyProgram, BasicBlock, ParserConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeatureError {
    #[error("pattern length must be at least 2, got {0}")]
    InvalidPatternLength(usize),
    #[error("pattern sets of different lengths ({expected} and {found}) cannot share a universe")]
    MixedPatternLength { expected: usize, found: usize },
    #[error("pattern {0} is not part of the universe")]
    NotInUniverse(NGramPattern),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MnemonicSet {
    pub members: BTreeSet<String>,
}

impl MnemonicSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, mnemonic: &str) -> bool {
        self.members.contains(mnemonic)
    }
}

impl<S: Into<String>> FromIterator<S> for MnemonicSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        MnemonicSet {
            members: iter.into_iter().map(Into::into).collect(),
        }
    }
}

/// Occurrence counts. Absent mnemonics count zero; stored counts are >= 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrequencyVector {
    pub counts: BTreeMap<String, u64>,
}

impl FrequencyVector {
    pub fn get(&self, mnemonic: &str) -> u64 {
        self.counts.get(mnemonic).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn keys(&self) -> MnemonicSet {
        self.counts.keys().cloned().collect()
    }

    pub fn add(&mut self, mnemonic: &str, count: u64) {
        if count > 0 {
            *self.counts.entry(mnemonic.to_string()).or_insert(0) += count;
        }
    }
}

impl<S: AsRef<str>> FromIterator<S> for FrequencyVector {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut fv = FrequencyVector::default();
        for m in iter {
            fv.add(m.as_ref(), 1);
        }
        fv
    }
}

/// An ordered tuple of consecutive mnemonics.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NGramPattern {
    pub mnemonics: Vec<String>,
}

impl NGramPattern {
    pub fn new<S: Into<String>>(mnemonics: impl IntoIterator<Item = S>) -> Self {
        NGramPattern {
            mnemonics: mnemonics.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.mnemonics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mnemonics.is_empty()
    }
}

impl fmt::Display for NGramPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.mnemonics.join(","))
    }
}

/// Presence-only set of patterns of a single length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternSet {
    pub n: usize,
    pub patterns: BTreeSet<NGramPattern>,
}

impl PatternSet {
    pub fn empty(n: usize) -> Self {
        PatternSet {
            n,
            patterns: BTreeSet::new(),
        }
    }

    /// Builds a set from explicit patterns; all of them must have length `n`.
    pub fn from_patterns(
        n: usize,
        patterns: impl IntoIterator<Item = NGramPattern>,
    ) -> Result<Self, FeatureError> {
        let mut set = PatternSet::empty(n);
        for p in patterns {
            if p.len() != n {
                return Err(FeatureError::MixedPatternLength {
                    expected: n,
                    found: p.len(),
                });
            }
            set.patterns.insert(p);
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn contains(&self, p: &NGramPattern) -> bool {
        self.patterns.contains(p)
    }
}

/// Sorted union of the patterns of a dataset; fixes the layout of the
/// boolean pattern vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternUniverse {
    pub n: usize,
    pub ordered: Vec<NGramPattern>,
    index: HashMap<NGramPattern, usize>,
}

impl PatternUniverse {
    pub fn len(&self) -> usize {
        self.ordered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordered.is_empty()
    }

    pub fn position(&self, p: &NGramPattern) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Universe over an explicit pattern list (sorted and deduplicated).
    pub fn from_patterns(
        n: usize,
        patterns: impl IntoIterator<Item = NGramPattern>,
    ) -> Result<Self, FeatureError> {
        let set = PatternSet::from_patterns(n, patterns)?;
        build_universe_with_n(n, [&set])
    }
}

/// Everything the four metrics need about one program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramFeatures {
    pub existence: MnemonicSet,
    pub frequency: FrequencyVector,
    pub patterns2: PatternSet,
    pub patterns3: PatternSet,
}

/// How instruction windows are formed for pattern extraction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NgramMode {
    /// Windows never cross basic-block boundaries.
    #[default]
    Blocks,
    /// The listing is one straight-line sequence.
    Linear,
}

/// JSON feature dump layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDump {
    pub mnemonics: Vec<String>,
    pub freq: BTreeMap<String, u64>,
    pub ngrams2: Vec<Vec<String>>,
    pub ngrams3: Vec<Vec<String>>,
}

impl ProgramFeatures {
    pub fn extract(program: &AssemblyProgram, config: &ParserConfig, mode: NgramMode) -> Self {
        let blocks = match mode {
            NgramMode::Blocks => asm_parser::segment_basic_blocks(program, config),
            NgramMode::Linear => asm_parser::single_block(program),
        };
        ProgramFeatures {
            existence: existence_set(program),
            frequency: frequency_vector(program),
            patterns2: ngrams(&blocks, 2),
            patterns3: ngrams(&blocks, 3),
        }
    }

    pub fn patterns(&self, n: usize) -> Option<&PatternSet> {
        match n {
            2 => Some(&self.patterns2),
            3 => Some(&self.patterns3),
            _ => None,
        }
    }

    pub fn to_dump(&self) -> FeatureDump {
        let flatten = |set: &PatternSet| {
            set.patterns
                .iter()
                .map(|p| p.mnemonics.clone())
                .collect::<Vec<_>>()
        };
        FeatureDump {
            mnemonics: self.existence.members.iter().cloned().collect(),
            freq: self.frequency.counts.clone(),
            ngrams2: flatten(&self.patterns2),
            ngrams3: flatten(&self.patterns3),
        }
    }
}

pub fn existence_set(program: &AssemblyProgram) -> MnemonicSet {
    program.mnemonics().collect()
}

pub fn frequency_vector(program: &AssemblyProgram) -> FrequencyVector {
    program.mnemonics().collect()
}

fn ngrams(blocks: &[BasicBlock], n: usize) -> PatternSet {
    let mut set = PatternSet::empty(n);
    for block in blocks {
        for window in block.instructions.windows(n) {
            set.patterns
                .insert(NGramPattern::new(window.iter().map(|i| i.mnemonic.as_str())));
        }
    }
    set
}

/// All length-`n` windows taken inside each block, duplicates collapsed.
pub fn extract_ngrams(blocks: &[BasicBlock], n: usize) -> Result<PatternSet, FeatureError> {
    if n < 2 {
        return Err(FeatureError::InvalidPatternLength(n));
    }
    Ok(ngrams(blocks, n))
}

fn build_universe_with_n<'a>(
    n: usize,
    sets: impl IntoIterator<Item = &'a PatternSet>,
) -> Result<PatternUniverse, FeatureError> {
    let mut all = BTreeSet::new();
    for set in sets {
        if set.n != n {
            return Err(FeatureError::MixedPatternLength {
                expected: n,
                found: set.n,
            });
        }
        all.extend(set.patterns.iter().cloned());
    }
    let ordered: Vec<NGramPattern> = all.into_iter().collect();
    let index = ordered
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    Ok(PatternUniverse { n, ordered, index })
}

/// Sorted union of pattern sets. An empty input gives an empty universe
/// with `n = 0`.
pub fn build_universe(sets: &[PatternSet]) -> Result<PatternUniverse, FeatureError> {
    let n = sets.first().map_or(0, |s| s.n);
    build_universe_with_n(n, sets)
}

/// Like [`build_universe`] but with an explicit pattern length, so an empty
/// input still yields a universe of the right `n`.
pub fn build_universe_for(n: usize, sets: &[&PatternSet]) -> Result<PatternUniverse, FeatureError> {
    build_universe_with_n(n, sets.iter().copied())
}

pub fn to_boolean_vector(
    set: &PatternSet,
    universe: &PatternUniverse,
) -> Result<Vec<bool>, FeatureError> {
    if !set.is_empty() && set.n != universe.n {
        return Err(FeatureError::MixedPatternLength {
            expected: universe.n,
            found: set.n,
        });
    }
    let mut v = vec![false; universe.len()];
    for p in &set.patterns {
        let pos = universe
            .position(p)
            .ok_or_else(|| FeatureError::NotInUniverse(p.clone()))?;
        v[pos] = true;
    }
    Ok(v)
}

/// Inverse of [`to_boolean_vector`].
pub fn from_boolean_vector(bits: &[bool], universe: &PatternUniverse) -> PatternSet {
    PatternSet {
        n: universe.n,
        patterns: bits
            .iter()
            .zip(&universe.ordered)
            .filter(|(b, _)| **b)
            .map(|(_, p)| p.clone())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asm_parser::{parse_assembly, segment_basic_blocks, Instruction};

    fn program(mnemonics: &[&str]) -> AssemblyProgram {
        AssemblyProgram {
            instructions: mnemonics
                .iter()
                .enumerate()
                .map(|(i, m)| Instruction {
                    mnemonic: m.to_string(),
                    operands_raw: String::new(),
                    line_no: i + 1,
                })
                .collect(),
            ..Default::default()
        }
    }

    fn block(mnemonics: &[&str], start: usize) -> BasicBlock {
        let p = program(mnemonics);
        BasicBlock {
            instructions: p.instructions,
            start_index: start,
            end_index: start + mnemonics.len() - 1,
        }
    }

    fn pat(ms: &[&str]) -> NGramPattern {
        NGramPattern::new(ms.iter().copied())
    }

    #[test]
    fn existence_examples() {
        assert_eq!(
            existence_set(&program(&["mov", "mov", "add"])),
            MnemonicSet::from_iter(["mov", "add"])
        );
        assert!(existence_set(&program(&[])).is_empty());
        assert_eq!(
            existence_set(&program(&["push", "mov", "bl", "mov", "pop"])),
            MnemonicSet::from_iter(["push", "mov", "bl", "pop"])
        );
    }

    #[test]
    fn frequency_examples() {
        let fv = frequency_vector(&program(&["mov", "mov", "add"]));
        assert_eq!(fv.counts, BTreeMap::from([("mov".into(), 2), ("add".into(), 1)]));
        assert!(frequency_vector(&program(&[])).is_empty());
        let fv = frequency_vector(&program(&["b", "b", "b", "b"]));
        assert_eq!(fv.get("b"), 4);
        assert_eq!(fv.get("mov"), 0);
    }

    #[test]
    fn bigrams_single_block() {
        let set = extract_ngrams(&[block(&["mov", "add", "sub"], 0)], 2).unwrap();
        let expected = BTreeSet::from([pat(&["mov", "add"]), pat(&["add", "sub"])]);
        assert_eq!(set.patterns, expected);
    }

    #[test]
    fn bigrams_confined_to_blocks() {
        let blocks = [block(&["mov", "beq"], 0), block(&["add"], 2), block(&["sub"], 3)];
        let set = extract_ngrams(&blocks, 2).unwrap();
        assert_eq!(set.patterns, BTreeSet::from([pat(&["mov", "beq"])]));
    }

    #[test]
    fn trigrams_collapse_duplicates() {
        let set = extract_ngrams(&[block(&["mov", "add", "sub", "mov", "add"], 0)], 3).unwrap();
        let expected = BTreeSet::from([
            pat(&["mov", "add", "sub"]),
            pat(&["add", "sub", "mov"]),
            pat(&["sub", "mov", "add"]),
        ]);
        assert_eq!(set.patterns, expected);
    }

    #[test]
    fn short_blocks_give_nothing() {
        let set = extract_ngrams(&[block(&["mov", "add"], 0)], 3).unwrap();
        assert!(set.is_empty());
        assert_eq!(extract_ngrams(&[], 2).unwrap().n, 2);
        assert_eq!(
            extract_ngrams(&[], 1).unwrap_err(),
            FeatureError::InvalidPatternLength(1)
        );
    }

    #[test]
    fn universe_is_sorted_union() {
        let a = PatternSet::from_patterns(2, [pat(&["a", "b"])]).unwrap();
        let b = PatternSet::from_patterns(2, [pat(&["a", "b"]), pat(&["b", "c"])]).unwrap();
        let u = build_universe(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(u.ordered, [pat(&["a", "b"]), pat(&["b", "c"])]);

        let c = PatternSet::from_patterns(2, [pat(&["b", "c"])]).unwrap();
        let u1 = build_universe(&[c.clone(), a.clone()]).unwrap();
        let u2 = build_universe(&[a.clone(), c]).unwrap();
        assert_eq!(u1, u2);
        assert_eq!(u1.ordered, [pat(&["a", "b"]), pat(&["b", "c"])]);

        assert!(build_universe(&[]).unwrap().is_empty());
        let tri = PatternSet::empty(3);
        assert!(matches!(
            build_universe(&[a, tri]),
            Err(FeatureError::MixedPatternLength { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn boolean_vectors() {
        let u = PatternUniverse::from_patterns(
            2,
            [pat(&["a", "b"]), pat(&["b", "c"]), pat(&["c", "d"])],
        )
        .unwrap();
        assert_eq!(to_boolean_vector(&PatternSet::empty(2), &u).unwrap(), [false; 3]);

        let u2 = PatternUniverse::from_patterns(2, [pat(&["a", "b"]), pat(&["b", "c"])]).unwrap();
        let s = PatternSet::from_patterns(2, [pat(&["b", "c"])]).unwrap();
        assert_eq!(to_boolean_vector(&s, &u2).unwrap(), [false, true]);

        let all = PatternSet::from_patterns(2, u.ordered.clone()).unwrap();
        assert_eq!(to_boolean_vector(&all, &u).unwrap(), [true; 3]);

        let outside = PatternSet::from_patterns(2, [pat(&["x", "y"])]).unwrap();
        assert!(matches!(
            to_boolean_vector(&outside, &u),
            Err(FeatureError::NotInUniverse(_))
        ));
    }

    #[test]
    fn program_features_are_consistent() {
        let cfg = ParserConfig::default();
        let p = parse_assembly(
            "main:\n\tpush {r7, lr}\n\tmovs r0, #0\n.L2:\n\tadds r0, #1\n\tcmp r0, #9\n\tble .L2\n\tpop {r7, pc}\n",
            &cfg,
        )
        .unwrap();
        let f = ProgramFeatures::extract(&p, &cfg, NgramMode::Blocks);
        assert_eq!(f.existence, f.frequency.keys());
        assert_eq!(f.frequency.total(), p.len() as u64);
        let blocks = segment_basic_blocks(&p, &cfg);
        assert_eq!(blocks.len(), 3);
        assert_eq!(
            f.patterns2.patterns,
            BTreeSet::from([
                pat(&["push", "movs"]),
                pat(&["adds", "cmp"]),
                pat(&["cmp", "ble"]),
            ])
        );
        let linear = ProgramFeatures::extract(&p, &cfg, NgramMode::Linear);
        assert!(linear.patterns2.contains(&pat(&["movs", "adds"])));
        assert!(linear.patterns2.contains(&pat(&["ble", "pop"])));
    }

    #[test]
    fn dump_field_order_is_stable() {
        let cfg = ParserConfig::default();
        let p = parse_assembly("\tmovs r0, #0\n\tmovs r1, #1\n\tbx lr\n", &cfg).unwrap();
        let f = ProgramFeatures::extract(&p, &cfg, NgramMode::Blocks);
        let json = serde_json::to_string(&f.to_dump()).unwrap();
        assert_eq!(
            json,
            r#"{"mnemonics":["bx","movs"],"freq":{"bx":1,"movs":2},"ngrams2":[["movs","bx"],["movs","movs"]],"ngrams3":[["movs","movs","bx"]]}"#
        );
    }
}
