//! GNU `as` syntax parsing and basic-block segmentation.
//!
//! The parser only understands as much of the syntax as the similarity
//! metrics need: labels, directives, comments and the mnemonic of each
//! instruction. Operands are kept verbatim and are only scanned for label
//! references (branch targets) and for `pc` (return via `pop`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// ARM condition-code suffixes accepted after a branch mnemonic.
pub const CONDITION_CODES: [&str; 17] = [
    "eq", "ne", "cs", "hs", "cc", "lo", "mi", "pl", "vs", "vc", "hi", "ls", "ge", "lt", "gt",
    "le", "al",
];

const WIDTH_QUALIFIERS: [&str; 2] = [".n", ".w"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Unclassifiable { line: usize, message: String },
    #[error("line {line}: label `{label}` already defined")]
    DuplicateLabel { line: usize, label: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Unclassifiable { line, .. } | ParseError::DuplicateLabel { line, .. } => {
                *line
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParserConfig {
    /// Line and inline comment introducers.
    pub comment_markers: Vec<String>,
    /// Control-transfer mnemonics. Each entry also matches itself followed
    /// by one of [`CONDITION_CODES`].
    pub branch_mnemonics: BTreeSet<String>,
    /// Mnemonics that transfer control when `pc` is among their operands.
    pub pc_write_mnemonics: BTreeSet<String>,
    pub strict: bool,
}

impl Default for ParserConfig {
    fn default() -> Self {
        ParserConfig {
            comment_markers: vec!["@".to_string(), "//".to_string()],
            branch_mnemonics: ["b", "bl", "blx", "bx", "cbz", "cbnz"]
                .into_iter()
                .map(String::from)
                .collect(),
            pc_write_mnemonics: BTreeSet::from(["pop".to_string()]),
            strict: false,
        }
    }
}

impl ParserConfig {
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.branch_mnemonics.is_empty() {
            return Err("branch_mnemonics must not be empty".to_string());
        }
        if self.comment_markers.iter().any(|m| m.is_empty()) {
            return Err("comment markers must not be empty strings".to_string());
        }
        Ok(())
    }

    /// Whether `insn` ends a basic block.
    pub fn is_branch(&self, insn: &Instruction) -> bool {
        let m = insn.mnemonic.as_str();
        if self.branch_mnemonics.contains(m) {
            return true;
        }
        let conditional = CONDITION_CODES.iter().any(|cc| {
            m.strip_suffix(cc)
                .is_some_and(|base| self.branch_mnemonics.contains(base))
        });
        if conditional {
            return true;
        }
        self.pc_write_mnemonics.contains(m)
            && operand_tokens(&insn.operands_raw).any(|t| t.eq_ignore_ascii_case("pc"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instruction {
    pub mnemonic: String,
    pub operands_raw: String,
    pub line_no: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub line_no: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyProgram {
    pub instructions: Vec<Instruction>,
    /// Label name to the index of the instruction that follows it. A label
    /// at the end of the listing maps to `instructions.len()`.
    pub labels: BTreeMap<String, usize>,
    pub diagnostics: Vec<Diagnostic>,
}

impl AssemblyProgram {
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn mnemonics(&self) -> impl Iterator<Item = &str> {
        self.instructions.iter().map(|i| i.mnemonic.as_str())
    }

    /// Re-serializes labels and instructions as a plain listing. Comments,
    /// directives and skipped lines are dropped.
    pub fn to_canonical_text(&self) -> String {
        let mut by_index: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (name, &idx) in &self.labels {
            by_index.entry(idx).or_default().push(name);
        }
        let mut out = String::new();
        let emit_labels = |out: &mut String, idx: usize| {
            if let Some(names) = by_index.get(&idx) {
                for name in names {
                    out.push_str(name);
                    out.push_str(":\n");
                }
            }
        };
        for (idx, insn) in self.instructions.iter().enumerate() {
            emit_labels(&mut out, idx);
            out.push('\t');
            out.push_str(&insn.mnemonic);
            if !insn.operands_raw.is_empty() {
                out.push('\t');
                out.push_str(&insn.operands_raw);
            }
            out.push('\n');
        }
        emit_labels(&mut out, self.instructions.len());
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasicBlock {
    pub instructions: Vec<Instruction>,
    pub start_index: usize,
    /// Index of the last instruction (inclusive).
    pub end_index: usize,
}

impl BasicBlock {
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn mnemonics(&self) -> impl Iterator<Item = &str> {
        self.instructions.iter().map(|i| i.mnemonic.as_str())
    }
}

impl fmt::Display for BasicBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..={}]", self.start_index, self.end_index)?;
        for m in self.mnemonics() {
            write!(f, " {m}")?;
        }
        Ok(())
    }
}

fn is_label_start(c: char) -> bool {
    c.is_ascii_alphabetic() || matches!(c, '_' | '.' | '$')
}

fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '$')
}

fn is_valid_label(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if is_label_start(c) => chars.all(is_label_char),
        Some(c) if c.is_ascii_digit() => name.chars().all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

fn is_valid_mnemonic(token: &str) -> bool {
    let mut chars = token.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.'))
}

/// Label-shaped tokens in an operand field.
fn operand_tokens(operands: &str) -> impl Iterator<Item = &str> {
    operands
        .split(|c: char| !is_label_char(c))
        .filter(|t| !t.is_empty())
}

fn strip_comment<'a>(line: &'a str, markers: &[String]) -> &'a str {
    let cut = markers
        .iter()
        .filter_map(|m| line.find(m.as_str()))
        .min()
        .unwrap_or(line.len());
    &line[..cut]
}

fn split_first_token(s: &str) -> (&str, &str) {
    match s.find(char::is_whitespace) {
        Some(pos) => (&s[..pos], s[pos..].trim()),
        None => (s, ""),
    }
}

/// Lowercases a mnemonic and strips a trailing `.n`/`.w` width qualifier.
pub fn normalize_mnemonic(token: &str) -> String {
    let lower = token.to_ascii_lowercase();
    for q in WIDTH_QUALIFIERS {
        if let Some(base) = lower.strip_suffix(q) {
            if !base.is_empty() {
                return base.to_string();
            }
        }
    }
    lower
}

enum LineClass<'a> {
    Empty,
    Directive,
    Label(&'a str, &'a str),
    Instruction(&'a str, &'a str),
}

fn classify(text: &str) -> Result<LineClass<'_>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(LineClass::Empty);
    }
    let (first, rest) = split_first_token(text);
    // `name:` may be glued to the next token (`main:push {r7}`), so split on
    // the first colon rather than on whitespace.
    if let Some(colon) = first.find(':') {
        let name = &text[..colon];
        if !is_valid_label(name) {
            return Err(format!("invalid label name `{name}`"));
        }
        return Ok(LineClass::Label(name, text[colon + 1..].trim()));
    }
    if first.starts_with('.') {
        return Ok(LineClass::Directive);
    }
    if !is_valid_mnemonic(first) {
        return Err(format!("unrecognized token `{first}`"));
    }
    if rest.starts_with('=') {
        return Err(format!("symbol assignment to `{first}` is not supported"));
    }
    Ok(LineClass::Instruction(first, rest))
}

/// Parses an assembly listing.
///
/// Every line is classified as blank, comment, directive, label definition
/// (optionally followed by more content on the same line), or instruction.
/// Unclassifiable lines abort in strict mode and are recorded as diagnostics
/// otherwise.
pub fn parse_assembly(text: &str, config: &ParserConfig) -> Result<AssemblyProgram, ParseError> {
    let mut program = AssemblyProgram::default();
    let normalized = text.replace("\r\n", "\n").replace('\r', "\n");

    for (idx, raw) in normalized.split('\n').enumerate() {
        let line_no = idx + 1;
        let mut rest = strip_comment(raw, &config.comment_markers);
        loop {
            match classify(rest) {
                Ok(LineClass::Empty) | Ok(LineClass::Directive) => break,
                Ok(LineClass::Label(name, tail)) => {
                    if program.labels.contains_key(name) {
                        let err = ParseError::DuplicateLabel {
                            line: line_no,
                            label: name.to_string(),
                        };
                        if config.strict {
                            return Err(err);
                        }
                        program.diagnostics.push(Diagnostic {
                            line_no,
                            message: format!("label `{name}` already defined; first definition kept"),
                        });
                    } else {
                        program
                            .labels
                            .insert(name.to_string(), program.instructions.len());
                    }
                    rest = tail;
                }
                Ok(LineClass::Instruction(mnemonic, operands)) => {
                    program.instructions.push(Instruction {
                        mnemonic: normalize_mnemonic(mnemonic),
                        operands_raw: operands.to_string(),
                        line_no,
                    });
                    break;
                }
                Err(message) => {
                    if config.strict {
                        return Err(ParseError::Unclassifiable {
                            line: line_no,
                            message,
                        });
                    }
                    program.diagnostics.push(Diagnostic { line_no, message });
                    break;
                }
            }
        }
    }
    Ok(program)
}

/// Indices of instructions that start a basic block (sorted, deduplicated).
pub fn find_leaders(program: &AssemblyProgram, config: &ParserConfig) -> BTreeSet<usize> {
    let n = program.instructions.len();
    let mut leaders = BTreeSet::new();
    if n == 0 {
        return leaders;
    }
    leaders.insert(0);
    for (idx, insn) in program.instructions.iter().enumerate() {
        if !config.is_branch(insn) {
            continue;
        }
        if idx + 1 < n {
            leaders.insert(idx + 1);
        }
        for token in operand_tokens(&insn.operands_raw) {
            if let Some(&target) = program.labels.get(token) {
                if target < n {
                    leaders.insert(target);
                }
            }
        }
    }
    leaders
}

/// Splits a program into basic blocks with the leader algorithm.
pub fn segment_basic_blocks(program: &AssemblyProgram, config: &ParserConfig) -> Vec<BasicBlock> {
    let n = program.instructions.len();
    let leaders: Vec<usize> = find_leaders(program, config).into_iter().collect();
    leaders
        .iter()
        .enumerate()
        .map(|(i, &start)| {
            let end = leaders.get(i + 1).copied().unwrap_or(n);
            BasicBlock {
                instructions: program.instructions[start..end].to_vec(),
                start_index: start,
                end_index: end - 1,
            }
        })
        .collect()
}

/// The whole program as a single block, for linear n-gram extraction.
pub fn single_block(program: &AssemblyProgram) -> Vec<BasicBlock> {
    if program.is_empty() {
        return Vec::new();
    }
    vec![BasicBlock {
        instructions: program.instructions.clone(),
        start_index: 0,
        end_index: program.instructions.len() - 1,
    }]
}
