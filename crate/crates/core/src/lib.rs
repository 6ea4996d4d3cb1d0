//! Instruction-level similarity between assembly programs.
//!
//! Programs are compared by which mnemonics they use ([`metrics::jaccard`]),
//! how often they use them ([`metrics::cosine`]) and which runs of two or
//! three consecutive mnemonics appear inside their basic blocks
//! ([`metrics::euclidean_pattern_distance`]). The [`corpus`] module runs a
//! grouping study over a programmer × application grid and reports how much
//! more alike programs are within an application, or within a programmer,
//! than across both.
//!
//! Metric and aggregation code is generic over [`Scalar`]; the aliases below
//! fix it to `f64`, which is what reports and the CLI use.

pub mod asm_parser;
pub mod corpus;
pub mod features;
pub mod metrics;
mod scalar;

pub use asm_parser::{
    parse_assembly, segment_basic_blocks, AssemblyProgram, BasicBlock, Instruction, ParseError,
    ParserConfig,
};
pub use corpus::{CorpusError, CorpusGrid, GroupingScheme, ProgramEntry, StudyConfig, Subset};
pub use features::{
    FeatureError, FrequencyVector, MnemonicSet, NGramPattern, NgramMode, PatternSet,
    PatternUniverse, ProgramFeatures,
};
pub use metrics::{MetricError, MetricKind};
pub use scalar::Scalar;

pub type Similarity = metrics::SimilarityValue<f64>;
pub type PairValue = corpus::PairValue<f64>;
pub type StudyReport = corpus::StudyReport<f64>;
pub type MetricReport = corpus::MetricReport<f64>;
pub type Normalized = corpus::Normalized<f64>;
pub type SummaryBlock = corpus::SummaryBlock<f64>;
