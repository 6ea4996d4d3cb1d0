//! Pairwise program comparison: Jaccard over mnemonic sets, cosine over
//! frequency vectors and Euclidean distance over boolean pattern vectors.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{
    to_boolean_vector, FeatureError, FrequencyVector, MnemonicSet, PatternSet, PatternUniverse,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("cosine similarity is undefined for a program with no instructions")]
    EmptyProgram,
    #[error("pattern sets have different lengths ({0} and {1})")]
    PatternLengthMismatch(usize, usize),
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Jaccard,
    Cosine,
    Euclidean2,
    Euclidean3,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::Jaccard,
        MetricKind::Cosine,
        MetricKind::Euclidean2,
        MetricKind::Euclidean3,
    ];

    /// Distances shrink as programs get more alike; similarities grow.
    pub fn is_distance(self) -> bool {
        matches!(self, MetricKind::Euclidean2 | MetricKind::Euclidean3)
    }

    pub fn pattern_length(self) -> Option<usize> {
        match self {
            MetricKind::Euclidean2 => Some(2),
            MetricKind::Euclidean3 => Some(3),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Jaccard => "jaccard",
            MetricKind::Cosine => "cosine",
            MetricKind::Euclidean2 => "euclidean2",
            MetricKind::Euclidean3 => "euclidean3",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            MetricKind::Jaccard => "Existence of instructions (Jaccard similarity)",
            MetricKind::Cosine => "Frequency of instructions (cosine similarity)",
            MetricKind::Euclidean2 => "Two consecutive instruction patterns (Euclidean distance)",
            MetricKind::Euclidean3 => "Three consecutive instruction patterns (Euclidean distance)",
        }
    }

    /// Decimal places used when rendering values of this kind.
    pub fn display_precision(self) -> usize {
        if self.is_distance() {
            2
        } else {
            4
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jaccard" => Ok(MetricKind::Jaccard),
            "cosine" => Ok(MetricKind::Cosine),
            "euclidean2" | "ngram2" => Ok(MetricKind::Euclidean2),
            "euclidean3" | "ngram3" => Ok(MetricKind::Euclidean3),
            other => Err(format!("unknown metric `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimilarityValue<F> {
    pub value: F,
    pub kind: MetricKind,
}

/// `|s1 ∩ s2| / |s1 ∪ s2|`, with two empty sets counting as identical.
pub fn jaccard<F: Scalar>(s1: &MnemonicSet, s2: &MnemonicSet) -> SimilarityValue<F> {
    let inter = s1.members.intersection(&s2.members).count();
    let union = s1.len() + s2.len() - inter;
    let value = if union == 0 {
        F::one()
    } else {
        F::from_count(inter as u128) / F::from_count(union as u128)
    };
    SimilarityValue {
        value,
        kind: MetricKind::Jaccard,
    }
}

/// Cosine of the angle between two frequency vectors.
///
/// Dot product and squared norms are accumulated exactly in integers, so
/// the result does not depend on summation order.
pub fn cosine<F: Scalar>(
    a: &FrequencyVector,
    b: &FrequencyVector,
) -> Result<SimilarityValue<F>, MetricError> {
    if a.total() == 0 || b.total() == 0 {
        return Err(MetricError::EmptyProgram);
    }
    let mut dot: u128 = 0;
    let mut ia = a.counts.iter().peekable();
    let mut ib = b.counts.iter().peekable();
    while let (Some((ka, va)), Some((kb, vb))) = (ia.peek(), ib.peek()) {
        match ka.cmp(kb) {
            Ordering::Less => {
                ia.next();
            }
            Ordering::Greater => {
                ib.next();
            }
            Ordering::Equal => {
                dot += u128::from(**va) * u128::from(**vb);
                ia.next();
                ib.next();
            }
        }
    }
    let sq = |v: &FrequencyVector| v.counts.values().map(|&c| u128::from(c).pow(2)).sum::<u128>();
    let (na, nb) = (sq(a), sq(b));
    // sqrt of the exact product keeps cosine(x, x) == 1 for realistic counts
    let denom = match na.checked_mul(nb) {
        Some(prod) => F::from_count(prod).sqrt(),
        None => F::from_count(na).sqrt() * F::from_count(nb).sqrt(),
    };
    let value = (F::from_count(dot) / denom).min(F::one());
    Ok(SimilarityValue {
        value,
        kind: MetricKind::Cosine,
    })
}

/// Euclidean distance between the boolean vectors of two pattern sets laid
/// out over `universe`.
pub fn euclidean_pattern_distance<F: Scalar>(
    p1: &PatternSet,
    p2: &PatternSet,
    universe: &PatternUniverse,
) -> Result<SimilarityValue<F>, MetricError> {
    if p1.n != p2.n {
        return Err(MetricError::PatternLengthMismatch(p1.n, p2.n));
    }
    let kind = match p1.n {
        2 => MetricKind::Euclidean2,
        3 => MetricKind::Euclidean3,
        n => return Err(FeatureError::InvalidPatternLength(n).into()),
    };
    let v1 = to_boolean_vector(p1, universe)?;
    let v2 = to_boolean_vector(p2, universe)?;
    let sum: F = v1
        .iter()
        .zip(&v2)
        .map(|(&x, &y)| {
            let d = F::from_count(u128::from(x)) - F::from_count(u128::from(y));
            d * d
        })
        .sum();
    Ok(SimilarityValue {
        value: sum.sqrt(),
        kind,
    })
}
