//! Micro-level aspect sentiment.
//!
//! Candidate aspects are nouns from a vocabulary file; the most frequent ones
//! in a partition form its [`AspectSet`]. Within a review, each sentiment
//! word `w` contributes `value(w) / distance(w, aspect)` where the distance is
//! measured in tokens to the nearest occurrence of the aspect, and the sign of
//! the total is the review's polarity toward that aspect. A book's aspect
//! value is the signed polarity sum over its non-neutral mentions divided by
//! their count, optionally weighting each mention by review helpfulness.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Book, Review, TokenizerConfig};

pub const DEFAULT_TOP_ASPECTS: usize = 10;

/// Aspect nouns that dominate online reviews of academic books.
pub const COMMON_BOOK_ASPECTS: [&str; 10] =
    ["quality", "content", "version", "printing", "translation", "paper", "packaging", "logistics", "price", "appearance"];

#[derive(Debug, Error)]
pub enum AspectError {
    #[error("aspect vocabulary is empty")]
    EmptyVocabulary,
    #[error("sentiment lexicon is empty")]
    EmptyLexicon,
    #[error("lexicon word {0:?} is listed as both positive and negative")]
    ConflictingPolarity(String),
    #[error("partition has no reviews")]
    EmptyPartition,
    #[error("no candidate aspect occurs in the partition")]
    NoCandidates,
    #[error("aspect count must be at least 1")]
    InvalidCount,
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn read(path: &Path) -> Result<String, AspectError> {
    fs::read_to_string(path).map_err(|source| AspectError::Io { path: path.to_path_buf(), source })
}

/// Noun list standing in for part-of-speech tagging.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AspectVocabulary {
    nouns: BTreeSet<String>,
}

impl AspectVocabulary {
    pub fn new(nouns: impl IntoIterator<Item = impl AsRef<str>>, config: &TokenizerConfig) -> Result<Self, AspectError> {
        let nouns: BTreeSet<String> =
            nouns.into_iter().map(|n| config.normalize_word(n.as_ref())).filter(|n| !n.is_empty()).collect();
        if nouns.is_empty() {
            return Err(AspectError::EmptyVocabulary);
        }
        Ok(Self { nouns })
    }

    /// One noun per line.
    pub fn load(path: &Path, config: &TokenizerConfig) -> Result<Self, AspectError> {
        Self::new(read(path)?.lines(), config)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.nouns.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.nouns.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.nouns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nouns.is_empty()
    }
}

/// Word polarities, each `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, i8>,
}

impl SentimentLexicon {
    pub fn new(entries: impl IntoIterator<Item = (impl AsRef<str>, i8)>, config: &TokenizerConfig) -> Result<Self, AspectError> {
        let mut map = BTreeMap::new();
        for (word, value) in entries {
            let word = config.normalize_word(word.as_ref());
            let value = value.signum();
            if word.is_empty() || value == 0 {
                continue;
            }
            if let Some(prev) = map.insert(word.clone(), value) {
                if prev != value {
                    return Err(AspectError::ConflictingPolarity(word));
                }
            }
        }
        if map.is_empty() {
            return Err(AspectError::EmptyLexicon);
        }
        Ok(Self { entries: map })
    }

    /// Reads `word<TAB>+1|-1` lines.
    pub fn load(path: &Path, config: &TokenizerConfig) -> Result<Self, AspectError> {
        let text = read(path)?;
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parse_err = |message: String| AspectError::Parse { path: path.to_path_buf(), line: i + 1, message };
            let (word, value) = line.split_once('\t').ok_or_else(|| parse_err("expected word<TAB>+1|-1".into()))?;
            let value = match value.trim() {
                "+1" | "1" => 1,
                "-1" => -1,
                other => return Err(parse_err(format!("polarity must be +1 or -1, got {other:?}"))),
            };
            entries.push((word.to_string(), value));
        }
        Self::new(entries, config)
    }

    pub fn value(&self, word: &str) -> Option<i8> {
        self.entries.get(word).copied()
    }

    /// The same lexicon with every polarity flipped.
    pub fn negated(&self) -> Self {
        Self { entries: self.entries.iter().map(|(w, v)| (w.clone(), -v)).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, i8)> {
        self.entries.iter().map(|(w, &v)| (w.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AspectCount {
    pub word: String,
    pub frequency: u64,
}

/// The selected aspects of one partition, most frequent first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AspectSet {
    pub partition: String,
    pub aspects: Vec<AspectCount>,
}

impl AspectSet {
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.aspects.iter().map(|a| a.word.as_str())
    }

    pub fn len(&self) -> usize {
        self.aspects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.aspects.is_empty()
    }
}

/// Counts occurrences of every vocabulary noun across `reviews`.
pub fn extract_candidates<'a>(
    reviews: impl IntoIterator<Item = &'a Review>,
    vocab: &AspectVocabulary,
) -> Result<BTreeMap<String, u64>, AspectError> {
    if vocab.is_empty() {
        return Err(AspectError::EmptyVocabulary);
    }
    let mut freqs = BTreeMap::new();
    let mut any_review = false;
    for review in reviews {
        any_review = true;
        for token in &review.tokens {
            if vocab.contains(token) {
                *freqs.entry(token.clone()).or_insert(0) += 1;
            }
        }
    }
    if !any_review {
        return Err(AspectError::EmptyPartition);
    }
    Ok(freqs)
}

/// The `n` most frequent aspects; equal frequencies order lexicographically.
pub fn top_aspects(freqs: &BTreeMap<String, u64>, n: usize, partition: &str) -> Result<AspectSet, AspectError> {
    if n == 0 {
        return Err(AspectError::InvalidCount);
    }
    if freqs.is_empty() {
        return Err(AspectError::NoCandidates);
    }
    let mut ranked: Vec<AspectCount> =
        freqs.iter().map(|(w, &f)| AspectCount { word: w.clone(), frequency: f }).collect();
    // freqs iterates in word order, so a stable sort keeps ties lexicographic.
    ranked.sort_by_key(|a| std::cmp::Reverse(a.frequency));
    ranked.truncate(n);
    Ok(AspectSet { partition: partition.to_string(), aspects: ranked })
}

/// Which sentiment words count toward an aspect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Every sentiment word in the review.
    #[default]
    Review,
    /// Only sentiment words sharing a sentence with an aspect occurrence.
    Sentence,
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "review" => Ok(Scope::Review),
            "sentence" => Ok(Scope::Sentence),
            other => Err(format!("unknown scope {other:?} (expected review or sentence)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub word: String,
    pub value: i8,
    pub distance: u32,
}

impl Contribution {
    pub fn new(word: impl Into<String>, value: i8, distance: u32) -> Self {
        Self { word: word.into(), value, distance }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AspectPolarity {
    pub review_id: String,
    pub aspect: String,
    pub sp: i8,
    pub contributions: Vec<Contribution>,
}

/// Sign of `sum(value / distance)`, decided exactly.
///
/// The floating-point sum settles the sign whenever it clears the rounding
/// bound; otherwise the sum is recomputed in rational arithmetic.
pub fn polarity_from_contributions(contributions: &[Contribution]) -> i8 {
    let mut sum = 0.0f64;
    let mut magnitude = 0.0f64;
    for c in contributions {
        let term = f64::from(c.value) / f64::from(c.distance);
        sum += term;
        magnitude += term.abs();
    }
    let bound = (contributions.len() as f64 + 1.0) * f64::EPSILON * magnitude;
    if sum > bound {
        return 1;
    }
    if sum < -bound {
        return -1;
    }
    let exact = contributions.iter().fold(BigRational::zero(), |acc, c| {
        acc + BigRational::new(BigInt::from(c.value), BigInt::from(c.distance))
    });
    if exact.is_positive() {
        1
    } else if exact.is_negative() {
        -1
    } else {
        0
    }
}

/// Polarity of `review` toward `aspect`. Tokens equal to the aspect are never
/// counted as sentiment words toward it.
pub fn aspect_polarity(review: &Review, aspect: &str, lexicon: &SentimentLexicon, scope: Scope) -> AspectPolarity {
    let occurrences: Vec<usize> =
        review.tokens.iter().enumerate().filter(|(_, t)| *t == aspect).map(|(i, _)| i).collect();
    let mut contributions = Vec::new();
    if !occurrences.is_empty() {
        for (k, token) in review.tokens.iter().enumerate() {
            if token == aspect {
                continue;
            }
            let Some(value) = lexicon.value(token) else { continue };
            let nearest = occurrences
                .iter()
                .filter(|&&p| scope == Scope::Review || review.sentences[p] == review.sentences[k])
                .map(|&p| p.abs_diff(k))
                .min();
            if let Some(distance) = nearest {
                contributions.push(Contribution::new(token.clone(), value, distance as u32));
            }
        }
    }
    AspectPolarity {
        review_id: review.review_id.clone(),
        aspect: aspect.to_string(),
        sp: polarity_from_contributions(&contributions),
        contributions,
    }
}

/// `sum(sp) / sum(|sp|)`, or 0 without non-neutral mentions.
pub fn aspect_value(sps: impl IntoIterator<Item = i8>) -> f64 {
    let (mut signed, mut count) = (0i64, 0i64);
    for sp in sps {
        signed += i64::from(sp);
        count += i64::from(sp.abs());
    }
    if count == 0 {
        0.0
    } else {
        signed as f64 / count as f64
    }
}

/// `sum(sp * h) / sum(|sp|)`, or 0 without non-neutral mentions.
pub fn aspect_value_weighted(mentions: impl IntoIterator<Item = (i8, f64)>) -> f64 {
    let (mut signed, mut count) = (0.0f64, 0i64);
    for (sp, h) in mentions {
        signed += f64::from(sp) * h;
        count += i64::from(sp.abs());
    }
    if count == 0 {
        0.0
    } else {
        signed / count as f64
    }
}

/// Per-aspect values of one book, aligned with `aspects`. When `helpfulness`
/// is given it holds one score per review of `book`, in review order.
pub fn book_aspect_values(
    book: &Book,
    aspects: &AspectSet,
    lexicon: &SentimentLexicon,
    scope: Scope,
    helpfulness: Option<&[f64]>,
) -> Vec<f64> {
    aspects
        .words()
        .map(|aspect| {
            let sps = book.reviews.iter().map(|r| aspect_polarity(r, aspect, lexicon, scope).sp);
            match helpfulness {
                Some(h) => aspect_value_weighted(sps.zip(h.iter().copied())),
                None => aspect_value(sps),
            }
        })
        .collect()
}
