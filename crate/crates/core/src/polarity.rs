//! Macro-level review polarity.
//!
//! Reviews are embedded in a TF-IDF feature space,
//! `tfidf(w, d) = count(w, d) / |d| * ln(n_docs / doc_frequency(w))`,
//! restricted to the `top_k` words with the highest TF-IDF score in any
//! training document. A linear max-margin classifier (L2-regularized hinge
//! loss, seeded stochastic subgradient descent) labels each review positive
//! or negative; per-book counts of each label are the macro-level factors.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{Book, Tokenizer};

pub const MODEL_FORMAT_VERSION: u32 = 1;
pub const DEFAULT_TOP_K: usize = 2000;

#[derive(Debug, Error)]
pub enum PolarityError {
    #[error("no documents to build a feature space from")]
    NoDocuments,
    #[error("every document is empty")]
    AllDocumentsEmpty,
    #[error("top_k must be at least 1")]
    InvalidTopK,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("training set has only {0} documents; both labels are required")]
    SingleClass(Label),
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperparams(String),
    #[error("book {0} has no reviews")]
    NoReviews(String),
    #[error("invalid feature space: {0}")]
    InvalidFeatureSpace(String),
    #[error("unsupported model format version {0}")]
    UnsupportedVersion(u32),
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Review polarity; serialized as `1` / `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn from_score(score: f64) -> Self {
        // Zero decision score breaks toward positive.
        if score >= 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        })
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign() as i8)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(1) => Ok(Label::Positive),
            Raw::Int(-1) => Ok(Label::Negative),
            Raw::Text(t) => match t.trim() {
                "+1" | "1" | "positive" | "pos" => Ok(Label::Positive),
                "-1" | "negative" | "neg" => Ok(Label::Negative),
                other => Err(serde::de::Error::custom(format!("label must be +1 or -1, got {other:?}"))),
            },
            Raw::Int(other) => Err(serde::de::Error::custom(format!("label must be +1 or -1, got {other}"))),
        }
    }
}

/// Vocabulary with document frequencies, fixed at training time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFeatureSpace", into = "RawFeatureSpace")]
pub struct FeatureSpace {
    vocabulary: Vec<String>,
    doc_frequency: Vec<u32>,
    n_docs: u32,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct RawFeatureSpace {
    vocabulary: Vec<String>,
    doc_frequency: Vec<u32>,
    n_docs: u32,
}

impl From<FeatureSpace> for RawFeatureSpace {
    fn from(space: FeatureSpace) -> Self {
        Self { vocabulary: space.vocabulary, doc_frequency: space.doc_frequency, n_docs: space.n_docs }
    }
}

impl TryFrom<RawFeatureSpace> for FeatureSpace {
    type Error = PolarityError;

    fn try_from(raw: RawFeatureSpace) -> Result<Self, Self::Error> {
        FeatureSpace::new(raw.vocabulary, raw.doc_frequency, raw.n_docs)
    }
}

impl FeatureSpace {
    pub fn new(vocabulary: Vec<String>, doc_frequency: Vec<u32>, n_docs: u32) -> Result<Self, PolarityError> {
        let invalid = |m: String| Err(PolarityError::InvalidFeatureSpace(m));
        if vocabulary.len() != doc_frequency.len() {
            return invalid("vocabulary and doc_frequency lengths differ".into());
        }
        let mut index = HashMap::with_capacity(vocabulary.len());
        for (i, (word, &df)) in vocabulary.iter().zip(&doc_frequency).enumerate() {
            if index.insert(word.clone(), i).is_some() {
                return invalid(format!("duplicate vocabulary word {word:?}"));
            }
            if df == 0 || df > n_docs {
                return invalid(format!("doc_frequency {df} of {word:?} outside [1, {n_docs}]"));
            }
        }
        Ok(Self { vocabulary, doc_frequency, n_docs, index })
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn doc_frequency(&self, word: &str) -> Option<u32> {
        self.index.get(word).map(|&i| self.doc_frequency[i])
    }

    pub fn n_docs(&self) -> u32 {
        self.n_docs
    }

    pub fn len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocabulary.is_empty()
    }

    fn idf(&self, i: usize) -> f64 {
        (f64::from(self.n_docs) / f64::from(self.doc_frequency[i])).ln()
    }
}

fn term_counts(doc: &[String]) -> BTreeMap<&str, u32> {
    let mut counts = BTreeMap::new();
    for token in doc {
        *counts.entry(token.as_str()).or_insert(0) += 1;
    }
    counts
}

/// Selects the `top_k` words by their maximum TF-IDF over `docs`; ties go to
/// the lexicographically smaller word.
pub fn build_feature_space(docs: &[Vec<String>], top_k: usize) -> Result<FeatureSpace, PolarityError> {
    if docs.is_empty() {
        return Err(PolarityError::NoDocuments);
    }
    if top_k == 0 {
        return Err(PolarityError::InvalidTopK);
    }
    if docs.iter().all(Vec::is_empty) {
        return Err(PolarityError::AllDocumentsEmpty);
    }
    let n_docs = docs.len() as f64;
    let counts: Vec<BTreeMap<&str, u32>> = docs.iter().map(|d| term_counts(d)).collect();
    let mut df: BTreeMap<&str, u32> = BTreeMap::new();
    for doc in &counts {
        for &word in doc.keys() {
            *df.entry(word).or_insert(0) += 1;
        }
    }
    let mut best: BTreeMap<&str, f64> = BTreeMap::new();
    for (doc, tokens) in counts.iter().zip(docs) {
        let len = tokens.len() as f64;
        for (&word, &count) in doc {
            let score = f64::from(count) / len * (n_docs / f64::from(df[word])).ln();
            let entry = best.entry(word).or_insert(score);
            if score > *entry {
                *entry = score;
            }
        }
    }
    let mut ranked: Vec<(&str, f64)> = best.into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(top_k);

    let vocabulary: Vec<String> = ranked.iter().map(|(w, _)| w.to_string()).collect();
    let doc_frequency = ranked.iter().map(|(w, _)| df[w]).collect();
    FeatureSpace::new(vocabulary, doc_frequency, docs.len() as u32)
}

/// Sparse TF-IDF vector, entries sorted by vocabulary index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureVector {
    pub entries: Vec<(usize, f64)>,
}

impl FeatureVector {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.entries.binary_search_by_key(&index, |e| e.0).ok().map(|i| self.entries[i].1)
    }

    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, x)| dense[i] * x).sum()
    }
}

pub fn vectorize(doc: &[String], space: &FeatureSpace) -> FeatureVector {
    if doc.is_empty() {
        return FeatureVector::default();
    }
    let len = doc.len() as f64;
    let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
    for token in doc {
        if let Some(&i) = space.index.get(token) {
            *counts.entry(i).or_insert(0) += 1;
        }
    }
    let entries = counts.into_iter().map(|(i, c)| (i, f64::from(c) / len * space.idf(i))).collect();
    FeatureVector { entries }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDoc {
    pub tokens: Vec<String>,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    pub epochs: u32,
    pub learning_rate: f64,
    /// L2 regularization strength.
    pub regularization: f64,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self { epochs: 30, learning_rate: 0.5, regularization: 1e-4, seed: 42 }
    }
}

impl Hyperparams {
    fn validate(&self) -> Result<(), PolarityError> {
        let bad = |m: &str| Err(PolarityError::InvalidHyperparams(m.into()));
        if self.epochs == 0 {
            return bad("epochs must be at least 1");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return bad("learning_rate must be positive");
        }
        if self.regularization.is_nan() || self.regularization < 0.0 || self.learning_rate * self.regularization >= 1.0 {
            return bad("regularization must be non-negative with learning_rate * regularization < 1");
        }
        Ok(())
    }
}

/// A trained linear classifier over a fixed feature space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarityModel {
    pub format_version: u32,
    pub feature_space: FeatureSpace,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyperparams: Hyperparams,
}

/// Trains a linear model by stochastic subgradient descent on the
/// L2-regularized hinge loss. The visiting order is shuffled each epoch from
/// `hyperparams.seed`, so training is fully deterministic.
pub fn train(labeled: &[LabeledDoc], space: FeatureSpace, hyperparams: Hyperparams) -> Result<PolarityModel, PolarityError> {
    hyperparams.validate()?;
    let first = labeled.first().ok_or(PolarityError::EmptyTrainingSet)?.label;
    if labeled.iter().all(|d| d.label == first) {
        return Err(PolarityError::SingleClass(first));
    }
    let vectors: Vec<FeatureVector> = labeled.iter().map(|d| vectorize(&d.tokens, &space)).collect();
    let lambda = hyperparams.regularization;

    // weights = scale * direction keeps the L2 shrink O(1) per step.
    let mut direction = vec![0.0; space.len()];
    let mut scale = 1.0f64;
    let mut bias = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(hyperparams.seed);
    let mut order: Vec<usize> = (0..labeled.len()).collect();
    let mut step = 0u64;

    for _ in 0..hyperparams.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            step += 1;
            let eta = hyperparams.learning_rate / (1.0 + hyperparams.learning_rate * lambda * step as f64);
            let y = labeled[i].label.sign();
            let x = &vectors[i];
            let margin = y * (scale * x.dot(&direction) + bias);
            scale *= 1.0 - eta * lambda;
            if margin < 1.0 {
                for &(j, xj) in &x.entries {
                    direction[j] += eta * y * xj / scale;
                }
                bias += eta * y;
            }
            if scale < 1e-9 {
                direction.iter_mut().for_each(|v| *v *= scale);
                scale = 1.0;
            }
        }
    }
    let weights = direction.into_iter().map(|v| v * scale).collect();
    Ok(PolarityModel { format_version: MODEL_FORMAT_VERSION, feature_space: space, weights, bias, hyperparams })
}

impl PolarityModel {
    pub fn decision_score(&self, doc: &[String]) -> f64 {
        vectorize(doc, &self.feature_space).dot(&self.weights) + self.bias
    }

    pub fn classify(&self, doc: &[String]) -> Label {
        Label::from_score(self.decision_score(doc))
    }

    pub fn to_json(&self) -> Result<Vec<u8>, PolarityError> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, PolarityError> {
        let model: PolarityModel = serde_json::from_slice(bytes)?;
        if model.format_version != MODEL_FORMAT_VERSION {
            return Err(PolarityError::UnsupportedVersion(model.format_version));
        }
        if model.weights.len() != model.feature_space.len() {
            return Err(PolarityError::InvalidFeatureSpace("weights length differs from vocabulary".into()));
        }
        Ok(model)
    }

    /// SHA-256 of the serialized model, hex encoded.
    pub fn hash(&self) -> Result<String, PolarityError> {
        Ok(hex::encode(Sha256::digest(self.to_json()?)))
    }

    pub fn load(path: &Path) -> Result<Self, PolarityError> {
        let bytes = fs::read(path).map_err(|source| PolarityError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&bytes)
    }
}

/// Classifies `doc` under `model`; exact zero scores are positive.
pub fn classify(model: &PolarityModel, doc: &[String]) -> Label {
    model.classify(doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PolarityCounts {
    pub positive: usize,
    pub negative: usize,
}

pub fn count_polarities(book: &Book, model: &PolarityModel) -> Result<PolarityCounts, PolarityError> {
    if book.reviews.is_empty() {
        return Err(PolarityError::NoReviews(book.book_id.clone()));
    }
    let mut counts = PolarityCounts::default();
    for review in &book.reviews {
        match model.classify(&review.tokens) {
            Label::Positive => counts.positive += 1,
            Label::Negative => counts.negative += 1,
        }
    }
    Ok(counts)
}

/// Fraction of `docs` whose label `model` reproduces.
pub fn accuracy(model: &PolarityModel, docs: &[LabeledDoc]) -> f64 {
    if docs.is_empty() {
        return 0.0;
    }
    let correct = docs.iter().filter(|d| model.classify(&d.tokens) == d.label).count();
    correct as f64 / docs.len() as f64
}

/// Deterministically splits `docs` into `(train, holdout)` with roughly
/// `holdout_fraction` of each label held out.
pub fn split_holdout(docs: &[LabeledDoc], holdout_fraction: f64, seed: u64) -> (Vec<LabeledDoc>, Vec<LabeledDoc>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut holdout = Vec::new();
    for label in [Label::Positive, Label::Negative] {
        let mut group: Vec<&LabeledDoc> = docs.iter().filter(|d| d.label == label).collect();
        group.shuffle(&mut rng);
        let n_holdout = (group.len() as f64 * holdout_fraction).round() as usize;
        let n_holdout = n_holdout.min(group.len().saturating_sub(1));
        holdout.extend(group[..n_holdout].iter().map(|d| (*d).clone()));
        train.extend(group[n_holdout..].iter().map(|d| (*d).clone()));
    }
    (train, holdout)
}

/// One row of a labeled training file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledText {
    pub text: String,
    pub label: Label,
}

pub fn read_labeled(path: &Path) -> Result<Vec<LabeledText>, PolarityError> {
    let file = fs::File::open(path).map_err(|source| PolarityError::Io { path: path.to_path_buf(), source })?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| PolarityError::Io { path: path.to_path_buf(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line).map_err(|e| PolarityError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_labeled(rows: &[LabeledText], mut writer: impl Write) -> std::io::Result<()> {
    for row in rows {
        serde_json::to_writer(&mut writer, row)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn tokenize_labeled(rows: &[LabeledText], tokenizer: &Tokenizer) -> Vec<LabeledDoc> {
    rows.iter().map(|r| LabeledDoc { tokens: tokenizer.tokenize(&r.text), label: r.label }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Review;

    fn doc(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    fn toy_set() -> Vec<LabeledDoc> {
        let pos = ["good", "great", "excellent", "superb", "insightful"];
        let neg = ["bad", "awful", "boring", "poor", "dull"];
        let filler = ["the", "book", "is", "very"];
        (0..20)
            .map(|i| {
                let (vocab, label) = if i % 2 == 0 { (&pos, Label::Positive) } else { (&neg, Label::Negative) };
                let mut tokens = vec![filler[i % 4].to_string(), filler[(i + 1) % 4].to_string()];
                tokens.push(vocab[i % 5].to_string());
                tokens.push(vocab[(i / 2 + 1) % 5].to_string());
                LabeledDoc { tokens, label }
            })
            .collect()
    }

    fn toy_model() -> (PolarityModel, Vec<LabeledDoc>) {
        let set = toy_set();
        let docs: Vec<_> = set.iter().map(|d| d.tokens.clone()).collect();
        let space = build_feature_space(&docs, DEFAULT_TOP_K).unwrap();
        (train(&set, space, Hyperparams::default()).unwrap(), set)
    }

    #[test]
    fn feature_space_ranks_by_max_tfidf() {
        let space = build_feature_space(&[doc(&["a", "b", "a"]), doc(&["b", "c"])], 2).unwrap();
        assert_eq!(space.vocabulary(), ["a", "c"]);
        assert_eq!(space.doc_frequency("a"), Some(1));
        assert_eq!(space.n_docs(), 2);
    }

    #[test]
    fn zero_idf_falls_back_to_lexicographic_order() {
        let space = build_feature_space(&[doc(&["z", "y", "x"]), doc(&["x", "y", "z"])], 10).unwrap();
        assert_eq!(space.vocabulary(), ["x", "y", "z"]);
        let v = vectorize(&doc(&["x", "y"]), &space);
        assert!(v.entries.iter().all(|&(_, w)| w == 0.0));
    }

    #[test]
    fn top_k_clamps_to_distinct_words() {
        let space = build_feature_space(&[doc(&["a", "b"]), doc(&["c"])], 100).unwrap();
        assert_eq!(space.len(), 3);
    }

    #[test]
    fn feature_space_errors() {
        assert!(matches!(build_feature_space(&[], 5), Err(PolarityError::NoDocuments)));
        assert!(matches!(build_feature_space(&[vec![], vec![]], 5), Err(PolarityError::AllDocumentsEmpty)));
        assert!(matches!(build_feature_space(&[doc(&["a"])], 0), Err(PolarityError::InvalidTopK)));
    }

    #[test]
    fn vectorize_matches_hand_evaluation() {
        let space = build_feature_space(&[doc(&["a", "b", "a"]), doc(&["b", "c"])], 3).unwrap();
        let v = vectorize(&doc(&["a", "b", "a"]), &space);
        let a = space.vocabulary().iter().position(|w| w == "a").unwrap();
        let b = space.vocabulary().iter().position(|w| w == "b").unwrap();
        assert!((v.get(a).unwrap() - 2.0 / 3.0 * 2f64.ln()).abs() < 1e-15);
        assert!((v.get(a).unwrap() - 0.4621).abs() < 1e-4);
        assert_eq!(v.get(b), Some(0.0));
        assert!(vectorize(&doc(&["q"]), &space).is_empty());
        assert!(vectorize(&[], &space).is_empty());
    }

    #[test]
    fn separable_toy_set_is_learned_exactly() {
        let (model, set) = toy_model();
        assert_eq!(accuracy(&model, &set), 1.0);
        assert_eq!(model.classify(&doc(&["good", "great", "superb"])), Label::Positive);
        assert_eq!(model.classify(&doc(&["bad", "boring", "dull"])), Label::Negative);
    }

    #[test]
    fn training_is_deterministic() {
        let (a, _) = toy_model();
        let (b, _) = toy_model();
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.hash().unwrap(), b.hash().unwrap());
    }

    #[test]
    fn training_errors() {
        let space = build_feature_space(&[doc(&["a"])], 5).unwrap();
        assert!(matches!(train(&[], space.clone(), Hyperparams::default()), Err(PolarityError::EmptyTrainingSet)));
        let one = vec![LabeledDoc { tokens: doc(&["a"]), label: Label::Negative }];
        assert!(matches!(train(&one, space.clone(), Hyperparams::default()), Err(PolarityError::SingleClass(_))));
        let bad = Hyperparams { epochs: 0, ..Hyperparams::default() };
        assert!(matches!(train(&toy_set(), space, bad), Err(PolarityError::InvalidHyperparams(_))));
    }

    #[test]
    fn zero_score_is_positive() {
        let space = FeatureSpace::new(vec!["a".into()], vec![1], 2).unwrap();
        let model = PolarityModel {
            format_version: MODEL_FORMAT_VERSION,
            feature_space: space,
            weights: vec![0.0],
            bias: 0.0,
            hyperparams: Hyperparams::default(),
        };
        assert_eq!(model.classify(&[]), Label::Positive);
        assert_eq!(classify(&model, &doc(&["a"])), Label::Positive);
    }

    #[test]
    fn counts_match_per_review_classification() {
        let (model, _) = toy_model();
        let texts = [doc(&["good", "great"]), doc(&["excellent", "book"]), doc(&["awful", "dull"])];
        let reviews = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Review::from_tokens(format!("r{i}"), "b", 3, t.clone(), 0, 0).unwrap())
            .collect::<Vec<_>>();
        let book = Book { book_id: "b".into(), title: "t".into(), discipline: "d".into(), citation_count: 0, reviews };
        let counts = count_polarities(&book, &model).unwrap();
        assert_eq!((counts.positive, counts.negative), (2, 1));

        let mut oracle = (0, 0);
        for r in &book.reviews {
            if model.decision_score(&r.tokens) >= 0.0 {
                oracle.0 += 1;
            } else {
                oracle.1 += 1;
            }
        }
        assert_eq!((counts.positive, counts.negative), oracle);

        let empty = Book { reviews: vec![], ..book };
        assert!(matches!(count_polarities(&empty, &model), Err(PolarityError::NoReviews(_))));
    }

    #[test]
    fn model_round_trips_bit_exactly() {
        let (model, _) = toy_model();
        let back = PolarityModel::from_json(&model.to_json().unwrap()).unwrap();
        assert_eq!(back, model);
        assert!(back.weights.iter().zip(&model.weights).all(|(a, b)| a.to_bits() == b.to_bits()));
        assert_eq!(back.bias.to_bits(), model.bias.to_bits());
    }

    #[test]
    fn labels_parse_from_signed_forms() {
        let rows: Vec<LabeledText> = [r#"{"text":"a","label":1}"#, r#"{"text":"b","label":-1}"#, r#"{"text":"c","label":"+1"}"#]
            .iter()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(rows.iter().map(|r| r.label).collect::<Vec<_>>(), [Label::Positive, Label::Negative, Label::Positive]);
        assert!(serde_json::from_str::<LabeledText>(r#"{"text":"a","label":0}"#).is_err());
    }

    #[test]
    fn holdout_split_keeps_both_labels_in_training() {
        let (train_set, holdout) = split_holdout(&toy_set(), 0.2, 7);
        assert_eq!(train_set.len() + holdout.len(), 20);
        assert_eq!(holdout.len(), 4);
        assert!(train_set.iter().any(|d| d.label == Label::Positive));
        assert!(train_set.iter().any(|d| d.label == Label::Negative));
    }
}
