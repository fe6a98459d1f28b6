//! End-to-end runs: filter, per-discipline factors, entropy fusion and
//! correlation against citations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{
    correlate_factors, correlate_scores, group_aspect_values, AnalysisError, AspectCategoryMap, CorrelationTable, Method,
};
use crate::aspect::{extract_candidates, top_aspects, AspectError, AspectSet, AspectVocabulary, SentimentLexicon};
use crate::corpus::{filter_books, Corpus, CorpusError, Tokenizer, DEFAULT_MIN_REVIEWS};
use crate::entropy::{score, EntropyReport, ScoringError};
use crate::factors::{CombinationSpec, FactorError, FactorMatrix, FactorOptions, FactorTable};
use crate::polarity::{
    accuracy, build_feature_space, split_holdout, tokenize_labeled, train, Hyperparams, LabeledText, PolarityError,
    PolarityModel,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Polarity(#[from] PolarityError),
    #[error(transparent)]
    Aspect(#[from] AspectError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Scoring(#[from] ScoringError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("no books left after keeping those with more than {0} reviews")]
    EmptyAfterFilter(usize),
    #[error("discipline {discipline:?} has {n} books; at least {needed} are required")]
    TooFewBooks { discipline: String, n: usize, needed: usize },
    #[error("unknown discipline {0:?}")]
    UnknownDiscipline(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub min_reviews: usize,
    pub top_aspects: usize,
    /// Select top aspects per discipline rather than over the whole corpus.
    pub per_discipline_aspects: bool,
    pub factors: FactorOptions,
    pub method: Method,
    /// Restrict the run to these disciplines; empty means all.
    pub disciplines: Vec<String>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            min_reviews: DEFAULT_MIN_REVIEWS,
            top_aspects: crate::aspect::DEFAULT_TOP_ASPECTS,
            per_discipline_aspects: true,
            factors: FactorOptions::default(),
            method: Method::Pearson,
            disciplines: Vec::new(),
        }
    }
}

/// Factors of one filtered discipline.
#[derive(Debug, Clone)]
pub struct PartitionFactors {
    pub discipline: String,
    pub corpus: Corpus,
    pub table: FactorTable,
}

impl PartitionFactors {
    pub fn citations(&self) -> BTreeMap<String, u64> {
        self.corpus.citations()
    }

    pub fn score(&self, spec: CombinationSpec) -> Result<ScoredPartition, PipelineError> {
        let matrix = self.table.matrix(spec);
        let report = score(&matrix)?;
        Ok(ScoredPartition { discipline: self.discipline.clone(), spec, matrix, report })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredPartition {
    pub discipline: String,
    pub spec: CombinationSpec,
    pub matrix: FactorMatrix,
    pub report: EntropyReport,
}

/// Filters the corpus and computes factor tables for every analyzed
/// discipline, in discipline order.
pub fn prepare(
    corpus: &Corpus,
    model: &PolarityModel,
    lexicon: &SentimentLexicon,
    vocab: &AspectVocabulary,
    options: &PipelineOptions,
) -> Result<Vec<PartitionFactors>, PipelineError> {
    let filtered = filter_books(corpus, options.min_reviews);
    if filtered.is_empty() {
        return Err(PipelineError::EmptyAfterFilter(options.min_reviews));
    }
    let disciplines: Vec<String> = if options.disciplines.is_empty() {
        filtered.disciplines().map(String::from).collect()
    } else {
        for d in &options.disciplines {
            if !corpus.discipline_index().contains_key(d) {
                return Err(PipelineError::UnknownDiscipline(d.clone()));
            }
        }
        let mut ds = options.disciplines.clone();
        ds.sort();
        ds.dedup();
        ds
    };
    let global_aspects = if options.per_discipline_aspects {
        None
    } else {
        Some(top_aspects(&extract_candidates(filtered.reviews(), vocab)?, options.top_aspects, "all")?)
    };

    disciplines
        .into_iter()
        .map(|discipline| {
            let partition = filtered.partition(&discipline);
            if partition.len() < 2 {
                return Err(PipelineError::TooFewBooks { discipline, n: partition.len(), needed: 2 });
            }
            let aspects = match &global_aspects {
                Some(a) => a.clone(),
                None => top_aspects(&extract_candidates(partition.reviews(), vocab)?, options.top_aspects, &discipline)?,
            };
            let table = FactorTable::compute(&partition, model, &aspects, lexicon, options.factors)?;
            Ok(PartitionFactors { discipline, corpus: partition, table })
        })
        .collect()
}

/// Top aspects of a partition, as used by [`prepare`].
pub fn partition_aspects(partition: &Corpus, vocab: &AspectVocabulary, n: usize, label: &str) -> Result<AspectSet, PipelineError> {
    Ok(top_aspects(&extract_candidates(partition.reviews(), vocab)?, n, label)?)
}

/// Training outcome with the accuracy on a held-out split.
#[derive(Debug, Clone)]
pub struct TrainedModel {
    pub model: PolarityModel,
    pub holdout_accuracy: Option<f64>,
    pub n_train: usize,
    pub n_holdout: usize,
}

/// Tokenizes labeled texts, holds out `holdout_fraction` of each label,
/// builds the feature space on the rest and trains.
pub fn train_model(
    rows: &[LabeledText],
    tokenizer: &Tokenizer,
    top_k: usize,
    hyperparams: Hyperparams,
    holdout_fraction: f64,
) -> Result<TrainedModel, PipelineError> {
    let docs = tokenize_labeled(rows, tokenizer);
    let (train_docs, holdout) = if holdout_fraction > 0.0 {
        split_holdout(&docs, holdout_fraction, hyperparams.seed)
    } else {
        (docs, Vec::new())
    };
    if train_docs.is_empty() {
        return Err(PolarityError::EmptyTrainingSet.into());
    }
    let token_lists: Vec<Vec<String>> = train_docs.iter().map(|d| d.tokens.clone()).collect();
    let space = build_feature_space(&token_lists, top_k)?;
    let model = train(&train_docs, space, hyperparams)?;
    let holdout_accuracy = (!holdout.is_empty()).then(|| accuracy(&model, &holdout));
    Ok(TrainedModel { model, holdout_accuracy, n_train: train_docs.len(), n_holdout: holdout.len() })
}

/// The four correlation tables: combination scores, single factors,
/// individual aspects (helpfulness weighted) and aspect categories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub scores: CorrelationTable,
    pub factors: CorrelationTable,
    pub aspects: CorrelationTable,
    pub categories: CorrelationTable,
}

pub fn correlation_report(
    partitions: &[PartitionFactors],
    category_map: &AspectCategoryMap,
    method: Method,
) -> Result<CorrelationReport, PipelineError> {
    let columns: Vec<String> = partitions.iter().map(|p| p.discipline.clone()).collect();
    let mut scores = CorrelationTable::new("citations vs book impact scores", columns.clone());
    let mut factors = CorrelationTable::new("citations vs single factor values", columns.clone());
    let mut aspects = CorrelationTable::new("citations vs aspect sentiment values", columns.clone());
    let mut categories = CorrelationTable::new("citations vs grouped aspect sentiment values", columns);

    for (j, partition) in partitions.iter().enumerate() {
        if partition.corpus.len() < 3 {
            return Err(PipelineError::TooFewBooks {
                discipline: partition.discipline.clone(),
                n: partition.corpus.len(),
                needed: 3,
            });
        }
        let citations = partition.citations();
        for spec in CombinationSpec::all() {
            let scored = partition.score(spec)?;
            let cell = correlate_scores(&scored.report.scores, &citations, method).ok();
            scores.set(&spec.to_string(), j, cell);
        }
        for fc in correlate_factors(&partition.table.all_factors(), &citations, method)? {
            factors.set(&fc.factor, j, fc.result.ok());
        }
        let aspect_matrix = partition.table.aspect_matrix(true);
        for fc in correlate_factors(&aspect_matrix, &citations, method)? {
            aspects.set(&fc.factor, j, fc.result.ok());
        }
        // A category with no member among this discipline's aspects gets an
        // undefined cell; the other categories are unaffected.
        for (name, members) in category_map.categories() {
            let single = AspectCategoryMap::new(vec![(name.to_string(), members.clone())], Default::default())?;
            let cell = group_aspect_values(&aspect_matrix, &single)
                .ok()
                .and_then(|grouped| correlate_factors(&grouped, &citations, method).ok())
                .and_then(|mut fc| fc.pop())
                .and_then(|fc| fc.result.ok());
            categories.set(name, j, cell);
        }
    }
    Ok(CorrelationReport { scores, factors, aspects, categories })
}
