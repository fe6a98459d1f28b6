//! Book-level factors and the six factor combinations.
//!
//! | factor                  | review holder      | holder & evaluator |
//! |-------------------------|--------------------|--------------------|
//! | `n_positive`            | macro, macro_micro | macro, macro_micro |
//! | `n_negative`            | macro, macro_micro | macro, macro_micro |
//! | aspect sentiment        | micro, macro_micro | micro, macro_micro |
//! | star value              | all                | all                |
//! | `helpfulness`           |                    | all                |
//!
//! The holder-and-evaluator part replaces the aspect and star values with
//! their helpfulness-weighted forms.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aspect::{aspect_polarity, aspect_value, aspect_value_weighted, AspectSet, Scope, SentimentLexicon};
use crate::corpus::{Book, Corpus, Review};
use crate::polarity::{count_polarities, PolarityError, PolarityModel};

#[derive(Debug, Error)]
pub enum FactorError {
    #[error("partition has no books")]
    EmptyPartition,
    #[error("book {0} has no reviews")]
    NoReviews(String),
    #[error("aspect set is empty")]
    EmptyAspectSet,
    #[error("unknown combination {0:?}")]
    UnknownCombination(String),
    #[error("malformed factor matrix: {0}")]
    Shape(String),
    #[error(transparent)]
    Polarity(#[from] PolarityError),
    #[error("factor matrix csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    /// Star rating and review content only.
    ReviewHolder,
    /// Adds the helpfulness votes of other users.
    HolderAndEvaluator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Macro,
    Micro,
    MacroMicro,
}

/// One cell of the factor-combination table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CombinationSpec {
    pub part: Part,
    pub level: Level,
}

impl CombinationSpec {
    pub const fn new(part: Part, level: Level) -> Self {
        Self { part, level }
    }

    pub fn all() -> [CombinationSpec; 6] {
        use Level::*;
        use Part::*;
        [
            Self::new(ReviewHolder, Macro),
            Self::new(ReviewHolder, Micro),
            Self::new(ReviewHolder, MacroMicro),
            Self::new(HolderAndEvaluator, Macro),
            Self::new(HolderAndEvaluator, Micro),
            Self::new(HolderAndEvaluator, MacroMicro),
        ]
    }

    /// Columns of this combination, in matrix order.
    pub fn factors(&self) -> Vec<Factor> {
        let weighted = self.part == Part::HolderAndEvaluator;
        let mut factors = Vec::with_capacity(5);
        if matches!(self.level, Level::Macro | Level::MacroMicro) {
            factors.extend([Factor::PositiveCount, Factor::NegativeCount]);
        }
        if matches!(self.level, Level::Micro | Level::MacroMicro) {
            factors.push(if weighted { Factor::AspectValueWeighted } else { Factor::AspectValue });
        }
        factors.push(if weighted { Factor::StarValueWeighted } else { Factor::StarValue });
        if weighted {
            factors.push(Factor::Helpfulness);
        }
        factors
    }
}

impl fmt::Display for CombinationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = match self.part {
            Part::ReviewHolder => "review_holder",
            Part::HolderAndEvaluator => "holder_and_evaluator",
        };
        let level = match self.level {
            Level::Macro => "macro",
            Level::Micro => "micro",
            Level::MacroMicro => "macro_micro",
        };
        write!(f, "{part}/{level}")
    }
}

impl FromStr for CombinationSpec {
    type Err = FactorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::all()
            .into_iter()
            .find(|c| c.to_string() == s.trim())
            .ok_or_else(|| FactorError::UnknownCombination(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    PositiveCount,
    NegativeCount,
    AspectValue,
    AspectValueWeighted,
    StarValue,
    StarValueWeighted,
    Helpfulness,
}

impl Factor {
    pub const ALL: [Factor; 7] = [
        Factor::PositiveCount,
        Factor::NegativeCount,
        Factor::AspectValue,
        Factor::AspectValueWeighted,
        Factor::StarValue,
        Factor::StarValueWeighted,
        Factor::Helpfulness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Factor::PositiveCount => "n_positive",
            Factor::NegativeCount => "n_negative",
            Factor::AspectValue => "aspect_value",
            Factor::AspectValueWeighted => "aspect_value_weighted",
            Factor::StarValue => "star_value",
            Factor::StarValueWeighted => "star_value_weighted",
            Factor::Helpfulness => "helpfulness",
        }
    }

    pub fn from_name(name: &str) -> Option<Factor> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn default_direction(self) -> Direction {
        match self {
            Factor::NegativeCount => Direction::Cost,
            _ => Direction::Benefit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Larger values raise the impact score.
    Benefit,
    /// Larger values lower the impact score.
    Cost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorOptions {
    pub scope: Scope,
    /// Add-one smoothing of helpfulness: `(yes + 1) / (total + 2)`.
    pub smoothing: bool,
    /// When false every factor is a benefit.
    pub directions: bool,
}

impl Default for FactorOptions {
    fn default() -> Self {
        Self { scope: Scope::Review, smoothing: false, directions: true }
    }
}

impl FactorOptions {
    pub fn direction(&self, factor: Factor) -> Direction {
        if self.directions {
            factor.default_direction()
        } else {
            Direction::Benefit
        }
    }
}

/// Share of helpful votes; 0 without votes unless smoothing is on.
pub fn helpfulness(review: &Review, smoothing: bool) -> f64 {
    if smoothing {
        (f64::from(review.helpful_yes) + 1.0) / (f64::from(review.helpful_total) + 2.0)
    } else if review.helpful_total == 0 {
        0.0
    } else {
        f64::from(review.helpful_yes) / f64::from(review.helpful_total)
    }
}

fn require_reviews(book: &Book) -> Result<(), FactorError> {
    if book.reviews.is_empty() {
        Err(FactorError::NoReviews(book.book_id.clone()))
    } else {
        Ok(())
    }
}

/// Mean star rating.
pub fn star_value(book: &Book) -> Result<f64, FactorError> {
    require_reviews(book)?;
    let total: u64 = book.reviews.iter().map(|r| u64::from(r.star)).sum();
    Ok(total as f64 / book.reviews.len() as f64)
}

/// Mean of `star * helpfulness`.
pub fn star_value_weighted(book: &Book, smoothing: bool) -> Result<f64, FactorError> {
    require_reviews(book)?;
    let total: f64 = book.reviews.iter().map(|r| f64::from(r.star) * helpfulness(r, smoothing)).sum();
    Ok(total / book.reviews.len() as f64)
}

/// Mean review helpfulness.
pub fn helpfulness_factor(book: &Book, smoothing: bool) -> Result<f64, FactorError> {
    require_reviews(book)?;
    let total: f64 = book.reviews.iter().map(|r| helpfulness(r, smoothing)).sum();
    Ok(total / book.reviews.len() as f64)
}

/// Mean of per-aspect values; aspects without mentions enter as 0.
pub fn aspect_factor(values: &[f64]) -> Result<f64, FactorError> {
    if values.is_empty() {
        return Err(FactorError::EmptyAspectSet);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Every factor of one book plus its per-aspect values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BookFactors {
    pub book_id: String,
    pub n_positive: usize,
    pub n_negative: usize,
    pub star_value: f64,
    pub star_value_weighted: f64,
    pub helpfulness: f64,
    /// Aspect values aligned with the aspect set.
    pub aspect_values: Vec<f64>,
    pub aspect_values_weighted: Vec<f64>,
    pub aspect_value: f64,
    pub aspect_value_weighted: f64,
}

impl BookFactors {
    pub fn compute(
        book: &Book,
        model: &PolarityModel,
        aspects: &AspectSet,
        lexicon: &SentimentLexicon,
        options: &FactorOptions,
    ) -> Result<Self, FactorError> {
        require_reviews(book)?;
        if aspects.is_empty() {
            return Err(FactorError::EmptyAspectSet);
        }
        let counts = count_polarities(book, model)?;
        let h: Vec<f64> = book.reviews.iter().map(|r| helpfulness(r, options.smoothing)).collect();
        let mut aspect_values = Vec::with_capacity(aspects.len());
        let mut aspect_values_weighted = Vec::with_capacity(aspects.len());
        for aspect in aspects.words() {
            let sps: Vec<i8> =
                book.reviews.iter().map(|r| aspect_polarity(r, aspect, lexicon, options.scope).sp).collect();
            aspect_values.push(aspect_value(sps.iter().copied()));
            aspect_values_weighted.push(aspect_value_weighted(sps.iter().copied().zip(h.iter().copied())));
        }
        Ok(Self {
            book_id: book.book_id.clone(),
            n_positive: counts.positive,
            n_negative: counts.negative,
            star_value: star_value(book)?,
            star_value_weighted: star_value_weighted(book, options.smoothing)?,
            helpfulness: helpfulness_factor(book, options.smoothing)?,
            aspect_value: aspect_factor(&aspect_values)?,
            aspect_value_weighted: aspect_factor(&aspect_values_weighted)?,
            aspect_values,
            aspect_values_weighted,
        })
    }

    pub fn get(&self, factor: Factor) -> f64 {
        match factor {
            Factor::PositiveCount => self.n_positive as f64,
            Factor::NegativeCount => self.n_negative as f64,
            Factor::AspectValue => self.aspect_value,
            Factor::AspectValueWeighted => self.aspect_value_weighted,
            Factor::StarValue => self.star_value,
            Factor::StarValueWeighted => self.star_value_weighted,
            Factor::Helpfulness => self.helpfulness,
        }
    }
}

/// All factors of every book in a partition, ordered by book id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorTable {
    pub aspects: AspectSet,
    pub options: FactorOptions,
    pub books: Vec<BookFactors>,
}

impl FactorTable {
    /// Computes every book's factors. Books are processed in parallel on the
    /// current rayon pool; the result is independent of the thread count.
    pub fn compute(
        partition: &Corpus,
        model: &PolarityModel,
        aspects: &AspectSet,
        lexicon: &SentimentLexicon,
        options: FactorOptions,
    ) -> Result<Self, FactorError> {
        if partition.is_empty() {
            return Err(FactorError::EmptyPartition);
        }
        let books = partition
            .books()
            .par_iter()
            .map(|book| BookFactors::compute(book, model, aspects, lexicon, &options))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { aspects: aspects.clone(), options, books })
    }

    pub fn book_ids(&self) -> Vec<String> {
        self.books.iter().map(|b| b.book_id.clone()).collect()
    }

    pub fn matrix(&self, spec: CombinationSpec) -> FactorMatrix {
        let factors = spec.factors();
        FactorMatrix {
            book_ids: self.book_ids(),
            factor_names: factors.iter().map(|f| f.name().to_string()).collect(),
            values: self.books.iter().map(|b| factors.iter().map(|&f| b.get(f)).collect()).collect(),
            directions: factors.iter().map(|&f| self.options.direction(f)).collect(),
        }
    }

    /// Every factor as its own column, for single-factor analysis.
    pub fn all_factors(&self) -> FactorMatrix {
        FactorMatrix {
            book_ids: self.book_ids(),
            factor_names: Factor::ALL.iter().map(|f| f.name().to_string()).collect(),
            values: self.books.iter().map(|b| Factor::ALL.iter().map(|&f| b.get(f)).collect()).collect(),
            directions: Factor::ALL.iter().map(|&f| self.options.direction(f)).collect(),
        }
    }

    /// One column per aspect, holding unweighted or weighted aspect values.
    pub fn aspect_matrix(&self, weighted: bool) -> FactorMatrix {
        FactorMatrix {
            book_ids: self.book_ids(),
            factor_names: self.aspects.words().map(String::from).collect(),
            values: self
                .books
                .iter()
                .map(|b| if weighted { b.aspect_values_weighted.clone() } else { b.aspect_values.clone() })
                .collect(),
            directions: vec![Direction::Benefit; self.aspects.len()],
        }
    }
}

/// Builds the factor matrix of `spec` for a filtered partition.
pub fn build_factor_matrix(
    partition: &Corpus,
    model: &PolarityModel,
    aspects: &AspectSet,
    lexicon: &SentimentLexicon,
    spec: CombinationSpec,
    options: FactorOptions,
) -> Result<FactorMatrix, FactorError> {
    Ok(FactorTable::compute(partition, model, aspects, lexicon, options)?.matrix(spec))
}

/// Books × factors values with per-factor directions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorMatrix {
    pub book_ids: Vec<String>,
    pub factor_names: Vec<String>,
    /// Row-major: `values[book][factor]`.
    pub values: Vec<Vec<f64>>,
    pub directions: Vec<Direction>,
}

impl FactorMatrix {
    pub fn new(
        book_ids: Vec<String>,
        factor_names: Vec<String>,
        values: Vec<Vec<f64>>,
        directions: Vec<Direction>,
    ) -> Result<Self, FactorError> {
        let shape = |m: String| Err(FactorError::Shape(m));
        if values.len() != book_ids.len() {
            return shape(format!("{} rows for {} books", values.len(), book_ids.len()));
        }
        if directions.len() != factor_names.len() {
            return shape("one direction per factor is required".into());
        }
        if book_ids.windows(2).any(|w| w[0] >= w[1]) {
            return shape("book ids must be unique and ascending".into());
        }
        for (id, row) in book_ids.iter().zip(&values) {
            if row.len() != factor_names.len() {
                return shape(format!("row {id} has {} values for {} factors", row.len(), factor_names.len()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return shape(format!("row {id} has a non-finite value"));
            }
        }
        Ok(Self { book_ids, factor_names, values, directions })
    }

    pub fn n_books(&self) -> usize {
        self.book_ids.len()
    }

    pub fn n_factors(&self) -> usize {
        self.factor_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[j]).collect()
    }

    /// `book_id,<factor names...>` header, one row per book.
    pub fn write_csv(&self, writer: impl Write) -> Result<(), FactorError> {
        let mut csv = csv::Writer::from_writer(writer);
        let mut header = vec!["book_id".to_string()];
        header.extend(self.factor_names.iter().cloned());
        csv.write_record(&header)?;
        for (id, row) in self.book_ids.iter().zip(&self.values) {
            let mut record = vec![id.clone()];
            record.extend(row.iter().map(|v| v.to_string()));
            csv.write_record(&record)?;
        }
        csv.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    /// Reads a matrix written by [`FactorMatrix::write_csv`]. Known factor
    /// names take their default direction; unknown names are benefits.
    pub fn read_csv(reader: impl Read) -> Result<Self, FactorError> {
        let mut csv = csv::Reader::from_reader(reader);
        let header = csv.headers()?.clone();
        if header.get(0) != Some("book_id") {
            return Err(FactorError::Shape("first column must be book_id".into()));
        }
        let factor_names: Vec<String> = header.iter().skip(1).map(String::from).collect();
        let mut book_ids = Vec::new();
        let mut values = Vec::new();
        for record in csv.records() {
            let record = record?;
            book_ids.push(record[0].to_string());
            let row = record
                .iter()
                .skip(1)
                .map(|v| v.trim().parse::<f64>().map_err(|e| FactorError::Shape(format!("{v:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            values.push(row);
        }
        let directions = factor_names
            .iter()
            .map(|n| Factor::from_name(n).map_or(Direction::Benefit, Factor::default_direction))
            .collect();
        Self::new(book_ids, factor_names, values, directions)
    }
}
