//! Book impact measurement from online review corpora.
//!
//! The pipeline mines reviews at two granularities and fuses the resulting
//! book-level factors into a single impact score:
//!
//! * [`corpus`]: ingestion, validation, tokenization and the review-count filter.
//! * [`polarity`]: TF-IDF features and a linear max-margin review classifier
//!   (macro level: positive/negative review counts).
//! * [`aspect`]: aspect extraction and distance-weighted aspect polarity
//!   (micro level: aspect sentiment values).
//! * [`factors`]: star, helpfulness and aspect factors assembled into a
//!   [`factors::FactorMatrix`] for one of six factor combinations.
//! * [`entropy`]: entropy-weight fusion into impact scores.
//! * [`analysis`]: Pearson correlation with two-tailed t-test significance
//!   against citation counts, plus grouped-aspect analysis.
//! * [`synth`]: seeded synthetic corpora with a planted quality signal.
//! * [`cli`]: the `bookimpact` command-line surface and report writers.
//!
//! See the crate's `examples/` directory for one runnable program per stage.

pub mod analysis;
pub mod aspect;
pub mod cli;
pub mod corpus;
pub mod entropy;
pub mod factors;
pub mod pipeline;
pub mod polarity;
pub mod synth;

pub use analysis::{pearson, significance, CorrelationResult};
pub use aspect::{AspectSet, AspectVocabulary, Scope, SentimentLexicon};
pub use corpus::{filter_books, load_corpus, tokenize, Book, Corpus, Review, TokenizerConfig};
pub use entropy::{EntropyWeights, ImpactScores, NormalizedMatrix};
pub use factors::{CombinationSpec, FactorMatrix, FactorOptions, Level, Part};
pub use polarity::{Hyperparams, Label, PolarityModel};
