//! Review and book data: validation, tokenization, the review-count filter.

mod io;
mod tokenize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{load_corpus, load_dictionary, read_books_csv, read_reviews_jsonl, write_books_csv, write_reviews_jsonl};
pub use tokenize::{tokenize, TokenStream, Tokenizer, TokenizerConfig, TokenizerMode, SENTENCE_BOUNDARIES};

/// Default review-count threshold: books need strictly more reviews than this.
pub const DEFAULT_MIN_REVIEWS: usize = 10;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{} invalid row(s):\n{}", .0.len(), join_diagnostics(.0))]
    InvalidRows(Vec<RowDiagnostic>),
    #[error("dictionary tokenizer mode requires a non-empty dictionary")]
    EmptyDictionary,
    #[error("invalid review {review_id}: {message}")]
    InvalidReview { review_id: String, message: String },
    #[error("invalid corpus: {0}")]
    Invalid(String),
}

/// A rejected input row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDiagnostic {
    pub source: String,
    /// 1-based line number in the source file.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.source, self.line, self.message)
    }
}

fn join_diagnostics(rows: &[RowDiagnostic]) -> String {
    rows.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

/// One online review.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Review {
    pub review_id: String,
    pub book_id: String,
    pub star: u8,
    pub text: String,
    pub helpful_yes: u32,
    pub helpful_total: u32,
    #[serde(skip)]
    pub tokens: Vec<String>,
    /// Sentence index of each token, parallel to `tokens`.
    #[serde(skip)]
    pub sentences: Vec<u32>,
}

impl Review {
    pub fn new(
        review_id: impl Into<String>,
        book_id: impl Into<String>,
        star: u8,
        text: impl Into<String>,
        helpful_yes: u32,
        helpful_total: u32,
        tokenizer: &Tokenizer,
    ) -> Result<Self, CorpusError> {
        let text = text.into();
        let stream = tokenizer.tokenize_with_sentences(&text);
        let review = Self {
            review_id: review_id.into(),
            book_id: book_id.into(),
            star,
            text,
            helpful_yes,
            helpful_total,
            tokens: stream.tokens,
            sentences: stream.sentences,
        };
        review.validate()?;
        Ok(review)
    }

    /// Builds a review from pre-tokenized text; every token sits in sentence 0.
    pub fn from_tokens<S: Into<String>>(
        review_id: impl Into<String>,
        book_id: impl Into<String>,
        star: u8,
        tokens: impl IntoIterator<Item = S>,
        helpful_yes: u32,
        helpful_total: u32,
    ) -> Result<Self, CorpusError> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let review = Self {
            review_id: review_id.into(),
            book_id: book_id.into(),
            star,
            text: tokens.join(" "),
            helpful_yes,
            helpful_total,
            sentences: vec![0; tokens.len()],
            tokens,
        };
        review.validate()?;
        Ok(review)
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        let fail = |message: String| CorpusError::InvalidReview { review_id: self.review_id.clone(), message };
        if !(1..=5).contains(&self.star) {
            return Err(fail(format!("star {} outside [1, 5]", self.star)));
        }
        if self.helpful_yes > self.helpful_total {
            return Err(fail(format!(
                "helpful_yes {} exceeds helpful_total {}",
                self.helpful_yes, self.helpful_total
            )));
        }
        if self.tokens.len() != self.sentences.len() {
            return Err(fail("token and sentence index lengths differ".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Book {
    pub book_id: String,
    pub title: String,
    pub discipline: String,
    pub citation_count: u64,
    pub reviews: Vec<Review>,
}

/// A validated collection of books, sorted by `book_id`, each book's reviews
/// sorted by `review_id`.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    books: Vec<Book>,
    discipline_index: BTreeMap<String, Vec<String>>,
    tokenizer_config: TokenizerConfig,
}

impl Corpus {
    pub fn new(mut books: Vec<Book>, tokenizer_config: TokenizerConfig) -> Result<Self, CorpusError> {
        books.sort_by(|a, b| a.book_id.cmp(&b.book_id));
        let mut seen_reviews = BTreeSet::new();
        for pair in books.windows(2) {
            if pair[0].book_id == pair[1].book_id {
                return Err(CorpusError::Invalid(format!("duplicate book_id {}", pair[0].book_id)));
            }
        }
        for book in &mut books {
            book.reviews.sort_by(|a, b| a.review_id.cmp(&b.review_id));
            for review in &book.reviews {
                review.validate()?;
                if review.book_id != book.book_id {
                    return Err(CorpusError::Invalid(format!(
                        "review {} names book {} but is attached to {}",
                        review.review_id, review.book_id, book.book_id
                    )));
                }
                if !seen_reviews.insert(review.review_id.clone()) {
                    return Err(CorpusError::Invalid(format!("duplicate review_id {}", review.review_id)));
                }
            }
        }
        let mut discipline_index: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for book in &books {
            discipline_index.entry(book.discipline.clone()).or_default().push(book.book_id.clone());
        }
        Ok(Self { books, discipline_index, tokenizer_config })
    }

    pub fn books(&self) -> &[Book] {
        &self.books
    }

    pub fn book(&self, book_id: &str) -> Option<&Book> {
        self.books.binary_search_by(|b| b.book_id.as_str().cmp(book_id)).ok().map(|i| &self.books[i])
    }

    pub fn is_empty(&self) -> bool {
        self.books.is_empty()
    }

    pub fn len(&self) -> usize {
        self.books.len()
    }

    pub fn review_count(&self) -> usize {
        self.books.iter().map(|b| b.reviews.len()).sum()
    }

    pub fn reviews(&self) -> impl Iterator<Item = &Review> {
        self.books.iter().flat_map(|b| b.reviews.iter())
    }

    pub fn tokenizer_config(&self) -> &TokenizerConfig {
        &self.tokenizer_config
    }

    pub fn discipline_index(&self) -> &BTreeMap<String, Vec<String>> {
        &self.discipline_index
    }

    pub fn disciplines(&self) -> impl Iterator<Item = &str> {
        self.discipline_index.keys().map(String::as_str)
    }

    /// The sub-corpus of one discipline (empty when the label is unknown).
    pub fn partition(&self, discipline: &str) -> Corpus {
        self.retain(|b| b.discipline == discipline)
    }

    /// Citation counts keyed by book id.
    pub fn citations(&self) -> BTreeMap<String, u64> {
        self.books.iter().map(|b| (b.book_id.clone(), b.citation_count)).collect()
    }

    fn retain(&self, keep: impl Fn(&Book) -> bool) -> Corpus {
        let books: Vec<Book> = self.books.iter().filter(|b| keep(b)).cloned().collect();
        let mut discipline_index: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for book in &books {
            discipline_index.entry(book.discipline.clone()).or_default().push(book.book_id.clone());
        }
        Corpus { books, discipline_index, tokenizer_config: self.tokenizer_config.clone() }
    }
}

/// Keeps the books with strictly more than `min_reviews` reviews.
pub fn filter_books(corpus: &Corpus, min_reviews: usize) -> Corpus {
    corpus.retain(|b| b.reviews.len() > min_reviews)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn book(id: &str, discipline: &str, n_reviews: usize) -> Book {
        let reviews = (0..n_reviews)
            .map(|i| Review::from_tokens(format!("{id}-r{i:03}"), id, 4, ["fine"], 0, 0).unwrap())
            .collect();
        Book { book_id: id.into(), title: id.into(), discipline: discipline.into(), citation_count: 1, reviews }
    }

    fn corpus(sizes: &[usize]) -> Corpus {
        let books = sizes.iter().enumerate().map(|(i, &n)| book(&format!("b{i}"), "econ", n)).collect();
        Corpus::new(books, TokenizerConfig::default()).unwrap()
    }

    #[test]
    fn filter_is_strict() {
        let filtered = filter_books(&corpus(&[11, 10, 30]), 10);
        let ids: Vec<_> = filtered.books().iter().map(|b| b.book_id.as_str()).collect();
        assert_eq!(ids, ["b0", "b2"]);
        assert_eq!(filtered.books()[0].reviews.len(), 11);
    }

    #[test]
    fn filter_can_empty_the_corpus() {
        let filtered = filter_books(&corpus(&[3, 10]), DEFAULT_MIN_REVIEWS);
        assert!(filtered.is_empty());
        assert!(filtered.discipline_index().is_empty());
    }

    #[test]
    fn filter_is_idempotent() {
        let c = corpus(&[0, 5, 11, 12, 40]);
        let once = filter_books(&c, 10);
        assert_eq!(filter_books(&once, 10), once);
    }

    #[test]
    fn invalid_reviews_are_rejected() {
        assert!(Review::from_tokens("r", "b", 6, ["x"], 0, 0).is_err());
        assert!(Review::from_tokens("r", "b", 0, ["x"], 0, 0).is_err());
        assert!(Review::from_tokens("r", "b", 3, ["x"], 11, 10).is_err());
        let ok = Review::from_tokens("r", "b", 3, ["x"], 9, 10).unwrap();
        assert_eq!((ok.helpful_yes, ok.helpful_total), (9, 10));
    }

    #[test]
    fn duplicate_book_ids_are_rejected() {
        let err = Corpus::new(vec![book("a", "x", 1), book("a", "y", 0)], TokenizerConfig::default());
        assert!(matches!(err, Err(CorpusError::Invalid(_))));
    }

    #[test]
    fn books_sorted_and_indexed() {
        let c = Corpus::new(vec![book("z", "lit", 1), book("a", "econ", 2), book("m", "lit", 0)], TokenizerConfig::default())
            .unwrap();
        let ids: Vec<_> = c.books().iter().map(|b| b.book_id.as_str()).collect();
        assert_eq!(ids, ["a", "m", "z"]);
        assert_eq!(c.discipline_index()["lit"], ["m", "z"]);
        assert_eq!(c.partition("lit").len(), 2);
        assert!(c.book("m").is_some());
        assert!(c.book("q").is_none());
    }
}
