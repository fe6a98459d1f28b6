//! Seeded synthetic review corpora with a planted quality signal.
//!
//! Every book draws a latent quality `q` (uniform on `[0, 1]`, obtained as
//! `Phi(z)` for a standard normal `z`). Review stars, the share of positive
//! sentiment words near aspect nouns, the number of reviews and helpfulness
//! votes all rise with `q`. Citations follow a second latent
//! `z' = rho * z + sqrt(1 - rho^2) * eps`, mapped through its population rank
//! `Phi(z')` into an exponential citation curve, so `rho` controls how much
//! citations reflect the quality that reviews express.

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::AspectCategoryMap;
use crate::aspect::{AspectVocabulary, SentimentLexicon, COMMON_BOOK_ASPECTS};
use crate::corpus::{write_books_csv, write_reviews_jsonl, Book, Corpus, Review, Tokenizer, TokenizerConfig};
use crate::polarity::{write_labeled, Label, LabeledText};

const POSITIVE_WORDS: [&str; 20] = [
    "good", "great", "excellent", "amazing", "interesting", "insightful", "clear", "brilliant", "superb", "wonderful",
    "useful", "classic", "profound", "rigorous", "solid", "elegant", "fascinating", "outstanding", "valuable", "fine",
];
const NEGATIVE_WORDS: [&str; 20] = [
    "bad", "poor", "boring", "terrible", "awful", "expensive", "dull", "confusing", "shoddy", "disappointing",
    "tedious", "sloppy", "flimsy", "slow", "damaged", "overpriced", "useless", "weak", "mediocre", "outdated",
];
const EXTRA_ASPECTS: [&str; 8] = ["author", "chapter", "cover", "delivery", "index", "edition", "font", "binding"];
const FILLER: [&str; 14] =
    ["the", "this", "book", "is", "was", "really", "very", "and", "a", "of", "it", "i", "think", "overall"];

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthSpec {
    pub seed: u64,
    pub n_books: usize,
    /// Inclusive bounds on reviews per book.
    pub reviews_per_book: (usize, usize),
    /// Correlation of the latent quality and citation variables.
    pub quality_correlation: f64,
    /// Sentiment words, split evenly between polarities.
    pub lexicon_size: usize,
    pub aspect_count: usize,
    /// Probability that a review has no helpfulness votes.
    pub helpfulness_sparsity: f64,
    pub n_training_docs: usize,
    pub n_disciplines: usize,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            n_books: 40,
            reviews_per_book: (20, 130),
            quality_correlation: 0.9,
            lexicon_size: 40,
            aspect_count: 12,
            helpfulness_sparsity: 0.3,
            n_training_docs: 600,
            n_disciplines: 1,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        let fail = |m: &str| Err(SynthError::InvalidSpec(m.into()));
        if self.n_books < 3 {
            return fail("n_books must be at least 3");
        }
        if self.reviews_per_book.0 > self.reviews_per_book.1 || self.reviews_per_book.1 == 0 {
            return fail("reviews_per_book needs 0 < max and min <= max");
        }
        if !(0.0..=1.0).contains(&self.quality_correlation) {
            return fail("quality_correlation must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.helpfulness_sparsity) {
            return fail("helpfulness_sparsity must lie in [0, 1]");
        }
        if self.lexicon_size < 2 {
            return fail("lexicon_size must be at least 2");
        }
        if self.aspect_count == 0 {
            return fail("aspect_count must be at least 1");
        }
        if self.n_training_docs < 2 {
            return fail("n_training_docs must be at least 2");
        }
        if self.n_disciplines == 0 || self.n_disciplines > self.n_books {
            return fail("n_disciplines must lie in [1, n_books]");
        }
        Ok(())
    }
}

/// A generated corpus with every resource the pipeline needs.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub spec: SynthSpec,
    pub corpus: Corpus,
    pub lexicon: SentimentLexicon,
    pub vocab: AspectVocabulary,
    pub training: Vec<LabeledText>,
    pub latent_quality: BTreeMap<String, f64>,
}

fn word_list(base: &[&str], prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| base.get(i).map_or_else(|| format!("{prefix}{i}"), |w| w.to_string())).collect()
}

fn standard_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

struct Words {
    positive: Vec<String>,
    negative: Vec<String>,
    aspects: Vec<String>,
    /// Cumulative Zipf-like weights over `aspects`.
    aspect_cdf: Vec<f64>,
}

impl Words {
    fn new(spec: &SynthSpec) -> Self {
        let n_pos = spec.lexicon_size.div_ceil(2);
        let extra: Vec<&str> = COMMON_BOOK_ASPECTS.iter().chain(EXTRA_ASPECTS.iter()).copied().collect();
        let aspects = word_list(&extra, "aspect", spec.aspect_count);
        let mut total = 0.0;
        let aspect_cdf = (0..aspects.len())
            .map(|i| {
                total += 1.0 / (i as f64 + 1.0).powf(0.8);
                total
            })
            .collect::<Vec<_>>()
            .into_iter()
            .map(|c| c / total)
            .collect();
        Self {
            positive: word_list(&POSITIVE_WORDS, "posword", n_pos),
            negative: word_list(&NEGATIVE_WORDS, "negword", spec.lexicon_size - n_pos),
            aspects,
            aspect_cdf,
        }
    }

    fn aspect(&self, rng: &mut ChaCha8Rng) -> &str {
        let u: f64 = rng.random();
        let i = self.aspect_cdf.iter().position(|&c| u < c).unwrap_or(self.aspects.len() - 1);
        &self.aspects[i]
    }

    fn sentiment(&self, positive: bool, rng: &mut ChaCha8Rng) -> &str {
        let list = if positive { &self.positive } else { &self.negative };
        list.choose(rng).expect("non-empty word list")
    }
}

fn sentence(aspect: &str, sentiment: &str, rng: &mut ChaCha8Rng) -> String {
    match rng.random_range(0..4) {
        0 => format!("the {aspect} is {sentiment}"),
        1 => format!("{sentiment} {aspect}"),
        2 => format!("i think the {aspect} of this book is really {sentiment}"),
        _ => format!("overall {sentiment} and the {aspect} was very {sentiment}"),
    }
}

/// Generates a corpus; identical specs give identical output.
pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let words = Words::new(spec);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let tokenizer_config = TokenizerConfig::default();
    let tokenizer = Tokenizer::new(&tokenizer_config).expect("default tokenizer");
    let rho = spec.quality_correlation;
    let (min_reviews, max_reviews) = spec.reviews_per_book;

    let mut books = Vec::with_capacity(spec.n_books);
    let mut latent_quality = BTreeMap::new();
    for b in 0..spec.n_books {
        let book_id = format!("B{:04}", b + 1);
        let z: f64 = normal.sample(&mut rng);
        let quality = standard_normal_cdf(z);
        let z_cite = rho * z + (1.0 - rho * rho).sqrt() * normal.sample(&mut rng);
        let citation_count = (5.0 * (3.0 * standard_normal_cdf(z_cite)).exp()).round() as u64;

        let popularity = 0.5 * quality + 0.5 * rng.random::<f64>();
        let n_reviews = min_reviews + ((max_reviews - min_reviews) as f64 * popularity).round() as usize;
        let mut reviews = Vec::with_capacity(n_reviews);
        for r in 0..n_reviews {
            let perceived = (quality + 0.15 * normal.sample(&mut rng)).clamp(0.0, 1.0);
            let p_positive = 0.1 + 0.8 * perceived;
            let n_sentences = rng.random_range(1..=3);
            let text = (0..n_sentences)
                .map(|_| {
                    let positive = rng.random_bool(p_positive);
                    let aspect = words.aspect(&mut rng).to_string();
                    let sentiment = words.sentiment(positive, &mut rng).to_string();
                    sentence(&aspect, &sentiment, &mut rng)
                })
                .collect::<Vec<_>>()
                .join(". ")
                + ".";
            let star = (1.0 + 4.0 * perceived + 0.6 * normal.sample(&mut rng)).round().clamp(1.0, 5.0) as u8;
            let (yes, total) = if rng.random_bool(1.0 - spec.helpfulness_sparsity) {
                let total: u64 = rng.random_range(1..=60);
                let share = (0.3 + 0.6 * perceived).clamp(0.0, 1.0);
                let yes = Binomial::new(total, share).expect("valid binomial").sample(&mut rng);
                (yes as u32, total as u32)
            } else {
                (0, 0)
            };
            let review = Review::new(format!("{book_id}-R{:04}", r + 1), &book_id, star, text, yes, total, &tokenizer)
                .expect("generated review is valid");
            reviews.push(review);
        }
        latent_quality.insert(book_id.clone(), quality);
        books.push(Book {
            title: format!("Synthetic Title {}", b + 1),
            discipline: discipline_label(b % spec.n_disciplines, spec.n_disciplines),
            book_id,
            citation_count,
            reviews,
        });
    }

    let training = (0..spec.n_training_docs)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Positive } else { Label::Negative };
            let mut tokens: Vec<String> = (0..rng.random_range(2..=5))
                .map(|_| FILLER.choose(&mut rng).expect("filler").to_string())
                .collect();
            tokens.push(words.aspect(&mut rng).to_string());
            for _ in 0..rng.random_range(1..=3) {
                tokens.push(words.sentiment(label == Label::Positive, &mut rng).to_string());
            }
            tokens.shuffle_in_place(&mut rng);
            LabeledText { text: tokens.join(" "), label }
        })
        .collect();

    let lexicon = SentimentLexicon::new(
        words.positive.iter().map(|w| (w, 1)).chain(words.negative.iter().map(|w| (w, -1))),
        &tokenizer_config,
    )
    .expect("generated lexicon is valid");
    let vocab = AspectVocabulary::new(&words.aspects, &tokenizer_config).expect("generated vocabulary is valid");
    let corpus = Corpus::new(books, tokenizer_config).expect("generated corpus is valid");
    Ok(SynthCorpus { spec: spec.clone(), corpus, lexicon, vocab, training, latent_quality })
}

fn discipline_label(i: usize, n: usize) -> String {
    if n == 1 {
        "synthetic".to_string()
    } else {
        format!("discipline_{}", i + 1)
    }
}

trait ShuffleInPlace {
    fn shuffle_in_place(&mut self, rng: &mut ChaCha8Rng);
}

impl<T> ShuffleInPlace for Vec<T> {
    fn shuffle_in_place(&mut self, rng: &mut ChaCha8Rng) {
        use rand::seq::SliceRandom;
        self.shuffle(rng);
    }
}

/// File names written by [`SynthCorpus::write_to`].
pub const REVIEWS_FILE: &str = "reviews.jsonl";
pub const BOOKS_FILE: &str = "books.csv";
pub const LEXICON_FILE: &str = "lexicon.tsv";
pub const ASPECTS_FILE: &str = "aspects.txt";
pub const TRAINING_FILE: &str = "training.jsonl";
pub const CATEGORIES_FILE: &str = "categories.json";

impl SynthCorpus {
    /// Writes the corpus and resource files into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(), SynthError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| SynthError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io(dir))?;
        let create = |name: &str| {
            let path = dir.join(name);
            fs::File::create(&path).map(BufWriter::new).map_err(io(&path))
        };
        write_reviews_jsonl(&self.corpus, create(REVIEWS_FILE)?).map_err(io(&dir.join(REVIEWS_FILE)))?;
        write_books_csv(&self.corpus, create(BOOKS_FILE)?).map_err(io(&dir.join(BOOKS_FILE)))?;
        write_labeled(&self.training, create(TRAINING_FILE)?).map_err(io(&dir.join(TRAINING_FILE)))?;

        let lexicon: String =
            self.lexicon.iter().map(|(w, v)| format!("{w}\t{}\n", if v > 0 { "+1" } else { "-1" })).collect();
        fs::write(dir.join(LEXICON_FILE), lexicon).map_err(io(&dir.join(LEXICON_FILE)))?;
        let aspects: String = self.vocab.iter().map(|w| format!("{w}\n")).collect();
        fs::write(dir.join(ASPECTS_FILE), aspects).map_err(io(&dir.join(ASPECTS_FILE)))?;
        let categories = serde_json::to_string_pretty(&AspectCategoryMap::default()).expect("serializable") + "\n";
        fs::write(dir.join(CATEGORIES_FILE), categories).map_err(io(&dir.join(CATEGORIES_FILE)))?;
        Ok(())
    }
}
