//! Independent reference implementations used by the integration tests.
//! They share no code with the library beyond its public data types.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use book_impact::aspect::AspectCount;
use book_impact::factors::Direction;
use book_impact::{AspectSet, Book, FactorMatrix, Review, SentimentLexicon, TokenizerConfig};

pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("representable")
}

/// Aspect polarity re-derived token by token: every lexicon token other
/// than the aspect itself contributes value / distance to the closest
/// occurrence of the aspect, summed exactly.
pub fn brute_force_sp(review: &Review, aspect: &str, lexicon: &SentimentLexicon, same_sentence_only: bool) -> i8 {
    let tokens = &review.tokens;
    let mut total = BigRational::zero();
    for k in 0..tokens.len() {
        if tokens[k] == aspect {
            continue;
        }
        let Some(value) = lexicon.value(&tokens[k]) else { continue };
        let mut best: Option<usize> = None;
        for (p, token) in tokens.iter().enumerate() {
            if token != aspect {
                continue;
            }
            if same_sentence_only && review.sentences[p] != review.sentences[k] {
                continue;
            }
            let d = p.abs_diff(k);
            best = Some(best.map_or(d, |b| b.min(d)));
        }
        if let Some(d) = best {
            total += BigRational::new(BigInt::from(value), BigInt::from(d));
        }
    }
    if total.is_positive() {
        1
    } else if total.is_negative() {
        -1
    } else {
        0
    }
}

/// Aspect value over the reviews of a book, with optional per-review weights.
pub fn brute_force_aspect_value(sps: &[i8], weights: Option<&[f64]>) -> f64 {
    let count: i64 = sps.iter().map(|s| i64::from(s.abs())).sum();
    if count == 0 {
        return 0.0;
    }
    let mut signed = BigRational::zero();
    for (i, &s) in sps.iter().enumerate() {
        let w = weights.map_or_else(|| BigRational::from_integer(1.into()), |w| exact(w[i]));
        signed += BigRational::from_integer(s.into()) * w;
    }
    to_f64(&(signed / BigRational::from_integer(count.into())))
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Entropy-weight fusion with the normalization done in exact rational
/// arithmetic and the logarithmic steps with compensated sums.
pub struct EntropyOracle {
    /// `p[book][factor]`.
    pub p: Vec<Vec<f64>>,
    pub degenerate: Vec<bool>,
    pub entropy: Vec<f64>,
    pub weight: Vec<f64>,
    pub scores: Vec<f64>,
}

pub fn entropy_oracle(values: &[Vec<f64>], directions: &[Direction]) -> EntropyOracle {
    let n = values.len();
    let m = directions.len();
    let mut p = vec![vec![0.0; m]; n];
    let mut degenerate = vec![false; m];
    for j in 0..m {
        let column: Vec<BigRational> = values.iter().map(|row| exact(row[j])).collect();
        let min = column.iter().min().unwrap().clone();
        let max = column.iter().max().unwrap().clone();
        if min == max {
            degenerate[j] = true;
            for row in p.iter_mut() {
                row[j] = to_f64(&BigRational::new(1.into(), BigInt::from(n)));
            }
            continue;
        }
        let range = &max - &min;
        let scaled: Vec<BigRational> = column
            .iter()
            .map(|v| match directions[j] {
                Direction::Benefit => (v - &min) / &range,
                Direction::Cost => (&max - v) / &range,
            })
            .collect();
        let total = scaled.iter().fold(BigRational::zero(), |a, b| a + b);
        for (row, s) in p.iter_mut().zip(&scaled) {
            row[j] = to_f64(&(s / &total));
        }
    }
    let ln_n = (n as f64).ln();
    let entropy: Vec<f64> = (0..m)
        .map(|j| {
            if degenerate[j] {
                1.0
            } else {
                let s = compensated_sum(p.iter().map(|row| row[j]).filter(|&x| x > 0.0).map(|x| x * x.ln()));
                (-s / ln_n).clamp(0.0, 1.0)
            }
        })
        .collect();
    let denominator = compensated_sum(entropy.iter().map(|e| 1.0 - e));
    let weight: Vec<f64> = if denominator > 0.0 {
        entropy.iter().map(|e| (1.0 - e) / denominator).collect()
    } else {
        vec![1.0 / m as f64; m]
    };
    let scores = p.iter().map(|row| compensated_sum(row.iter().zip(&weight).map(|(a, b)| a * b))).collect();
    EntropyOracle { p, degenerate, entropy, weight, scores }
}

/// Pearson r from the raw-moment formula, with the moments computed exactly.
pub fn textbook_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = BigRational::from_integer(BigInt::from(x.len()));
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) =
        (BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero());
    for (a, b) in x.iter().zip(y) {
        let (a, b) = (exact(*a), exact(*b));
        sxx += &a * &a;
        syy += &b * &b;
        sxy += &a * &b;
        sx += a;
        sy += b;
    }
    let num = &n * sxy - &sx * &sy;
    let dx = &n * sxx - &sx * &sx;
    let dy = &n * syy - &sy * &sy;
    to_f64(&num) / (to_f64(&dx).sqrt() * to_f64(&dy).sqrt())
}

/// `|a - b| <= rel * |b| + abs`.
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * b.abs() + abs
}

const WORDS: [&str; 10] = ["content", "price", "paper", "good", "bad", "great", "awful", "the", "is", "and"];

pub fn small_lexicon() -> SentimentLexicon {
    SentimentLexicon::new([("good", 1), ("great", 1), ("bad", -1), ("awful", -1)], &TokenizerConfig::default()).unwrap()
}

pub fn random_book(rng: &mut ChaCha8Rng, id: usize) -> Book {
    let book_id = format!("b{id}");
    let reviews = (0..rng.random_range(1..6))
        .map(|r| {
            let len = rng.random_range(0..14);
            let tokens: Vec<&str> = (0..len).map(|_| WORDS[rng.random_range(0..WORDS.len())]).collect();
            let total = rng.random_range(0..5u32);
            let mut review =
                Review::from_tokens(format!("{book_id}-{r}"), &book_id, 3, tokens, rng.random_range(0..=total), total)
                    .unwrap();
            let mut sentence = 0;
            for s in review.sentences.iter_mut() {
                if rng.random_bool(0.2) {
                    sentence += 1;
                }
                *s = sentence;
            }
            review
        })
        .collect();
    Book { book_id, title: String::new(), discipline: "d".into(), citation_count: 0, reviews }
}

pub fn small_aspect_set() -> AspectSet {
    AspectSet {
        partition: "d".into(),
        aspects: ["content", "price", "paper"].iter().map(|w| AspectCount { word: w.to_string(), frequency: 1 }).collect(),
    }
}

/// 3 to 50 books by 1 to 5 factors with mixed directions; some columns
/// are constant and some take only a few distinct values.
pub fn random_matrix(rng: &mut ChaCha8Rng) -> FactorMatrix {
    let n = rng.random_range(3..=50);
    let m = rng.random_range(1..=5);
    let kinds: Vec<u8> = (0..m).map(|_| rng.random_range(0..4)).collect();
    let constants: Vec<f64> = (0..m).map(|_| rng.random_range(-5.0..5.0)).collect();
    let values = (0..n)
        .map(|_| {
            (0..m)
                .map(|j| match kinds[j] {
                    0 => constants[j],
                    1 => f64::from(rng.random_range(0..200u32)),
                    2 => rng.random_range(-1.0..1.0),
                    _ => f64::from(rng.random_range(0..3u32)) * 0.5,
                })
                .collect()
        })
        .collect();
    let directions = (0..m).map(|_| if rng.random_bool(0.3) { Direction::Cost } else { Direction::Benefit }).collect();
    FactorMatrix::new((0..n).map(|i| format!("b{i:03}")).collect(), (0..m).map(|j| format!("f{j}")).collect(), values, directions)
        .unwrap()
}
