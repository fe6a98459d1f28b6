//! Entropy-weight fusion of a factor matrix into impact scores.
//!
//! 1. Each column is min-max rescaled (reversed for cost factors) and divided
//!    by its sum, giving shares `p_ij`. Constant columns become uniform and
//!    are flagged degenerate.
//! 2. Column entropy `e_j = -(1 / ln n) * sum_i p_ij ln p_ij`, with `0 ln 0 = 0`.
//! 3. Weights `w_j = (1 - e_j) / (m - sum_k e_k)`.
//! 4. Scores `SB_i = sum_j p_ij w_j`.

use serde::Serialize;
use thiserror::Error;

use crate::factors::{Direction, FactorMatrix};

#[derive(Debug, Error, PartialEq)]
pub enum ScoringError {
    #[error("entropy weighting needs at least 2 books, got {0}")]
    TooFewBooks(usize),
    #[error("factor matrix has no factors")]
    NoFactors,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Column-normalized shares `p[book][factor]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizedMatrix {
    pub book_ids: Vec<String>,
    pub factor_names: Vec<String>,
    pub p: Vec<Vec<f64>>,
    /// Columns that were constant before normalization.
    pub degenerate: Vec<bool>,
}

impl NormalizedMatrix {
    pub fn n_books(&self) -> usize {
        self.p.len()
    }

    pub fn n_factors(&self) -> usize {
        self.degenerate.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.p.iter().map(|row| row[j]).collect()
    }
}

pub fn normalize(matrix: &FactorMatrix) -> Result<NormalizedMatrix, ScoringError> {
    let n = matrix.n_books();
    let m = matrix.n_factors();
    if n < 2 {
        return Err(ScoringError::TooFewBooks(n));
    }
    if m == 0 {
        return Err(ScoringError::NoFactors);
    }
    let mut p = vec![vec![0.0; m]; n];
    let mut degenerate = vec![false; m];
    for j in 0..m {
        let column = matrix.column(j);
        let min = column.iter().copied().fold(f64::INFINITY, f64::min);
        let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if max == min {
            degenerate[j] = true;
            for row in p.iter_mut() {
                row[j] = 1.0 / n as f64;
            }
            continue;
        }
        let range = max - min;
        let scaled: Vec<f64> = column
            .iter()
            .map(|&v| match matrix.directions[j] {
                Direction::Benefit => (v - min) / range,
                Direction::Cost => (max - v) / range,
            })
            .collect();
        let total: f64 = scaled.iter().sum();
        for (row, s) in p.iter_mut().zip(scaled) {
            row[j] = s / total;
        }
    }
    Ok(NormalizedMatrix {
        book_ids: matrix.book_ids.clone(),
        factor_names: matrix.factor_names.clone(),
        p,
        degenerate,
    })
}

/// Normalized Shannon entropy of a share column, clamped to `[0, 1]`.
pub fn column_entropy(p: &[f64], n_books: usize) -> f64 {
    if n_books < 2 {
        return 0.0;
    }
    let sum: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum();
    (-sum / (n_books as f64).ln()).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyWeights {
    pub entropy: Vec<f64>,
    pub weight: Vec<f64>,
    /// Set when every entropy is 1 and the weights fell back to uniform.
    pub uniform_fallback: bool,
}

pub fn entropy_weights(entropies: &[f64]) -> EntropyWeights {
    let m = entropies.len() as f64;
    let divergence: Vec<f64> = entropies.iter().map(|&e| (1.0 - e).max(0.0)).collect();
    let total: f64 = divergence.iter().sum();
    if total <= 0.0 {
        return EntropyWeights {
            entropy: entropies.to_vec(),
            weight: vec![1.0 / m; entropies.len()],
            uniform_fallback: true,
        };
    }
    // m - sum(e) == sum(1 - e)
    EntropyWeights {
        entropy: entropies.to_vec(),
        weight: divergence.iter().map(|d| d / total).collect(),
        uniform_fallback: false,
    }
}

/// Entropies of every column; degenerate columns are exactly 1.
pub fn matrix_entropies(p: &NormalizedMatrix) -> Vec<f64> {
    (0..p.n_factors())
        .map(|j| if p.degenerate[j] { 1.0 } else { column_entropy(&p.column(j), p.n_books()) })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactScores {
    pub book_ids: Vec<String>,
    pub scores: Vec<f64>,
    /// Dense rank, 1 = highest score; equal scores share a rank.
    pub ranks: Vec<usize>,
}

impl ImpactScores {
    pub fn get(&self, book_id: &str) -> Option<(f64, usize)> {
        self.book_ids.iter().position(|b| b == book_id).map(|i| (self.scores[i], self.ranks[i]))
    }
}

pub fn impact_scores(p: &NormalizedMatrix, w: &EntropyWeights) -> Result<ImpactScores, ScoringError> {
    if w.weight.len() != p.n_factors() {
        return Err(ScoringError::DimensionMismatch(format!(
            "{} weights for {} factors",
            w.weight.len(),
            p.n_factors()
        )));
    }
    let scores: Vec<f64> = p.p.iter().map(|row| row.iter().zip(&w.weight).map(|(p, w)| p * w).sum()).collect();
    Ok(ImpactScores { book_ids: p.book_ids.clone(), ranks: dense_ranks(&scores), scores })
}

pub fn dense_ranks(scores: &[f64]) -> Vec<usize> {
    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(|a, b| b.total_cmp(a));
    distinct.dedup();
    scores.iter().map(|s| distinct.iter().position(|d| d == s).map_or(0, |i| i + 1)).collect()
}

/// Everything one entropy-weight run produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub normalized: NormalizedMatrix,
    pub weights: EntropyWeights,
    pub scores: ImpactScores,
}

pub fn score(matrix: &FactorMatrix) -> Result<EntropyReport, ScoringError> {
    let normalized = normalize(matrix)?;
    let weights = entropy_weights(&matrix_entropies(&normalized));
    let scores = impact_scores(&normalized, &weights)?;
    Ok(EntropyReport { normalized, weights, scores })
}
