//! Correlation of impact scores, single factors and aspect values with
//! citation counts.

mod categories;
mod stats;
mod table;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub use categories::{group_aspect_values, AspectCategoryMap};
pub use stats::{
    fractional_ranks, ln_gamma, pearson, regularized_incomplete_beta, significance, spearman, student_t_two_tailed,
    CorrelationResult, Method,
};
pub use table::{CorrelationTable, TableRow};

use crate::entropy::ImpactScores;
use crate::factors::FactorMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("at least 3 samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("correlation is undefined for a constant vector")]
    ConstantVector,
    #[error("correlation coefficient {0} outside [-1, 1]")]
    InvalidCorrelation(f64),
    #[error("book sets differ: {0}")]
    MismatchedBooks(String),
    #[error("category {0} has no aspects in the aspect set")]
    EmptyCategory(String),
    #[error("invalid category map: {0}")]
    InvalidCategoryMap(String),
}

/// Correlation plus significance of two aligned samples.
pub fn correlate(x: &[f64], y: &[f64], method: Method) -> Result<CorrelationResult, AnalysisError> {
    let r = match method {
        Method::Pearson => pearson(x, y)?,
        Method::Spearman => spearman(x, y)?,
    };
    significance(r, x.len())
}

fn aligned_citations(book_ids: &[String], citations: &BTreeMap<String, u64>) -> Result<Vec<f64>, AnalysisError> {
    if book_ids.len() != citations.len() {
        return Err(AnalysisError::MismatchedBooks(format!(
            "{} scored books vs {} cited books",
            book_ids.len(),
            citations.len()
        )));
    }
    book_ids
        .iter()
        .map(|id| {
            citations
                .get(id)
                .map(|&c| c as f64)
                .ok_or_else(|| AnalysisError::MismatchedBooks(format!("no citation count for {id}")))
        })
        .collect()
}

fn sorted_pairs(book_ids: &[String], values: &[f64]) -> (Vec<String>, Vec<f64>) {
    let mut pairs: Vec<(&String, f64)> = book_ids.iter().zip(values.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.cmp(b.0));
    pairs.into_iter().map(|(id, v)| (id.clone(), v)).unzip()
}

/// Correlates impact scores with citations, aligned by ascending book id.
pub fn correlate_scores(
    scores: &ImpactScores,
    citations: &BTreeMap<String, u64>,
    method: Method,
) -> Result<CorrelationResult, AnalysisError> {
    let (ids, values) = sorted_pairs(&scores.book_ids, &scores.scores);
    correlate(&values, &aligned_citations(&ids, citations)?, method)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorCorrelation {
    pub factor: String,
    pub result: Result<CorrelationResult, String>,
}

/// Column-wise correlation with citations; a failing column (for example a
/// constant one) carries its error without affecting the others.
pub fn correlate_factors(
    matrix: &FactorMatrix,
    citations: &BTreeMap<String, u64>,
    method: Method,
) -> Result<Vec<FactorCorrelation>, AnalysisError> {
    let cited = aligned_citations(&matrix.book_ids, citations)?;
    Ok((0..matrix.n_factors())
        .map(|j| {
            let (_, column) = sorted_pairs(&matrix.book_ids, &matrix.column(j));
            let (_, y) = sorted_pairs(&matrix.book_ids, &cited);
            FactorCorrelation {
                factor: matrix.factor_names[j].clone(),
                result: correlate(&column, &y, method).map_err(|e| e.to_string()),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::dense_ranks;
    use crate::factors::Direction;

    fn citations(values: &[u64]) -> BTreeMap<String, u64> {
        values.iter().enumerate().map(|(i, &c)| (format!("b{i}"), c)).collect()
    }

    #[test]
    fn scores_identical_to_citations() {
        let cites = [5u64, 1, 9, 3];
        let scores: Vec<f64> = cites.iter().map(|&c| c as f64).collect();
        let s = ImpactScores {
            book_ids: (0..4).map(|i| format!("b{i}")).collect(),
            ranks: dense_ranks(&scores),
            scores,
        };
        let r = correlate_scores(&s, &citations(&cites), Method::Pearson).unwrap();
        assert!((r.r - 1.0).abs() < 1e-15);
        assert_eq!(r.p_two_tailed, 0.0);
    }

    #[test]
    fn mismatched_book_sets() {
        let s = ImpactScores { book_ids: vec!["b0".into(), "x".into(), "b2".into()], scores: vec![1.0, 2.0, 3.0], ranks: vec![3, 2, 1] };
        assert!(matches!(correlate_scores(&s, &citations(&[1, 2, 3]), Method::Pearson), Err(AnalysisError::MismatchedBooks(_))));
        assert!(matches!(correlate_scores(&s, &citations(&[1, 2]), Method::Pearson), Err(AnalysisError::MismatchedBooks(_))));
    }

    #[test]
    fn factor_columns_fail_independently() {
        let cites = [3u64, 7, 1, 4];
        let m = FactorMatrix::new(
            (0..4).map(|i| format!("b{i}")).collect(),
            vec!["constant".into(), "cites".into(), "noise".into()],
            cites.iter().zip([0.3, -1.0, 2.0, 0.5]).map(|(&c, n)| vec![1.0, c as f64, n]).collect(),
            vec![Direction::Benefit; 3],
        )
        .unwrap();
        let out = correlate_factors(&m, &citations(&cites), Method::Pearson).unwrap();
        assert!(out[0].result.is_err());
        assert!((out[1].result.as_ref().unwrap().r - 1.0).abs() < 1e-15);
        let scores = ImpactScores { book_ids: m.book_ids.clone(), scores: m.column(2), ranks: dense_ranks(&m.column(2)) };
        assert_eq!(out[2].result.as_ref().unwrap(), &correlate_scores(&scores, &citations(&cites), Method::Pearson).unwrap());
    }
}
