//! Finite metric spaces: validation, embedding parameters, generators and
//! document formats.

mod generate;
mod io;
mod params;

pub use generate::{generate, sup_metric_points, SpaceKind};
pub use io::{read_csv, read_structured, write_csv, write_structured, IngestError, SpaceDocument};
pub use params::{params, EmbeddingParams};

use std::collections::HashSet;

use thiserror::Error;

use crate::numerics::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("a metric space needs at least one point")]
    Empty,
    #[error("{labels} labels for a {rows}-row matrix")]
    LabelCount { labels: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("nonzero diagonal at ({i}, {i}): {value}")]
    NonzeroDiagonal { i: usize, value: Rational },
    #[error("asymmetric at ({i}, {j}): {forward} != {backward}")]
    Asymmetric { i: usize, j: usize, forward: Rational, backward: Rational },
    #[error("non-positive distance at ({i}, {j}): {value}")]
    NonPositive { i: usize, j: usize, value: Rational },
    #[error("triangle inequality fails for ({i}, {j}, {k}): d({i},{k}) = {direct} > d({i},{j}) + d({j},{k}) = {detour}")]
    Triangle { i: usize, j: usize, k: usize, direct: Rational, detour: Rational },
    #[error("singleton space: the embedding parameters need at least two points")]
    Singleton,
    #[error("embedding dimension {0} is too large")]
    DimensionTooLarge(String),
    #[error("unknown space kind {0:?}")]
    UnknownKind(String),
}

impl MetricError {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            MetricError::Empty => "empty",
            MetricError::LabelCount { .. } => "label-count",
            MetricError::NotSquare { .. } => "not-square",
            MetricError::DuplicateLabel(_) => "duplicate-label",
            MetricError::NonzeroDiagonal { .. } => "nonzero-diagonal",
            MetricError::Asymmetric { .. } => "symmetry",
            MetricError::NonPositive { .. } => "non-positive",
            MetricError::Triangle { .. } => "triangle",
            MetricError::Singleton => "singleton",
            MetricError::DimensionTooLarge(_) => "dimension-too-large",
            MetricError::UnknownKind(_) => "unknown-kind",
        }
    }
}

/// Labeled points with an exact distance matrix satisfying the metric axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
}

impl FiniteMetricSpace {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    /// Labels `x1, x2, …`.
    pub fn from_matrix(matrix: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let labels = (1..=matrix.len()).map(|i| format!("x{i}")).collect();
        validate(labels, matrix)
    }

    /// Whether distinct points are at least `eps` apart.
    pub fn is_dispersed(&self, eps: &Rational) -> bool {
        self.off_diagonal().all(|(_, _, d)| d >= eps)
    }

    /// Minimum distance between distinct points, if there are two.
    pub fn min_distance(&self) -> Option<Rational> {
        self.off_diagonal().map(|(_, _, d)| d.clone()).min()
    }

    pub fn diameter(&self) -> Rational {
        self.off_diagonal().map(|(_, _, d)| d.clone()).max().unwrap_or_else(Rational::zero)
    }

    fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.dist
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().skip(i + 1).map(move |(j, d)| (i, j, d)))
    }
}

/// Checks shape, then the metric axioms one at a time, and reports the first
/// violation with its witness indices.
pub fn validate(labels: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<FiniteMetricSpace, MetricError> {
    let p = matrix.len();
    if p == 0 {
        return Err(MetricError::Empty);
    }
    if labels.len() != p {
        return Err(MetricError::LabelCount { labels: labels.len(), rows: p });
    }
    if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != p) {
        return Err(MetricError::NotSquare { row, len: r.len(), expected: p });
    }
    let mut seen = HashSet::new();
    if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
        return Err(MetricError::DuplicateLabel(dup.clone()));
    }
    for (i, row) in matrix.iter().enumerate() {
        if !row[i].is_zero() {
            return Err(MetricError::NonzeroDiagonal { i, value: row[i].clone() });
        }
    }
    for i in 0..p {
        for j in i + 1..p {
            if matrix[i][j] != matrix[j][i] {
                return Err(MetricError::Asymmetric {
                    i,
                    j,
                    forward: matrix[i][j].clone(),
                    backward: matrix[j][i].clone(),
                });
            }
        }
    }
    for i in 0..p {
        for j in i + 1..p {
            if !matrix[i][j].is_positive() {
                return Err(MetricError::NonPositive { i, j, value: matrix[i][j].clone() });
            }
        }
    }
    for i in 0..p {
        for j in 0..p {
            for k in 0..p {
                let detour = &matrix[i][j] + &matrix[j][k];
                if matrix[i][k] > detour {
                    return Err(MetricError::Triangle { i, j, k, direct: matrix[i][k].clone(), detour });
                }
            }
        }
    }
    Ok(FiniteMetricSpace { labels, dist: matrix })
}
