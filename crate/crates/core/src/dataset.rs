//! Dense point sets and Euclidean distance primitives.
//!
//! A [`Dataset`] is an `m x n` row-major matrix of finite reals: one row per
//! session (or synthetic point), one column per URL (or coordinate).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("dataset has no rows")]
    Empty,
    #[error("dataset rows have no columns")]
    NoColumns,
    #[error("row {row} has {found} columns, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// `m` points in `n` dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Dataset {
    /// Builds a dataset from a non-empty list of equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, DataError> {
        let first = rows.first().ok_or(DataError::Empty)?;
        let cols = first.as_ref().len();
        let mut values = Vec::with_capacity(rows.len() * cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(DataError::Ragged {
                    row: r,
                    expected: cols,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::from_flat(values, rows.len(), cols)
    }

    /// Builds a dataset from a row-major buffer of `rows * cols` values.
    pub fn from_flat(values: Vec<f64>, rows: usize, cols: usize) -> Result<Self, DataError> {
        if rows == 0 {
            return Err(DataError::Empty);
        }
        if cols == 0 {
            return Err(DataError::NoColumns);
        }
        if values.len() != rows * cols {
            return Err(DataError::DimensionMismatch {
                left: values.len(),
                right: rows * cols,
            });
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(DataError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Dataset { values, rows, cols })
    }

    /// A dataset with zero rows and `cols` columns, e.g. the vectorization
    /// of an empty session list. Every clustering routine rejects it.
    pub fn empty(cols: usize) -> Self {
        Dataset {
            values: Vec::new(),
            rows: 0,
            cols,
        }
    }

    /// Number of points `m`.
    pub fn len(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    /// Number of dimensions `n`.
    pub fn dim(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        // chunks_exact would panic on cols == 0 for the empty dataset.
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.values
    }

    /// Applies `f` to every coordinate, keeping the shape.
    pub fn map_values(&self, mut f: impl FnMut(usize, f64) -> f64) -> Result<Self, DataError> {
        let cols = self.cols;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(pos, &v)| f(pos % cols, v))
            .collect();
        Self::from_flat(values, self.rows, self.cols)
    }
}

/// Squared Euclidean distance `sum_k (x_k - y_k)^2`.
pub fn squared_distance(x: &[f64], y: &[f64]) -> Result<f64, DataError> {
    if x.len() != y.len() {
        return Err(DataError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(sq_dist(x, y))
}

/// Euclidean distance, the square root of [`squared_distance`].
pub fn distance(x: &[f64], y: &[f64]) -> Result<f64, DataError> {
    squared_distance(x, y).map(f64::sqrt)
}

#[inline]
pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum()
}

/// Symmetric `m x m` matrix of unsquared Euclidean distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.size..(i + 1) * self.size]
    }
}

/// Computes all pairwise distances. Each pair is evaluated once and mirrored,
/// so the result is exactly symmetric with a zero diagonal.
pub fn distance_matrix(data: &Dataset) -> DistanceMatrix {
    let m = data.len();
    let mut values = vec![0.0; m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let d = sq_dist(data.row(i), data.row(j)).sqrt();
            values[i * m + j] = d;
            values[j * m + i] = d;
        }
    }
    DistanceMatrix { size: m, values }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squared_distance_examples() {
        assert_eq!(squared_distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(squared_distance(&[1.5, -2.0], &[1.5, -2.0]).unwrap(), 0.0);
        assert_eq!(squared_distance(&[1.0, 2.0], &[2.0, 4.0]).unwrap(), 5.0);
        assert_eq!(distance(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn squared_distance_rejects_mismatched_lengths() {
        assert_eq!(
            squared_distance(&[1.0], &[1.0, 2.0]),
            Err(DataError::DimensionMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn distance_matrix_small_cases() {
        let d = distance_matrix(&Dataset::from_rows(&[[0.0], [3.0]]).unwrap());
        assert_eq!(d.row(0), &[0.0, 3.0]);
        assert_eq!(d.row(1), &[3.0, 0.0]);

        let single = distance_matrix(&Dataset::from_rows(&[[7.0, 1.0]]).unwrap());
        assert_eq!(single.len(), 1);
        assert_eq!(single.get(0, 0), 0.0);
    }

    #[test]
    fn distance_matrix_matches_pairwise_calls() {
        let rows = [
            [0.3, -1.2],
            [2.5, 0.0],
            [-4.0, 3.3],
            [1.0, 1.0],
            [0.0, 7.5],
            [-2.2, -2.2],
        ];
        let data = Dataset::from_rows(&rows).unwrap();
        let d = distance_matrix(&data);
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                assert_eq!(d.get(i, j), distance(&rows[i], &rows[j]).unwrap());
            }
        }
    }

    #[test]
    fn construction_errors() {
        let empty: [[f64; 2]; 0] = [];
        assert_eq!(Dataset::from_rows(&empty), Err(DataError::Empty));
        assert_eq!(
            Dataset::from_rows(&[vec![1.0, 2.0], vec![1.0]]),
            Err(DataError::Ragged {
                row: 1,
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            Dataset::from_rows(&[[1.0, f64::NAN]]),
            Err(DataError::NonFinite { row: 0, col: 1 })
        );
        let blank: [[f64; 0]; 1] = [[]];
        assert_eq!(Dataset::from_rows(&blank), Err(DataError::NoColumns));
    }

    #[test]
    fn empty_dataset_keeps_width() {
        let d = Dataset::empty(4);
        assert!(d.is_empty());
        assert_eq!(d.dim(), 4);
        assert_eq!(d.rows().count(), 0);
    }
}
