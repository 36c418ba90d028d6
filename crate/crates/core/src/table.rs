//! Validated block-maxima tables.
//!
//! A [`BlockMaximaTable`] holds `n` observations (blocks) of maxima at `k`
//! labelled locations. Values are stored row-major and are never
//! interpreted: only their within-column ordering matters to the
//! estimators.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Label of a single location (a column of a table).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LocationId(String);

impl LocationId {
    pub fn new(label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        if label.trim().is_empty() {
            return Err(Error::InvalidLabel(
                "location labels must be nonempty".into(),
            ));
        }
        Ok(Self(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LocationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn validate_labels(labels: &[LocationId]) -> Result<()> {
    let mut seen = HashSet::with_capacity(labels.len());
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel(label.to_string()));
        }
    }
    Ok(())
}

/// `n × k` matrix of block maxima with one label per column.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMaximaTable {
    locations: Vec<LocationId>,
    values: Vec<f64>,
    n: usize,
}

impl BlockMaximaTable {
    /// Validates a labelled matrix given as rows.
    ///
    /// Requires `k >= 2` columns, `n >= 2` rows, equal row lengths, unique
    /// labels and finite entries. Nothing is dropped or repaired.
    pub fn new<S: Into<String>>(labels: Vec<S>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let locations = labels
            .into_iter()
            .map(LocationId::new)
            .collect::<Result<Vec<_>>>()?;
        Self::from_locations(locations, rows)
    }

    pub fn from_locations(locations: Vec<LocationId>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let k = locations.len();
        if k < 2 {
            return Err(Error::Dimension(format!(
                "need at least 2 locations, got {k}"
            )));
        }
        if rows.len() < 2 {
            return Err(Error::Dimension(format!(
                "need at least 2 observations, got {}",
                rows.len()
            )));
        }
        validate_labels(&locations)?;

        let n = rows.len();
        let mut values = Vec::with_capacity(n * k);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::Dimension(format!(
                    "row {i} has {} values, expected {k}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
            values.extend(row);
        }
        Ok(Self {
            locations,
            values,
            n,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.locations.len()
    }

    pub fn locations(&self) -> &[LocationId] {
        &self.locations
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.k() + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        let k = self.k();
        &self.values[row * k..(row + 1) * k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.k())
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.rows().map(|r| r[col]).collect()
    }

    /// Index of the column carrying `label`, if any.
    pub fn position(&self, label: &str) -> Option<usize> {
        self.locations.iter().position(|l| l.as_str() == label)
    }

    /// New table made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Self> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.k()) {
            return Err(Error::Dimension(format!(
                "column {bad} out of range for k = {}",
                self.k()
            )));
        }
        let locations = cols.iter().map(|&c| self.locations[c].clone()).collect();
        let rows = self
            .rows()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        Self::from_locations(locations, rows)
    }

    /// New table whose row `i` is row `indices[i]` of `self`.
    pub(crate) fn resample_rows(&self, indices: &[usize]) -> Self {
        let k = self.k();
        let mut values = Vec::with_capacity(indices.len() * k);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self {
            locations: self.locations.clone(),
            values,
            n: indices.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_table() {
        let t =
            BlockMaximaTable::new(vec!["A", "B"], vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!((t.n(), t.k()), (2, 2));
        assert_eq!(t.row(1), &[3.0, 4.0]);
        assert_eq!(t.column(0), vec![1.0, 3.0]);
    }

    #[test]
    fn single_column_rejected() {
        let err =
            BlockMaximaTable::new(vec!["A"], vec![vec![1.0], vec![2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn single_row_rejected() {
        let err = BlockMaximaTable::new(vec!["A", "B"], vec![vec![1.0, 2.0]]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn nan_reported_with_coordinates() {
        let err = BlockMaximaTable::new(vec!["A", "B"], vec![vec![1.0, 2.0], vec![f64::NAN, 4.0]])
            .unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 1, col: 0 });

        let err = BlockMaximaTable::new(
            vec!["A", "B"],
            vec![vec![1.0, f64::NEG_INFINITY], vec![3.0, 4.0]],
        )
        .unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn duplicate_and_empty_labels() {
        let rows = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        assert_eq!(
            BlockMaximaTable::new(vec!["A", "A"], rows.clone()).unwrap_err(),
            Error::DuplicateLabel("A".into())
        );
        assert!(matches!(
            BlockMaximaTable::new(vec!["A", " "], rows).unwrap_err(),
            Error::InvalidLabel(_)
        ));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err =
            BlockMaximaTable::new(vec!["A", "B"], vec![vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn select_columns_reorders() {
        let t = BlockMaximaTable::new(
            vec!["A", "B", "C"],
            vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]],
        )
        .unwrap();
        let s = t.select_columns(&[2, 0]).unwrap();
        assert_eq!(s.locations()[0].as_str(), "C");
        assert_eq!(s.row(1), &[6.0, 4.0]);
        assert!(t.select_columns(&[0, 3]).is_err());
    }
}
