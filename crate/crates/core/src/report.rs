//! Per-subset estimation results.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::SubsetIndex;
use crate::table::LocationId;

/// Percentile bootstrap interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub replicates: usize,
}

impl ConfidenceInterval {
    pub fn new(lower: f64, upper: f64, level: f64, replicates: usize) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > upper {
            return Err(Error::Invariant(format!(
                "interval [{lower}, {upper}] is inverted"
            )));
        }
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::Range(format!(
                "level must lie in (0, 1), got {level}"
            )));
        }
        if replicates == 0 {
            return Err(Error::Range("replicates must be positive".into()));
        }
        Ok(Self {
            lower,
            upper,
            level,
            replicates,
        })
    }
}

/// Estimates for one subset of locations. Madogram and extremal
/// coefficient are only filled in for pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DependenceReport {
    /// 1-based column numbers.
    #[serde(serialize_with = "one_based")]
    pub subset: SubsetIndex,
    pub labels: Vec<LocationId>,
    pub v_hat: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub madogram: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremal_coefficient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci: Option<ConfidenceInterval>,
}

fn one_based<S: serde::Serializer>(
    subset: &SubsetIndex,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(subset.one_based())
}

/// Smallest value `v̂` can take on `n` rows over a subset of `size` columns.
pub fn variogram_lower_bound(size: usize, n: usize) -> f64 {
    let m = size as f64;
    1.0 - (m + 1.0) / (m - 1.0) * (n as f64 - 1.0) / n as f64
}
