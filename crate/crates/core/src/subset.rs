//! Subsets of locations and the extremal coefficients indexed by them.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest dimension for which all `2^k - 1` subsets may be enumerated.
pub const MAX_SUBSET_DIM: usize = 20;

/// Slack allowed on the bound and monotonicity checks of
/// [`ExtremalCoefficientSet`]; singletons must still equal 1 exactly.
const EPS_CHECK_TOL: f64 = 1e-12;

/// Nonempty set of column indices (0-based, stored sorted and unique).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetIndex {
    members: Vec<usize>,
}

impl SubsetIndex {
    /// Builds a subset of `{0, .., k-1}`; order and duplicates in `members`
    /// are not significant.
    pub fn new(mut members: Vec<usize>, k: usize) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::Dimension("subset must be nonempty".into()));
        }
        if let Some(&bad) = members.iter().find(|&&m| m >= k) {
            return Err(Error::Dimension(format!(
                "index {bad} out of range for k = {k}"
            )));
        }
        Ok(Self { members })
    }

    /// The full set `{0, .., k-1}`.
    pub fn full(k: usize) -> Result<Self> {
        Self::new((0..k).collect(), k)
    }

    pub fn pair(a: usize, b: usize, k: usize) -> Result<Self> {
        if a == b {
            return Err(Error::Dimension("a pair needs two distinct indices".into()));
        }
        Self::new(vec![a, b], k)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Members as 1-based column numbers.
    pub fn one_based(&self) -> Vec<usize> {
        self.members.iter().map(|m| m + 1).collect()
    }

    /// Bitmask with bit `j` set for every member `j`.
    pub fn mask(&self) -> usize {
        self.members.iter().fold(0, |acc, &m| acc | (1 << m))
    }

    fn from_mask(mask: usize) -> Self {
        let members = (0..usize::BITS as usize)
            .filter(|&j| mask >> j & 1 == 1)
            .collect();
        Self { members }
    }
}

impl fmt::Display for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.one_based().iter().join(","))
    }
}

fn check_dim(k: usize) -> Result<()> {
    if !(2..=MAX_SUBSET_DIM).contains(&k) {
        return Err(Error::Dimension(format!(
            "subset enumeration needs 2 <= k <= {MAX_SUBSET_DIM}, got k = {k}"
        )));
    }
    Ok(())
}

/// All subsets of `{0, .., k-1}` with at least `min_size` members, ordered
/// by size and then lexicographically.
pub fn enumerate_subsets(k: usize, min_size: usize) -> Result<Vec<SubsetIndex>> {
    check_dim(k)?;
    if !(1..=k).contains(&min_size) {
        return Err(Error::Dimension(format!(
            "min_size must lie in 1..={k}, got {min_size}"
        )));
    }
    Ok((min_size..=k)
        .flat_map(|size| (0..k).combinations(size))
        .map(|members| SubsetIndex { members })
        .collect())
}

/// Extremal coefficients `ε_I` for every nonempty subset `I` of `k` locations.
///
/// Construction enforces `ε_{j} = 1`, `1 <= ε_I <= |I|` and monotonicity
/// under inclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalCoefficientSet {
    k: usize,
    // Indexed by subset bitmask; slot 0 (empty set) is unused.
    eps: Vec<f64>,
}

impl ExtremalCoefficientSet {
    pub fn from_fn(k: usize, mut f: impl FnMut(&SubsetIndex) -> f64) -> Result<Self> {
        check_dim(k)?;
        let mut eps = vec![f64::NAN; 1 << k];
        for (mask, slot) in eps.iter_mut().enumerate().skip(1) {
            *slot = f(&SubsetIndex::from_mask(mask));
        }
        let set = Self { k, eps };
        set.validate()?;
        Ok(set)
    }

    /// Builds the set from values listed in [`enumerate_subsets`]`(k, 1)` order.
    pub fn from_values(k: usize, values: &[f64]) -> Result<Self> {
        check_dim(k)?;
        let subsets = enumerate_subsets(k, 1)?;
        if values.len() != subsets.len() {
            return Err(Error::Dimension(format!(
                "expected {} coefficients for k = {k}, got {}",
                subsets.len(),
                values.len()
            )));
        }
        let mut eps = vec![f64::NAN; 1 << k];
        for (s, &v) in subsets.iter().zip(values) {
            eps[s.mask()] = v;
        }
        let set = Self { k, eps };
        set.validate()?;
        Ok(set)
    }

    /// Independent margins: `ε_I = |I|`.
    pub fn independence(k: usize) -> Result<Self> {
        Self::from_fn(k, |s| s.len() as f64)
    }

    /// Totally dependent margins: `ε_I = 1`.
    pub fn total_dependence(k: usize) -> Result<Self> {
        Self::from_fn(k, |_| 1.0)
    }

    fn validate(&self) -> Result<()> {
        for mask in 1..self.eps.len() {
            let e = self.eps[mask];
            let size = mask.count_ones() as f64;
            if !e.is_finite() {
                return Err(Error::Invariant(format!(
                    "ε{} is not finite",
                    SubsetIndex::from_mask(mask)
                )));
            }
            if size == 1.0 && e != 1.0 {
                return Err(Error::Invariant(format!(
                    "singleton ε{} = {e}, expected 1",
                    SubsetIndex::from_mask(mask)
                )));
            }
            if e < 1.0 - EPS_CHECK_TOL || e > size + EPS_CHECK_TOL {
                return Err(Error::Invariant(format!(
                    "ε{} = {e} outside [1, {size}]",
                    SubsetIndex::from_mask(mask)
                )));
            }
            // Checking each immediate subset is enough for monotonicity.
            let mut rest = mask;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest ^= bit;
                let sub = mask ^ bit;
                if sub != 0 && self.eps[sub] > e + EPS_CHECK_TOL {
                    return Err(Error::Invariant(format!(
                        "ε{} = {} exceeds ε{} = {e}",
                        SubsetIndex::from_mask(sub),
                        self.eps[sub],
                        SubsetIndex::from_mask(mask)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, subset: &SubsetIndex) -> f64 {
        self.eps[subset.mask()]
    }

    /// `ε` of the full set `{0, .., k-1}`.
    pub fn full(&self) -> f64 {
        self.eps[(1 << self.k) - 1]
    }

    /// `(subset, ε)` pairs in size-then-lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetIndex, f64)> + '_ {
        enumerate_subsets(self.k, 1)
            .expect("dimension checked at construction")
            .into_iter()
            .map(|s| {
                let e = self.eps[s.mask()];
                (s, e)
            })
    }
}
