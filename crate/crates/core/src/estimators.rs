//! Rank-based estimation of the variogram, the madogram and pairwise
//! extremal coefficients.
//!
//! Every estimator works on [`PseudoObservations`]: the raw block maxima
//! pushed through their column-wise empirical distribution functions.
//! For a subset `I` of `m >= 2` columns,
//!
//! ```text
//! v̂_I = 1 - (m+1)/(m-1) · (1/n) Σ_i ( max_{j∈I} U_ij - min_{j∈I} U_ij )
//! ν̂   = (1/2n) Σ_i |U_ia - U_ib|
//! ```
//!
//! `v̂` is not clamped to `[0, 1]`; only the population coefficient is
//! bounded there.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::subset::SubsetIndex;
use crate::table::{BlockMaximaTable, LocationId};

/// Minimum number of bootstrap resamples accepted by [`bootstrap_variogram`].
pub const MIN_BOOTSTRAP_REPLICATES: usize = 100;

/// How tied raw values are ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Tied values share the mean of their rank block.
    #[default]
    Midrank,
    /// Plain empirical CDF: a value maps to the fraction of the column `<=` it.
    FirstOccurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EstimationOptions {
    pub tie_policy: TiePolicy,
}

/// Column-wise empirical-CDF transform of a [`BlockMaximaTable`], with
/// entries in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoObservations {
    locations: Vec<LocationId>,
    u: Vec<f64>,
    n: usize,
}

impl PseudoObservations {
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
        self.u[row * self.k() + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.u.chunks_exact(self.k())
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.rows().map(|r| r[col]).collect()
    }

    fn check_subset(&self, subset: &SubsetIndex, min_len: usize) -> Result<()> {
        if subset.len() < min_len {
            return Err(Error::Dimension(format!(
                "subset {subset} has {} members, need at least {min_len}",
                subset.len()
            )));
        }
        if let Some(&bad) = subset.members().iter().find(|&&m| m >= self.k()) {
            return Err(Error::Dimension(format!(
                "column {bad} out of range for k = {}",
                self.k()
            )));
        }
        Ok(())
    }
}

/// Ranks each column of `table` and divides by `n`.
pub fn rank_transform(table: &BlockMaximaTable, opts: EstimationOptions) -> PseudoObservations {
    let (n, k) = (table.n(), table.k());
    let nf = n as f64;
    let mut u = vec![0.0; n * k];
    let mut order: Vec<usize> = (0..n).collect();

    for col in 0..k {
        let x = table.column(col);
        order.sort_unstable_by(|&a, &b| x[a].total_cmp(&x[b]));

        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && x[order[end]] == x[order[start]] {
                end += 1;
            }
            // Positions start..end (0-based) hold one tie block, i.e. ranks start+1..=end.
            let rank = match opts.tie_policy {
                TiePolicy::Midrank => (start + 1 + end) as f64 / 2.0,
                TiePolicy::FirstOccurrence => end as f64,
            };
            for &row in &order[start..end] {
                u[row * k + col] = rank / nf;
            }
            start = end;
        }
    }

    PseudoObservations {
        locations: table.locations().to_vec(),
        u,
        n,
    }
}

fn range_factor(m: usize) -> f64 {
    (m as f64 + 1.0) / (m as f64 - 1.0)
}

/// Plug-in variogram over the columns in `subset` (row-wise range form).
pub fn empirical_variogram(pseudo: &PseudoObservations, subset: &SubsetIndex) -> Result<f64> {
    pseudo.check_subset(subset, 2)?;
    let cols = subset.members();
    let total: f64 = pseudo
        .rows()
        .map(|row| {
            let (lo, hi) = cols
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
                    (lo.min(row[c]), hi.max(row[c]))
                });
            hi - lo
        })
        .sum();
    Ok(1.0 - range_factor(cols.len()) * total / pseudo.n() as f64)
}

/// Same estimate as [`empirical_variogram`], computed through the largest
/// pairwise absolute difference in each row.
pub fn empirical_variogram_via_pairs(
    pseudo: &PseudoObservations,
    subset: &SubsetIndex,
) -> Result<f64> {
    pseudo.check_subset(subset, 2)?;
    let cols = subset.members();
    let mut total = 0.0;
    for row in pseudo.rows() {
        let mut widest = 0.0_f64;
        for (a, &ca) in cols.iter().enumerate() {
            for &cb in &cols[a + 1..] {
                widest = widest.max((row[ca] - row[cb]).abs());
            }
        }
        total += widest;
    }
    Ok(1.0 - range_factor(cols.len()) * total / pseudo.n() as f64)
}

/// Plug-in madogram of a pair of columns; lies in `[0, (n-1)/(2n)]`.
pub fn empirical_madogram(pseudo: &PseudoObservations, pair: &SubsetIndex) -> Result<f64> {
    if pair.len() != 2 {
        return Err(Error::Dimension(format!(
            "madogram needs exactly 2 locations, got {}",
            pair.len()
        )));
    }
    pseudo.check_subset(pair, 2)?;
    let (a, b) = (pair.members()[0], pair.members()[1]);
    let total: f64 = pseudo.rows().map(|r| (r[a] - r[b]).abs()).sum();
    Ok(total / (2.0 * pseudo.n() as f64))
}

/// Pairwise extremal coefficient implied by a madogram value:
/// `ε = (1/2 + ν) / (1/2 - ν)`.
pub fn extremal_coefficient_from_madogram(nu: f64) -> Result<f64> {
    if !(0.0..0.5).contains(&nu) {
        return Err(Error::Range(format!(
            "madogram must lie in [0, 1/2), got {nu}"
        )));
    }
    Ok((0.5 + nu) / (0.5 - nu))
}

/// Estimates `v̂` on the given subset straight from raw maxima.
pub fn estimate_variogram(
    table: &BlockMaximaTable,
    subset: &SubsetIndex,
    opts: EstimationOptions,
) -> Result<f64> {
    empirical_variogram(&rank_transform(table, opts), subset)
}

/// Percentile bootstrap interval for `v̂` on `subset`.
///
/// Each replicate resamples `n` rows jointly with replacement and re-ranks
/// before estimating. Replicate `r` draws from ChaCha8 seeded with
/// `seed_from_u64(seed)` on stream `r`, so the interval does not depend on
/// how replicates are scheduled across threads.
pub fn bootstrap_variogram(
    table: &BlockMaximaTable,
    subset: &SubsetIndex,
    replicates: usize,
    level: f64,
    seed: u64,
    opts: EstimationOptions,
) -> Result<(f64, f64)> {
    if replicates < MIN_BOOTSTRAP_REPLICATES {
        return Err(Error::Range(format!(
            "need at least {MIN_BOOTSTRAP_REPLICATES} bootstrap replicates, got {replicates}"
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Range(format!(
            "level must lie in (0, 1), got {level}"
        )));
    }
    if subset.len() < 2 {
        return Err(Error::Dimension(format!(
            "subset {subset} has {} members, need at least 2",
            subset.len()
        )));
    }

    // Only the subset's columns matter; relabel the subset onto them.
    let sub_table = table.select_columns(subset.members())?;
    let local = SubsetIndex::full(subset.len())?;
    let n = sub_table.n();
    let base = ChaCha8Rng::seed_from_u64(seed);

    let mut stats = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = base.clone();
            rng.set_stream(r as u64);
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            estimate_variogram(&sub_table.resample_rows(&idx), &local, opts)
        })
        .collect::<Result<Vec<f64>>>()?;

    stats.sort_unstable_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok((
        quantile_sorted(&stats, tail),
        quantile_sorted(&stats, 1.0 - tail),
    ))
}

/// Linear-interpolation quantile (type 7) of sorted data.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
