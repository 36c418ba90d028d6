//! Closed-form dependence theory.
//!
//! The variogram of `k` max-stable margins is fully determined by the
//! extremal coefficients of all subsets. Writing `p(ε) = ε / (1 + ε)` for the
//! mean of the maximum of uniform margins with extremal coefficient `ε`,
//!
//! ```text
//! v = 1 - (k+1)/(k-1) · [ p(ε_full) - Σ_{∅≠I⊆{1..k}} (-1)^{|I|+1} p(ε_I) ]
//! ```
//!
//! where the signed sum is the mean of the minimum by inclusion–exclusion.
//! The symmetric logistic family, with `ε_I = |I|^α`, is the built-in
//! parametric model.

use crate::error::{Error, Result};
use crate::subset::{enumerate_subsets, ExtremalCoefficientSet, MAX_SUBSET_DIM};

/// Symmetric logistic dependence: `l(t) = (Σ_j t_j^{1/α})^α`.
///
/// `alpha = 1` gives independent margins, `alpha -> 0` total dependence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticModel {
    alpha: f64,
    k: usize,
}

impl LogisticModel {
    pub fn new(alpha: f64, k: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Range(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if k < 2 {
            return Err(Error::Dimension(format!("need k >= 2, got {k}")));
        }
        Ok(Self { alpha, k })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Strictly positive argument of a tail dependence function.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitTailArgs(Vec<f64>);

impl UnitTailArgs {
    pub fn new(t: Vec<f64>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::Dimension("tail argument must be nonempty".into()));
        }
        if let Some(bad) = t.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(Error::Range(format!(
                "tail arguments must be positive and finite, got {bad}"
            )));
        }
        Ok(Self(t))
    }

    pub fn ones(k: usize) -> Self {
        Self(vec![1.0; k])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `l(t) = (Σ t_j^{1/α})^α`, scaled by `max t` so small `α` cannot overflow.
pub fn logistic_tail_dependence(model: &LogisticModel, t: &UnitTailArgs) -> Result<f64> {
    let t = t.as_slice();
    if t.len() != model.k {
        return Err(Error::Dimension(format!(
            "tail argument has length {}, model has k = {}",
            t.len(),
            model.k
        )));
    }
    let top = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let inv = 1.0 / model.alpha;
    let s: f64 = t.iter().map(|&x| (x / top).powf(inv)).sum();
    Ok(top * s.powf(model.alpha))
}

/// `ε_I = |I|^α` for every nonempty subset.
pub fn logistic_extremal_coefficients(model: &LogisticModel) -> Result<ExtremalCoefficientSet> {
    if model.k > MAX_SUBSET_DIM {
        return Err(Error::Dimension(format!(
            "k = {} exceeds the subset cap {MAX_SUBSET_DIM}",
            model.k
        )));
    }
    ExtremalCoefficientSet::from_fn(model.k, |s| (s.len() as f64).powf(model.alpha))
}

/// Double-double accumulator: the alternating sum cancels heavily for large
/// `k`, so each term and the running total carry a low-order word.
#[derive(Default)]
struct DdSum {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl DdSum {
    fn add(&mut self, hi: f64, lo: f64) {
        let (s, e) = two_sum(self.hi, hi);
        let e = e + self.lo + lo;
        let (s, e) = two_sum(s, e);
        self.hi = s;
        self.lo = e;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

/// `ε / (1 + ε)`, the mean of the maximum of uniform margins with extremal
/// coefficient `ε`, as an unevaluated sum `hi + lo`.
fn mean_max_uniform(eps: f64) -> (f64, f64) {
    let (s, s_err) = two_sum(1.0, eps);
    let hi = eps / s;
    let residual = (-hi).mul_add(s, eps);
    (hi, (residual - hi * s_err) / s)
}

/// Variogram implied by a complete set of extremal coefficients.
///
/// Terms are summed over all `2^k - 1` subsets in enumeration order.
pub fn variogram_from_extremal_coefficients(eps: &ExtremalCoefficientSet) -> Result<f64> {
    let k = eps.k();
    // mean range = E[max] - E[min], E[min] by inclusion–exclusion.
    let mut mean_range = DdSum::default();
    let (hi, lo) = mean_max_uniform(eps.full());
    mean_range.add(hi, lo);
    for subset in enumerate_subsets(k, 1)? {
        let (hi, lo) = mean_max_uniform(eps.get(&subset));
        if subset.len() % 2 == 1 {
            mean_range.add(-hi, -lo);
        } else {
            mean_range.add(hi, lo);
        }
    }
    let mean_range = mean_range.value();
    let kf = k as f64;
    Ok(1.0 - (kf + 1.0) / (kf - 1.0) * mean_range)
}

/// Madogram of a pair with tail dependence `l(1,1)`: `ν = l/(1+l) - 1/2`.
pub fn madogram_from_tail_dependence(l_value: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&l_value) {
        return Err(Error::Range(format!(
            "l(1,1) must lie in [1, 2], got {l_value}"
        )));
    }
    Ok(l_value / (1.0 + l_value) - 0.5)
}

/// Pairwise variogram `1 - 6ν`.
pub fn pairwise_variogram_from_madogram(nu: f64) -> Result<f64> {
    if !(0.0..=1.0 / 6.0).contains(&nu) {
        return Err(Error::Range(format!(
            "madogram must lie in [0, 1/6], got {nu}"
        )));
    }
    Ok(1.0 - 6.0 * nu)
}

/// Closed-form variogram of the symmetric logistic model.
pub fn logistic_variogram(model: &LogisticModel) -> Result<f64> {
    variogram_from_extremal_coefficients(&logistic_extremal_coefficients(model)?)
}

/// Pairwise madogram of the symmetric logistic model, `ν` at `l = 2^α`.
pub fn logistic_pairwise_madogram(model: &LogisticModel) -> Result<f64> {
    madogram_from_tail_dependence(2f64.powf(model.alpha))
}
