//! Dependence among block maxima at several locations.
//!
//! The central quantity is a multivariate variogram
//!
//! ```text
//! v(x_1, .., x_k) = 1 - (k+1)/(k-1) · E[ max_j G_j(Z_j) - min_j G_j(Z_j) ]
//! ```
//!
//! which is 0 for independent margins, 1 for totally dependent margins and
//! does not depend on the marginal laws `G_j`. The crate provides
//!
//! - [`estimators`]: rank-based `v̂`, madogram and extremal coefficient
//!   estimates, plus a bootstrap interval;
//! - [`models`]: closed forms from extremal coefficients and the symmetric
//!   logistic model;
//! - [`simulate`]: exact logistic sampling for validation.

pub mod error;
pub mod estimators;
pub mod models;
pub mod report;
pub mod simulate;
pub mod subset;
pub mod table;

pub use error::{Error, Result};
pub use estimators::{
    bootstrap_variogram, empirical_madogram, empirical_variogram, empirical_variogram_via_pairs,
    estimate_variogram, extremal_coefficient_from_madogram, rank_transform, EstimationOptions,
    PseudoObservations, TiePolicy,
};
pub use models::{
    logistic_extremal_coefficients, logistic_pairwise_madogram, logistic_tail_dependence,
    logistic_variogram, madogram_from_tail_dependence, pairwise_variogram_from_madogram,
    variogram_from_extremal_coefficients, LogisticModel, UnitTailArgs,
};
pub use report::{ConfidenceInterval, DependenceReport};
pub use simulate::{margin_check, sample_logistic, sample_rows, SimulationSpec};
pub use subset::{enumerate_subsets, ExtremalCoefficientSet, SubsetIndex, MAX_SUBSET_DIM};
pub use table::{BlockMaximaTable, LocationId};
