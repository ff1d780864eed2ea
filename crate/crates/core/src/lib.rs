//! Detection of the directions in which a nonnegative multivariate sample is
//! jointly extreme.
//!
//! The pipeline: project the rescaled largest observations onto the L1 unit
//! simplex ([`project_simplex`]), count which faces of the simplex they land
//! on ([`empirical_direction_counts`]), and prune the spurious directions by
//! minimizing one of five information criteria ([`Criterion`]) — either at a
//! fixed exceedance count k ([`select_local`]) or jointly over a grid of k
//! values ([`select_joint`]). Simulation generators with known direction
//! sets ([`simulation`]) and error measures ([`metrics`]) support validation
//! of the selectors.
//!
//! With the default `parallel` feature, grid scans and benchmark replicates
//! run on a rayon pool; outputs are byte-identical regardless of thread
//! count. Disabling the feature falls back to sequential execution with the
//! same results.

pub mod counts;
pub mod criteria;
pub mod direction;
pub mod error;
mod exec;
pub mod io;
pub mod metrics;
pub mod numerics;
pub mod preprocess;
pub mod sample;
pub mod simplex;
pub mod simulation;
pub mod threshold;

pub use counts::{empirical_direction_counts, l1_order_threshold, DirectionCounts};
pub use criteria::{
    aic_local, bicl_local, bicu_local, criterion_table, fit_mle, gaussian_mle, log_likelihood,
    local_value, mseic_local, qaic_local, renormalized_probability, select_s, Criterion,
    CriterionTable, MultinomialFit,
};
pub use direction::Direction;
pub use error::{Error, Result};
pub use metrics::{confusion, hellinger, hellinger_by_direction, ConfusionStats};
pub use preprocess::{hill_estimator, rank_transform, standardize_margins};
pub use sample::SampleMatrix;
pub use simplex::{direction_of, project_simplex, SimplexVector};
pub use simulation::{
    run_benchmark, sample_asymptotic_dependent, sample_asymptotic_independent, BenchMode,
    BenchmarkConfig, BenchmarkRow, GroundTruth, ModelSpec,
};
pub use threshold::{
    default_grid, ic_global, scan, select_joint, select_local, GridSpec, ScanEntry, ScanRow,
    SelectionResult, ThresholdScan,
};
