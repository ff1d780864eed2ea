//! Euclidean projection onto the L1 unit simplex and extraction of the
//! induced direction (the support of the projected vector).
//!
//! The projection uses the full-sort threshold algorithm: sort the entries in
//! decreasing order, find the largest prefix whose running mean stays below
//! its last element after removing one unit of mass, and subtract the
//! resulting threshold. Entries at or below the threshold become exact zeros,
//! so the support is unambiguous.

use crate::direction::Direction;
use crate::error::{Error, Result};

/// A nonnegative vector whose entries sum to one (within 1e-9).
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexVector(Vec<f64>);

impl SimplexVector {
    /// Validates the simplex invariants.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteEntry { row: 1, column: i + 1 });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry { row: 1, column: i + 1, value: v });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidProbabilityVector {
                reason: format!("entries sum to {sum}, expected 1"),
            });
        }
        Ok(SimplexVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

fn validate_input(v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    for (i, &x) in v.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::NonFiniteEntry { row: 1, column: i + 1 });
        }
        if x < 0.0 {
            return Err(Error::NegativeEntry { row: 1, column: i + 1, value: x });
        }
    }
    Ok(())
}

/// The surviving prefix of the decreasingly sorted entries of `v/scale`:
/// the largest j such that u_(j) > (Σ_{i≤j} u_(i) - 1)/j with u = v/scale,
/// together with Σ over that prefix of the raw (unscaled) entries.
///
/// Every comparison is kept in the rearranged form
/// `v_(j)·j - Σ_{i≤j} v_(i) + scale > 0` (the scaled inequality multiplied
/// through by scale), so the unit offset is never absorbed by cancellation
/// when entries dwarf the offset, and the quotient v/scale is never formed
/// (no overflow for small scales).
fn surviving_prefix(v: &[f64], scale: f64) -> (usize, f64) {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite entries"));
    let mut cumulative = 0.0;
    let mut rho = 0usize;
    let mut rho_cumulative = f64::NAN;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let count = (j + 1) as f64;
        if u * count - cumulative + scale > 0.0 {
            rho = j + 1;
            rho_cumulative = cumulative;
        }
    }
    debug_assert!(rho >= 1, "the largest coordinate always survives");
    (rho, rho_cumulative)
}

/// Euclidean projection of a nonnegative vector onto the L1 unit simplex,
/// the unique minimizer of ‖w - v‖₂² over {w ≥ 0, ‖w‖₁ = 1}. Entries at or
/// below the threshold become exact zeros.
pub fn project_simplex(v: &[f64]) -> Result<SimplexVector> {
    validate_input(v)?;
    let (rho, rho_cumulative) = surviving_prefix(v, 1.0);
    let count = rho as f64;
    // w_i = v_i - θ with θ = (Σ_top - 1)/ρ, evaluated as
    // (v_i·ρ - Σ_top + 1)/ρ to stay exact when the entries are huge
    let projected: Vec<f64> = v
        .iter()
        .map(|&x| {
            let lifted = x * count - rho_cumulative + 1.0;
            if lifted > 0.0 {
                lifted / count
            } else {
                0.0
            }
        })
        .collect();
    SimplexVector::new(projected)
}

/// The support {i : project_simplex(v)_i > 0} as a direction. Nonempty: the
/// maximal coordinate always survives the projection.
pub fn direction_of(v: &[f64]) -> Result<Direction> {
    validate_input(v)?;
    Ok(scaled_projection_support(v, 1.0))
}

/// The support of π(v / scale) for scale > 0, computed without forming the
/// quotient. Used by the exceedance counting, where `scale` is the
/// order-statistic threshold and v is a raw data row; entries must already
/// be validated finite and nonnegative.
pub(crate) fn scaled_projection_support(v: &[f64], scale: f64) -> Direction {
    let (rho, rho_cumulative) = surviving_prefix(v, scale);
    let count = rho as f64;
    let support: Vec<bool> = v
        .iter()
        .map(|&x| x * count - rho_cumulative + scale > 0.0)
        .collect();
    Direction::from_support(&support).expect("projection support is nonempty")
}
