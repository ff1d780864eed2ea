//! Order-statistic thresholding and empirical direction counting: how many of
//! the k largest observations project into each face of the simplex.

use std::collections::HashMap;

use serde::Serialize;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::sample::SampleMatrix;
use crate::simplex::scaled_projection_support;

/// Sorted empirical direction counts among the k exceedances.
///
/// Entries are sorted by count descending, ties broken lexicographically on
/// the direction index lists, so the result is fully deterministic. Rows
/// whose norm ties the threshold are excluded (strict inequality), so the
/// counts may sum to less than k; the actual total is `num_exceedances`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionCounts {
    entries: Vec<DirectionCount>,
    k: usize,
    d: usize,
    num_exceedances: u64,
    threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionCount {
    pub direction: Direction,
    pub count: u64,
}

impl DirectionCounts {
    /// Counts with their direction labels, largest first.
    pub fn entries(&self) -> &[DirectionCount] {
        &self.entries
    }

    /// The number of distinct observed directions r̂.
    pub fn r_hat(&self) -> usize {
        self.entries.len()
    }

    /// The i-th largest count (0-based).
    pub fn count(&self, i: usize) -> u64 {
        self.entries[i].count
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|e| e.count)
    }

    pub fn directions(&self) -> impl Iterator<Item = &Direction> {
        self.entries.iter().map(|e| &e.direction)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of strict exceedances; equals the sum of all counts and is at
    /// most k (smaller only when row norms tie the threshold).
    pub fn num_exceedances(&self) -> u64 {
        self.num_exceedances
    }

    /// The L1 norm of the (k+1)-th largest observation.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Counts divided by k (not by the number of exceedances), in stored order.
    pub fn relative_frequencies(&self) -> Vec<f64> {
        let k = self.k as f64;
        self.entries.iter().map(|e| e.count as f64 / k).collect()
    }

    /// Builds counts from an already sorted count vector with synthetic
    /// singleton direction labels {1}, {2}, ... — the hook for feeding
    /// externally generated (e.g. multinomial) counts to the criteria.
    pub fn from_sorted_counts(counts: &[u64], k: usize) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyVector);
        }
        if counts.contains(&0) {
            return Err(Error::InvalidParameter {
                reason: "all counts must be strictly positive".into(),
            });
        }
        if counts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameter {
                reason: "counts must be sorted in decreasing order".into(),
            });
        }
        let total: u64 = counts.iter().sum();
        if total > k as u64 {
            return Err(Error::InvalidParameter {
                reason: format!("counts sum to {total}, which exceeds k = {k}"),
            });
        }
        let entries = counts
            .iter()
            .enumerate()
            .map(|(i, &count)| DirectionCount {
                direction: Direction::singleton(i as u32 + 1),
                count,
            })
            .collect();
        Ok(DirectionCounts {
            entries,
            k,
            d: counts.len(),
            num_exceedances: total,
            threshold: f64::NAN,
        })
    }
}

/// The (k+1)-th largest L1 row norm of the sample, for 1 ≤ k ≤ n-1.
pub fn l1_order_threshold(x: &SampleMatrix, k: usize) -> Result<f64> {
    if k < 1 || k > x.n() - 1 {
        return Err(Error::KOutOfRange { k, max: x.n().saturating_sub(1) });
    }
    let mut norms = x.row_l1_norms();
    norms.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite norms"));
    Ok(norms[k])
}

/// Counts, for every observed direction β, how many of the k largest
/// observations project into C_β: rows with ‖X_j‖₁ strictly above the
/// threshold are rescaled by it and projected onto the simplex; the support
/// of the projection is the observed direction.
pub fn empirical_direction_counts(x: &SampleMatrix, k: usize) -> Result<DirectionCounts> {
    let threshold = l1_order_threshold(x, k)?;
    if threshold <= 0.0 {
        return Err(Error::DegenerateThreshold {
            reason: format!("order-statistic threshold is {threshold}; cannot rescale exceedances"),
        });
    }

    let mut map: HashMap<Direction, u64> = HashMap::new();
    let mut num_exceedances = 0u64;
    for row in x.rows() {
        let norm: f64 = row.iter().sum();
        if norm > threshold {
            // support of π(row / threshold), without forming the quotient
            let dir = scaled_projection_support(row, threshold);
            *map.entry(dir).or_insert(0) += 1;
            num_exceedances += 1;
        }
    }
    if map.is_empty() {
        return Err(Error::DegenerateThreshold {
            reason: format!("no row norm strictly exceeds the threshold {threshold}"),
        });
    }

    let mut entries: Vec<DirectionCount> = map
        .into_iter()
        .map(|(direction, count)| DirectionCount { direction, count })
        .collect();
    entries.sort_unstable_by(|a, b| b.count.cmp(&a.count).then_with(|| a.direction.cmp(&b.direction)));

    Ok(DirectionCounts {
        entries,
        k,
        d: x.d(),
        num_exceedances,
        threshold,
    })
}
