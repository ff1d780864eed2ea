//! Error measures between an estimated direction set / probability vector
//! and the ground truth: the Hellinger distance in its ‖p−q‖₂/√2 form
//! (defined directly on the probabilities, not their square roots), and the
//! Accuracy/F1 errors built from the confusion counts over all 2^d - 1
//! candidate directions.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::direction::Direction;
use crate::error::{Error, Result};

fn validate_probability(label: &str, p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::EmptyVector);
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbabilityVector {
            reason: format!("{label} sums to {sum}, expected 1"),
        });
    }
    Ok(())
}

/// Hellinger distance H(p, q) = ‖p − q‖₂ / √2 between two probability
/// vectors over the same component enumeration.
pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            reason: format!("probability vectors of length {} vs {}", p.len(), q.len()),
        });
    }
    validate_probability("first argument", p)?;
    validate_probability("second argument", q)?;
    let sq: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sq.sqrt() / std::f64::consts::SQRT_2)
}

/// Hellinger distance between two direction-labeled probability vectors,
/// aligned over the union of the two direction sets (missing entries are 0).
pub fn hellinger_by_direction(
    p: &[(Direction, f64)],
    q: &[(Direction, f64)],
) -> Result<f64> {
    let mut union: BTreeMap<&Direction, (f64, f64)> = BTreeMap::new();
    for (d, w) in p {
        union.entry(d).or_insert((0.0, 0.0)).0 += w;
    }
    for (d, w) in q {
        union.entry(d).or_insert((0.0, 0.0)).1 += w;
    }
    let (ps, qs): (Vec<f64>, Vec<f64>) = union.values().copied().unzip();
    hellinger(&ps, &qs)
}

/// Confusion counts over the 2^d - 1 nonempty directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfusionStats {
    pub true_positive: u64,
    pub false_positive: u64,
    pub false_negative: u64,
    pub true_negative: u64,
    pub d: usize,
}

/// Compares an estimated direction set against the true one. Requires
/// d ≤ 30 because the true-negative count enumerates all 2^d - 1 candidates.
pub fn confusion(true_dirs: &[Direction], est_dirs: &[Direction], d: usize) -> Result<ConfusionStats> {
    if d > 30 {
        return Err(Error::DimensionTooLarge { d });
    }
    for dir in true_dirs.iter().chain(est_dirs) {
        if !dir.fits_dimension(d) {
            return Err(Error::InvalidDirection {
                reason: format!("direction {dir} does not fit dimension {d}"),
            });
        }
    }
    let truth: HashSet<&Direction> = true_dirs.iter().collect();
    let estimate: HashSet<&Direction> = est_dirs.iter().collect();
    let true_positive = truth.intersection(&estimate).count() as u64;
    let false_positive = estimate.difference(&truth).count() as u64;
    let false_negative = truth.difference(&estimate).count() as u64;
    let universe = (1u64 << d) - 1;
    let true_negative = universe - true_positive - false_positive - false_negative;
    Ok(ConfusionStats { true_positive, false_positive, false_negative, true_negative, d })
}

impl ConfusionStats {
    /// (FP + FN) / (2^d - 1).
    pub fn accuracy_error(&self) -> f64 {
        let universe = ((1u64 << self.d) - 1) as f64;
        (self.false_positive + self.false_negative) as f64 / universe
    }

    /// 1 − 2TP / (2TP + FP + FN); 1 when nothing was recovered.
    pub fn f1_error(&self) -> f64 {
        f1_error_from_counts(self.true_positive, self.false_positive, self.false_negative)
    }
}

/// F1 error from raw counts; usable beyond the d ≤ 30 confusion cap since it
/// never needs the true-negative count.
pub fn f1_error_from_counts(true_positive: u64, false_positive: u64, false_negative: u64) -> f64 {
    let denom = 2 * true_positive + false_positive + false_negative;
    if denom == 0 {
        return 0.0;
    }
    1.0 - 2.0 * true_positive as f64 / denom as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dir(ix: &[u32]) -> Direction {
        Direction::from_indices(ix).unwrap()
    }

    #[test]
    fn hellinger_examples() {
        assert_eq!(hellinger(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        assert!((hellinger(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((hellinger(&[0.5, 0.5], &[1.0, 0.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hellinger_validation() {
        assert!(hellinger(&[1.0], &[0.5, 0.5]).is_err());
        assert!(hellinger(&[0.7, 0.7], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn hellinger_alignment_over_union() {
        let p = [(dir(&[1]), 0.6), (dir(&[2]), 0.4)];
        let q = [(dir(&[1]), 0.6), (dir(&[1, 2]), 0.4)];
        // aligned vectors: p = (0.6, 0.4, 0), q = (0.6, 0, 0.4)
        let want = (0.4f64 * 0.4 * 2.0).sqrt() / std::f64::consts::SQRT_2;
        assert!((hellinger_by_direction(&p, &q).unwrap() - want).abs() < 1e-12);
        // same labels, different storage order
        let q2 = [(dir(&[2]), 0.4), (dir(&[1]), 0.6)];
        assert_eq!(hellinger_by_direction(&p, &q2).unwrap(), 0.0);
    }

    #[test]
    fn confusion_example_d3() {
        let truth = [dir(&[1]), dir(&[2])];
        let est = [dir(&[1]), dir(&[2]), dir(&[1, 2])];
        let c = confusion(&truth, &est, 3).unwrap();
        assert_eq!(
            (c.true_positive, c.false_positive, c.false_negative, c.true_negative),
            (2, 1, 0, 4)
        );
        assert!((c.accuracy_error() - 1.0 / 7.0).abs() < 1e-15);
        assert!((c.f1_error() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn confusion_edge_cases() {
        let c = confusion(&[dir(&[1])], &[dir(&[1])], 4).unwrap();
        assert_eq!(c.accuracy_error(), 0.0);
        assert_eq!(c.f1_error(), 0.0);

        let c = confusion(&[dir(&[2])], &[dir(&[1])], 1);
        assert!(c.is_err(), "direction {{2}} does not fit d = 1");

        let c = confusion(&[dir(&[1])], &[dir(&[2])], 2).unwrap();
        assert!((c.accuracy_error() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.f1_error(), 1.0);

        assert!(confusion(&[dir(&[1])], &[dir(&[1])], 31).is_err());
    }

    proptest! {
        #[test]
        fn both_f1_forms_agree(
            truth in proptest::collection::btree_set(1u32..=15, 1..=6),
            est in proptest::collection::btree_set(1u32..=15, 1..=6),
        ) {
            let truth: Vec<Direction> = truth.into_iter().map(|i| dir(&[i])).collect();
            let est: Vec<Direction> = est.into_iter().map(|i| dir(&[i])).collect();
            let c = confusion(&truth, &est, 15).unwrap();
            // 1 - 2TP/(2TP+FP+FN) must equal 1 - 2TP/(s* + ŝ)
            let s_star = truth.len() as f64;
            let s_hat = est.len() as f64;
            let alt = 1.0 - 2.0 * c.true_positive as f64 / (s_star + s_hat);
            prop_assert!((c.f1_error() - alt).abs() < 1e-12);
            // universe splits exactly
            let total = c.true_positive + c.false_positive + c.false_negative + c.true_negative;
            prop_assert_eq!(total, (1u64 << 15) - 1);
            // zero iff the sets match
            let matches = c.false_positive == 0 && c.false_negative == 0;
            prop_assert_eq!(c.accuracy_error() == 0.0, matches);
            prop_assert_eq!(c.f1_error() == 0.0, matches);
        }

        #[test]
        fn hellinger_symmetric_and_bounded(raw_p in proptest::collection::vec(1e-6f64..1.0, 4), raw_q in proptest::collection::vec(1e-6f64..1.0, 4)) {
            let norm = |v: &[f64]| { let s: f64 = v.iter().sum(); v.iter().map(|x| x / s).collect::<Vec<_>>() };
            let p = norm(&raw_p);
            let q = norm(&raw_q);
            let pq = hellinger(&p, &q).unwrap();
            let qp = hellinger(&q, &p).unwrap();
            prop_assert!((pq - qp).abs() < 1e-15);
            prop_assert!((0.0..=1.0).contains(&pq));
        }
    }
}
