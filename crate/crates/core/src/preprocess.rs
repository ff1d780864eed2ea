//! Marginal preprocessing: the classical Hill tail-index estimator and the
//! transforms that standardize margins to tail index one before direction
//! counting.

use crate::error::{Error, Result};
use crate::sample::SampleMatrix;

/// Classical Hill estimator on the k largest of the supplied values:
/// α̂ = (k⁻¹ Σ_{i≤k} log(X_(i) / X_(k+1)))⁻¹. All values must be strictly
/// positive and there must be at least k+1 of them.
pub fn hill_estimator(values: &[f64], k: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyVector);
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteEntry { row: 1, column: i + 1 });
        }
        if v <= 0.0 {
            return Err(Error::InvalidParameter {
                reason: format!("hill estimator requires strictly positive values, got {v} at position {}", i + 1),
            });
        }
    }
    if k < 1 || k + 1 > values.len() {
        return Err(Error::KOutOfRange { k, max: values.len().saturating_sub(1) });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite values"));
    let reference = sorted[k];
    let mean_log: f64 = sorted[..k].iter().map(|&v| (v / reference).ln()).sum::<f64>() / k as f64;
    if mean_log <= 0.0 {
        return Err(Error::DegenerateTail);
    }
    Ok(1.0 / mean_log)
}

/// Entrywise power transform x ↦ x^alpha; with alpha the common tail index
/// of the margins, the transformed margins have tail index one. Preserves
/// zeros and the matrix shape.
pub fn standardize_margins(x: &SampleMatrix, alpha: f64) -> Result<SampleMatrix> {
    if alpha <= 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter {
            reason: format!("power transform requires alpha > 0, got {alpha}"),
        });
    }
    x.map_entries(|v| v.powf(alpha))
}

/// Per-column rank transform x_ij ↦ 1 / (1 - rank_ij / (n+1)), mapping each
/// margin onto a discretized standard Pareto scale. Ranks are ordinal
/// (ascending value, ties broken by row order), so the output is
/// deterministic and free of tied norms introduced by tied values.
pub fn rank_transform(x: &SampleMatrix) -> SampleMatrix {
    let n = x.n();
    let d = x.d();
    let mut data = vec![0.0; n * d];
    let np1 = (n + 1) as f64;
    for j in 0..d {
        let column = x.column(j);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| column[a].partial_cmp(&column[b]).expect("finite entries"));
        for (position, &row) in order.iter().enumerate() {
            let rank = (position + 1) as f64;
            data[row * d + j] = 1.0 / (1.0 - rank / np1);
        }
    }
    SampleMatrix::new(data, n, d).expect("transform outputs are finite and >= 1")
}
