//! Threshold-selection (global) criteria over a grid of exceedance counts k,
//! and the packaged local / joint selection results.
//!
//! Each global criterion rescales its local value and adds a penalty in k:
//! AIC/k + k/n, QAIC/(2k) + k/n, MSEIC + n/k, and BIC/k + log(n²)/k for both
//! BIC variants. The joint estimate (k̂, ŝ) is the argmin over the grid of
//! the per-k minimum, ties resolved toward the smaller k and then smaller s.

use serde::Serialize;

use crate::counts::{empirical_direction_counts, DirectionCounts};
use crate::criteria::{local_value, renormalized_probability, select_s, Criterion};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::exec;
use crate::sample::SampleMatrix;

/// Grid of candidate k values.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// 24 geometrically spaced integers from max(⌈0.005 n⌉, d) to ⌊0.2 n⌋.
    Default,
    /// Explicit k values (deduplicated, must be strictly increasing).
    Explicit(Vec<usize>),
    /// Arithmetic progression lo, lo+step, ... capped at hi.
    Range { lo: usize, hi: usize, step: usize },
}

impl GridSpec {
    /// Resolves to a concrete strictly increasing grid within [1, n-1].
    pub fn resolve(&self, n: usize, d: usize) -> Result<Vec<usize>> {
        let grid = match self {
            GridSpec::Default => default_grid(n, d),
            GridSpec::Explicit(ks) => {
                let mut ks = ks.clone();
                ks.sort_unstable();
                ks.dedup();
                ks
            }
            GridSpec::Range { lo, hi, step } => {
                if *step == 0 {
                    return Err(Error::InvalidParameter { reason: "grid step must be >= 1".into() });
                }
                (*lo..=*hi).step_by(*step).collect()
            }
        };
        validate_grid(&grid, n)?;
        Ok(grid)
    }
}

/// The default grid: 24 geometrically spaced integers spanning 0.5% to 20%
/// of the sample size (never below d), deduplicated.
pub fn default_grid(n: usize, d: usize) -> Vec<usize> {
    let hi = ((n as f64) * 0.2).floor() as usize;
    let hi = hi.clamp(1, n.saturating_sub(1).max(1));
    let lo = (((n as f64) * 0.005).ceil() as usize).max(d).max(1);
    let lo = lo.min(hi);
    let (lo_f, hi_f) = (lo as f64, hi as f64);
    let mut grid: Vec<usize> = (0..24)
        .map(|i| {
            let t = i as f64 / 23.0;
            (lo_f * (hi_f / lo_f).powf(t)).round() as usize
        })
        .collect();
    grid.sort_unstable();
    grid.dedup();
    grid
}

fn validate_grid(grid: &[usize], n: usize) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid { reason: "grid resolved to no k values".into() });
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter { reason: "grid must be strictly increasing".into() });
    }
    let (first, last) = (grid[0], grid[grid.len() - 1]);
    if first < 1 || last > n - 1 {
        return Err(Error::KOutOfRange { k: if first < 1 { first } else { last }, max: n - 1 });
    }
    Ok(())
}

/// Global criterion value at (k = counts.k, s) for a sample of size n.
pub fn ic_global(counts: &DirectionCounts, s: usize, n: usize, criterion: Criterion) -> Result<f64> {
    let k = counts.k();
    if k > n - 1 {
        return Err(Error::KOutOfRange { k, max: n - 1 });
    }
    let local = local_value(counts, s, criterion)?;
    let (kf, nf) = (k as f64, n as f64);
    Ok(match criterion {
        Criterion::Aic => local / kf + kf / nf,
        Criterion::Qaic => local / (2.0 * kf) + kf / nf,
        Criterion::Mseic => local + nf / kf,
        // log(n²) computed as 2 log n
        Criterion::Bicu | Criterion::Bicl => local / kf + 2.0 * nf.ln() / kf,
    })
}

/// One grid row of a threshold scan; `entry` is `None` when the k value was
/// skipped (degenerate threshold, or no valid s range).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub k: usize,
    pub entry: Option<ScanEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanEntry {
    pub r_hat: usize,
    pub best_s: usize,
    pub best_value: f64,
}

/// Scan of the global criterion over a k grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdScan {
    pub criterion: Criterion,
    pub n: usize,
    pub rows: Vec<ScanRow>,
}

impl ThresholdScan {
    /// The winning (k, entry) row: smallest global value, ties toward the
    /// smaller k.
    pub fn arg_min(&self) -> Option<(usize, ScanEntry)> {
        let mut best: Option<(usize, ScanEntry)> = None;
        for row in &self.rows {
            if let Some(entry) = row.entry {
                if best.is_none_or(|(_, b)| entry.best_value < b.best_value) {
                    best = Some((row.k, entry));
                }
            }
        }
        best
    }
}

/// Minimizes the global criterion over the valid s range of one k's counts.
/// `None` when the range is empty (BICU with r̂ = 1).
fn best_entry(counts: &DirectionCounts, n: usize, criterion: Criterion) -> Option<ScanEntry> {
    let (s_min, s_max) = criterion.valid_s_range(counts.r_hat())?;
    let mut best: Option<(usize, f64)> = None;
    for s in s_min..=s_max {
        let v = ic_global(counts, s, n, criterion).expect("s within valid range, k < n");
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((s, v));
        }
    }
    best.map(|(best_s, best_value)| ScanEntry { r_hat: counts.r_hat(), best_s, best_value })
}

/// Direction counts recomputed from scratch at every grid point, evaluated
/// concurrently; the output order follows the grid regardless of scheduling.
pub(crate) fn counts_for_grid(
    x: &SampleMatrix,
    grid: &[usize],
) -> Vec<(usize, Result<DirectionCounts>)> {
    exec::map_collect(grid.to_vec(), |k| (k, empirical_direction_counts(x, k)))
}

/// Evaluates the global criterion over the grid. Grid points with a
/// degenerate threshold (or an empty valid s range) are recorded as skipped;
/// the scan errors only when every point is skipped.
pub fn scan(x: &SampleMatrix, grid: &[usize], criterion: Criterion) -> Result<ThresholdScan> {
    validate_grid(grid, x.n())?;
    let n = x.n();
    let rows: Vec<ScanRow> = counts_for_grid(x, grid)
        .into_iter()
        .map(|(k, counts)| ScanRow {
            k,
            entry: counts.ok().and_then(|c| best_entry(&c, n, criterion)),
        })
        .collect();
    if rows.iter().all(|r| r.entry.is_none()) {
        return Err(Error::EmptyGrid {
            reason: "every grid point was skipped (degenerate thresholds)".into(),
        });
    }
    Ok(ThresholdScan { criterion, n, rows })
}

/// Diagnostics carried along with a selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// The k at which the selected counts were computed.
    pub k: usize,
    pub r_hat: usize,
    pub num_exceedances: u64,
    pub threshold: f64,
    pub warnings: Vec<String>,
}

/// A packaged selection: the chosen number of directions, the directions
/// themselves and their renormalized probability weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub criterion: Criterion,
    /// The selected k; absent in local (fixed-k) mode.
    pub k_hat: Option<usize>,
    pub s_hat: usize,
    /// The ŝ selected directions, by decreasing count.
    pub directions: Vec<Direction>,
    /// Renormalized probabilities over all r̂ observed directions; the first
    /// ŝ entries are positive and sum to one, the rest are exactly zero.
    pub p_star: Vec<f64>,
    pub diagnostics: Diagnostics,
}

fn package(
    counts: &DirectionCounts,
    criterion: Criterion,
    s_hat: usize,
    k_hat: Option<usize>,
    mut warnings: Vec<String>,
) -> Result<SelectionResult> {
    let p_star = renormalized_probability(counts, s_hat)?;
    let directions: Vec<Direction> = counts.directions().take(s_hat).cloned().collect();
    if counts.num_exceedances() < counts.k() as u64 {
        warnings.push(format!(
            "{} row norms tied the threshold and were excluded",
            counts.k() as u64 - counts.num_exceedances()
        ));
    }
    Ok(SelectionResult {
        criterion,
        k_hat,
        s_hat,
        directions,
        p_star,
        diagnostics: Diagnostics {
            k: counts.k(),
            r_hat: counts.r_hat(),
            num_exceedances: counts.num_exceedances(),
            threshold: counts.threshold(),
            warnings,
        },
    })
}

/// Local (fixed-k) selection: counts, argmin of the criterion, renormalized
/// probabilities.
pub fn select_local(x: &SampleMatrix, k: usize, criterion: Criterion) -> Result<SelectionResult> {
    let counts = empirical_direction_counts(x, k)?;
    let s_hat = select_s(&counts, criterion);
    let mut warnings = Vec::new();
    if criterion == Criterion::Bicu && counts.r_hat() == 1 {
        warnings.push("degenerate range: bicu has no valid s for r = 1; returning s = 1".into());
    }
    package(&counts, criterion, s_hat, None, warnings)
}

/// Joint (k̂, ŝ) selection over a grid: the argmin row of `scan`, with the
/// winning k's counts driving the reported directions and probabilities.
pub fn select_joint(x: &SampleMatrix, grid: &[usize], criterion: Criterion) -> Result<SelectionResult> {
    let table = scan(x, grid, criterion)?;
    let (k_hat, entry) = table.arg_min().ok_or_else(|| Error::EmptyGrid {
        reason: "no usable grid point".into(),
    })?;
    let counts = empirical_direction_counts(x, k_hat)?;
    package(&counts, criterion, entry.best_s, Some(k_hat), Vec::new())
}
