//! The five bias-selection information criteria over the local multinomial
//! model, the maximum likelihood fit behind them, and the renormalized
//! probability estimator for the selected directions.
//!
//! With sorted counts T_(1) ≥ … ≥ T_(r) among k exceedances, the fitted model
//! with s true directions keeps p̂_j = T_(j)/k for j ≤ s and pools the
//! remaining r-s counts into a common value ρ̂ = Σ_{j>s} T_(j) / ((r-s)k).
//! Each criterion scores that fit; the estimate ŝ is the argmin over the
//! criterion's valid range.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::counts::DirectionCounts;
use crate::error::{Error, Result};
use crate::numerics::ln_factorial;

const TWO_PI: f64 = std::f64::consts::TAU;

/// The selectable information criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Multinomial-likelihood Akaike criterion: -log L + s.
    Aic,
    /// Gaussian-likelihood quasi-Akaike criterion.
    Qaic,
    /// Normalized mean-squared-error criterion.
    Mseic,
    /// Bayesian criterion from the posterior upper bound.
    Bicu,
    /// Bayesian criterion from the posterior lower bound.
    Bicl,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [
        Criterion::Aic,
        Criterion::Qaic,
        Criterion::Mseic,
        Criterion::Bicu,
        Criterion::Bicl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Aic => "aic",
            Criterion::Qaic => "qaic",
            Criterion::Mseic => "mseic",
            Criterion::Bicu => "bicu",
            Criterion::Bicl => "bicl",
        }
    }

    /// The valid range of s given r observed directions. BICU's last penalty
    /// term is undefined at s = r, so its range ends at r-1; it is empty when
    /// r = 1.
    pub fn valid_s_range(self, r: usize) -> Option<(usize, usize)> {
        match self {
            Criterion::Bicu => {
                if r >= 2 {
                    Some((1, r - 1))
                } else {
                    None
                }
            }
            _ => Some((1, r)),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aic" => Ok(Criterion::Aic),
            "qaic" => Ok(Criterion::Qaic),
            "mseic" => Ok(Criterion::Mseic),
            "bicu" => Ok(Criterion::Bicu),
            "bicl" => Ok(Criterion::Bicl),
            other => Err(Error::InvalidParameter {
                reason: format!("unknown criterion '{other}' (expected aic, qaic, mseic, bicu or bicl)"),
            }),
        }
    }
}

/// The fitted local multinomial model for a candidate s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultinomialFit {
    /// Candidate number of true directions.
    pub s: usize,
    /// p̂_j = T_(j)/k for j = 1..s, sorted descending.
    pub p_hat: Vec<f64>,
    /// Pooled remainder probability; zero when s = r.
    pub rho_hat: f64,
    pub k: usize,
    /// Number of observed directions r̂.
    pub r: usize,
}

fn check_s(s: usize, min: usize, max: usize) -> Result<()> {
    if s < min || s > max {
        return Err(Error::SOutOfRange { s, min, max });
    }
    Ok(())
}

/// Maximum likelihood fit of the model with s true directions.
pub fn fit_mle(counts: &DirectionCounts, s: usize) -> Result<MultinomialFit> {
    let r = counts.r_hat();
    check_s(s, 1, r)?;
    let k = counts.k() as f64;
    let p_hat: Vec<f64> = (0..s).map(|j| counts.count(j) as f64 / k).collect();
    let rho_hat = if s == r {
        0.0
    } else {
        let tail: u64 = (s..r).map(|j| counts.count(j)).sum();
        tail as f64 / ((r - s) as f64 * k)
    };
    Ok(MultinomialFit { s, p_hat, rho_hat, k: counts.k(), r })
}

/// Multinomial log-likelihood of `counts` under `fit` (which must have been
/// produced from the same counts), including the multinomial coefficient.
/// Factorials are evaluated through the log-gamma function.
pub fn log_likelihood(fit: &MultinomialFit, counts: &DirectionCounts) -> f64 {
    debug_assert!((fit.k, fit.r) == (counts.k(), counts.r_hat()), "fit does not match counts");
    let mut ll = ln_factorial(fit.k as u64);
    for t in counts.counts() {
        ll -= ln_factorial(t);
    }
    for (j, &p) in fit.p_hat.iter().enumerate() {
        ll += counts.count(j) as f64 * p.ln();
    }
    if fit.s < fit.r {
        let tail: u64 = (fit.s..fit.r).map(|j| counts.count(j)).sum();
        ll += tail as f64 * fit.rho_hat.ln();
    }
    ll
}

/// AIC(s) = -log L(p̂) + s.
pub fn aic_local(counts: &DirectionCounts, s: usize) -> Result<f64> {
    let fit = fit_mle(counts, s)?;
    Ok(-log_likelihood(&fit, counts) + s as f64)
}

/// QAIC(s) = r log 2π + r log k + Σ_{j≤s} log p̂_j + (r-s) log ρ̂ + r + s.
/// At s = r the remainder term has coefficient zero and is taken as 0.
pub fn qaic_local(counts: &DirectionCounts, s: usize) -> Result<f64> {
    let fit = fit_mle(counts, s)?;
    let r = fit.r as f64;
    let k = fit.k as f64;
    let head: f64 = fit.p_hat.iter().map(|p| p.ln()).sum();
    let tail = if fit.s == fit.r {
        0.0
    } else {
        (fit.r - fit.s) as f64 * fit.rho_hat.ln()
    };
    Ok(r * TWO_PI.ln() + r * k.ln() + head + tail + r + s as f64)
}

/// MSEIC(s) = (k/ρ̂) Σ_{j>s} (T_(j)/k - ρ̂)² + 2s for s < r, and exactly 2r
/// at s = r.
pub fn mseic_local(counts: &DirectionCounts, s: usize) -> Result<f64> {
    let fit = fit_mle(counts, s)?;
    if fit.s == fit.r {
        return Ok(2.0 * fit.r as f64);
    }
    let k = fit.k as f64;
    let quad: f64 = (fit.s..fit.r)
        .map(|j| {
            let diff = counts.count(j) as f64 / k - fit.rho_hat;
            diff * diff
        })
        .sum();
    Ok(k / fit.rho_hat * quad + 2.0 * s as f64)
}

/// BICU(s) = -2 log L(p̂) + 2s log k + s log(r / (2π(r-s))) for s ≤ r-1.
pub fn bicu_local(counts: &DirectionCounts, s: usize) -> Result<f64> {
    let r = counts.r_hat();
    let (min, max) = Criterion::Bicu
        .valid_s_range(r)
        .ok_or(Error::SOutOfRange { s, min: 1, max: 0 })?;
    check_s(s, min, max)?;
    let fit = fit_mle(counts, s)?;
    let k = counts.k() as f64;
    let rf = r as f64;
    let sf = s as f64;
    Ok(-2.0 * log_likelihood(&fit, counts)
        + 2.0 * sf * k.ln()
        + sf * (rf / (TWO_PI * (rf - sf))).ln())
}

/// BICL(s) = -2 log L(p̂) + s log k + s log(k / (2π T_(1))) for s ≤ r.
pub fn bicl_local(counts: &DirectionCounts, s: usize) -> Result<f64> {
    let fit = fit_mle(counts, s)?;
    let k = counts.k() as f64;
    let sf = s as f64;
    let top = counts.count(0) as f64;
    Ok(-2.0 * log_likelihood(&fit, counts) + sf * k.ln() + sf * (k / (TWO_PI * top)).ln())
}

/// Gaussian-likelihood estimators: p̂ᴳ_j = -1/(2k) + sqrt(1/(4k²) + T_(j)²/k²)
/// for j ≤ s and the analogous ρ̂ᴳ built from the mean squared remainder
/// frequency (zero when s = r).
pub fn gaussian_mle(counts: &DirectionCounts, s: usize) -> Result<(Vec<f64>, f64)> {
    let r = counts.r_hat();
    check_s(s, 1, r)?;
    let k = counts.k() as f64;
    let half = 1.0 / (2.0 * k);
    let quarter = 1.0 / (4.0 * k * k);
    let p: Vec<f64> = (0..s)
        .map(|j| {
            let f = counts.count(j) as f64 / k;
            -half + (quarter + f * f).sqrt()
        })
        .collect();
    let rho = if s == r {
        0.0
    } else {
        let mean_sq: f64 = (s..r)
            .map(|j| {
                let f = counts.count(j) as f64 / k;
                f * f
            })
            .sum::<f64>()
            / (r - s) as f64;
        -half + (quarter + mean_sq).sqrt()
    };
    Ok((p, rho))
}

/// Criterion value at a single s.
pub fn local_value(counts: &DirectionCounts, s: usize, criterion: Criterion) -> Result<f64> {
    match criterion {
        Criterion::Aic => aic_local(counts, s),
        Criterion::Qaic => qaic_local(counts, s),
        Criterion::Mseic => mseic_local(counts, s),
        Criterion::Bicu => bicu_local(counts, s),
        Criterion::Bicl => bicl_local(counts, s),
    }
}

/// Criterion values over the whole valid s range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionTable {
    pub criterion: Criterion,
    /// (s, value) pairs for every s in the valid range, ascending in s.
    pub values: Vec<(usize, f64)>,
    pub s_min: usize,
    pub s_max: usize,
}

impl CriterionTable {
    /// The argmin; ties broken toward the smaller s.
    pub fn arg_min(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for &(s, v) in &self.values {
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((s, v));
            }
        }
        best
    }
}

/// Evaluates the criterion at every valid s. Returns `None` for BICU with
/// r = 1, whose valid range is empty.
pub fn criterion_table(counts: &DirectionCounts, criterion: Criterion) -> Option<CriterionTable> {
    let (s_min, s_max) = criterion.valid_s_range(counts.r_hat())?;
    let values = (s_min..=s_max)
        .map(|s| {
            let v = local_value(counts, s, criterion).expect("s is within the valid range");
            (s, v)
        })
        .collect();
    Some(CriterionTable { criterion, values, s_min, s_max })
}

/// The selected number of directions: argmin of the criterion over its valid
/// range, ties toward smaller s. When r = 1 (including BICU's empty range)
/// the only sensible answer is 1.
pub fn select_s(counts: &DirectionCounts, criterion: Criterion) -> usize {
    match criterion_table(counts, criterion) {
        Some(table) => table.arg_min().map_or(1, |(s, _)| s),
        None => 1,
    }
}

/// The renormalized probability estimate of length r: the first ŝ relative
/// frequencies rescaled to sum to one, zeros elsewhere.
pub fn renormalized_probability(counts: &DirectionCounts, s_hat: usize) -> Result<Vec<f64>> {
    let r = counts.r_hat();
    check_s(s_hat, 1, r)?;
    let k = counts.k() as f64;
    let head_sum: f64 = (0..s_hat).map(|j| counts.count(j) as f64 / k).sum();
    let mut out = vec![0.0; r];
    for (j, slot) in out.iter_mut().enumerate().take(s_hat) {
        *slot = counts.count(j) as f64 / k / head_sum;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(values: &[u64], k: usize) -> DirectionCounts {
        DirectionCounts::from_sorted_counts(values, k).unwrap()
    }

    const REL_TOL: f64 = 1e-9;

    fn assert_close(got: f64, want: f64) {
        let scale = want.abs().max(1.0);
        assert!(
            (got - want).abs() <= REL_TOL * scale,
            "got {got}, want {want}"
        );
    }

    #[test]
    fn mle_examples() {
        let c = counts(&[50, 30, 20], 100);
        let f = fit_mle(&c, 1).unwrap();
        assert_eq!(f.p_hat, vec![0.5]);
        assert_close(f.rho_hat, 0.25);
        let f = fit_mle(&c, 3).unwrap();
        assert_eq!(f.p_hat, vec![0.5, 0.3, 0.2]);
        assert_eq!(f.rho_hat, 0.0);
        let f = fit_mle(&counts(&[10], 10), 1).unwrap();
        assert_eq!((f.p_hat.as_slice(), f.rho_hat), ([1.0].as_slice(), 0.0));
        assert!(fit_mle(&c, 0).is_err());
        assert!(fit_mle(&c, 4).is_err());
    }

    // Golden values recomputed with an independent straight-line log-gamma
    // script before implementation; pinned to 1e-9 relative tolerance.
    #[test]
    fn log_likelihood_goldens() {
        let c = counts(&[50, 30, 20], 100);
        assert_close(log_likelihood(&fit_mle(&c, 3).unwrap(), &c), -4.69754561225058);
        assert_close(log_likelihood(&fit_mle(&c, 1).unwrap(), &c), -5.70432128978502);
        assert_close(log_likelihood(&fit_mle(&c, 2).unwrap(), &c), -4.69754561225058);
        let single = counts(&[77], 77);
        assert_eq!(log_likelihood(&fit_mle(&single, 1).unwrap(), &single), 0.0);
    }

    #[test]
    fn aic_goldens() {
        let c = counts(&[50, 30, 20], 100);
        assert_close(aic_local(&c, 3).unwrap(), 7.69754561225058);
        assert_close(aic_local(&c, 1).unwrap(), 6.70432128978502);
        assert_eq!(aic_local(&counts(&[42], 42), 1).unwrap(), 1.0);
    }

    #[test]
    fn qaic_goldens() {
        let c = counts(&[50, 30, 20], 100);
        assert_close(qaic_local(&c, 1).unwrap(), 19.8634058543926);
        assert_close(qaic_local(&c, 3).unwrap(), 21.8225838598723);
        // single direction: log 2π + log k + 2
        let k = 64usize;
        let single = counts(&[64], 64);
        assert_close(
            qaic_local(&single, 1).unwrap(),
            TWO_PI.ln() + (k as f64).ln() + 2.0,
        );
    }

    #[test]
    fn mseic_goldens() {
        let c = counts(&[50, 30, 20], 100);
        assert_close(mseic_local(&c, 1).unwrap(), 4.0);
        assert_eq!(mseic_local(&c, 3).unwrap(), 6.0);
        let c = counts(&[900, 50, 25, 25], 1000);
        assert_close(mseic_local(&c, 2).unwrap(), 4.0);
        assert_close(mseic_local(&c, 1).unwrap(), 14.5);
        assert_eq!(mseic_local(&c, 4).unwrap(), 8.0);
    }

    #[test]
    fn bicu_goldens() {
        let c = counts(&[50, 30, 20], 100);
        assert_close(bicu_local(&c, 1).unwrap(), 19.186570993245);
        assert_close(bicu_local(&c, 2).unwrap(), 26.3372424129711);
        assert!(bicu_local(&c, 3).is_err());
        let two = counts(&[10, 10], 20);
        assert!(bicu_local(&two, 1).unwrap().is_finite());
        let one = counts(&[10], 20);
        assert!(bicu_local(&one, 1).is_err());
    }

    #[test]
    fn bicl_goldens() {
        let c = counts(&[50, 30, 20], 100);
        assert_close(bicl_local(&c, 1).unwrap(), 14.8690828797087);
        assert_close(bicl_local(&c, 3).unwrap(), 19.7764121249172);
        // counts (k,): log k - log 2π
        let k = 50usize;
        let single = counts(&[50], 50);
        assert_close(bicl_local(&single, 1).unwrap(), (k as f64).ln() - TWO_PI.ln());
    }

    #[test]
    fn gaussian_mle_goldens() {
        let c = counts(&[50], 50);
        let (p, rho) = gaussian_mle(&c, 1).unwrap();
        assert_close(p[0], 0.990049998750062);
        assert_eq!(rho, 0.0);
        let c = counts(&[50, 30, 20], 100);
        let (p, rho) = gaussian_mle(&c, 1).unwrap();
        assert_close(p[0], -0.005 + (0.000025f64 + 0.25).sqrt());
        assert_close(rho, 0.25);
        let (_, rho) = gaussian_mle(&c, 2).unwrap();
        assert_close(rho, 0.195062490237426);
        // a zero count would map to exactly zero: -1/(2k) + sqrt(1/(4k^2))
        for k in [50.0f64, 1000.0] {
            let at_zero = -1.0 / (2.0 * k) + (1.0 / (4.0 * k * k)).sqrt();
            assert!(at_zero.abs() < 1e-18);
        }
    }

    #[test]
    fn selection_examples() {
        let c = counts(&[900, 50, 25, 25], 1000);
        assert_eq!(select_s(&c, Criterion::Mseic), 2);
        let c = counts(&[500, 480, 10, 10], 1000);
        assert_eq!(select_s(&c, Criterion::Qaic), 2);
        let single = counts(&[10], 10);
        for criterion in Criterion::ALL {
            assert_eq!(select_s(&single, criterion), 1);
        }
    }

    #[test]
    fn qaic_table_matches_oracle() {
        let c = counts(&[500, 480, 10, 10], 1000);
        let want = [
            33.9141037933218,
            30.3450726539496,
            31.3450726539496,
            32.3450726539496,
        ];
        let table = criterion_table(&c, Criterion::Qaic).unwrap();
        for (&(s, v), (i, w)) in table.values.iter().zip(want.iter().enumerate()) {
            assert_eq!(s, i + 1);
            assert_close(v, *w);
        }
    }

    #[test]
    fn renormalized_probability_examples() {
        let c = counts(&[50, 30, 20], 100);
        let p = renormalized_probability(&c, 2).unwrap();
        assert_eq!(p.len(), 3);
        assert_close(p[0], 0.625);
        assert_close(p[1], 0.375);
        assert_eq!(p[2], 0.0);
        // s_hat = r with counts summing to k: unchanged
        let p = renormalized_probability(&c, 3).unwrap();
        assert_close(p[0], 0.5);
        assert_close(p[1], 0.3);
        assert_close(p[2], 0.2);
        let single = counts(&[10], 10);
        assert_eq!(renormalized_probability(&single, 1).unwrap(), vec![1.0]);
        assert!((renormalized_probability(&c, 2).unwrap().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bicu_aic_bridge_identity() {
        // BICU(s) - 2 AIC(s) = -2s + 2s log k + s log(r/(2π(r-s))) exactly.
        let c = counts(&[40, 25, 20, 10, 5], 100);
        let r = c.r_hat() as f64;
        let k = c.k() as f64;
        for s in 1..c.r_hat() {
            let sf = s as f64;
            let lhs = bicu_local(&c, s).unwrap() - 2.0 * aic_local(&c, s).unwrap();
            let rhs = -2.0 * sf + 2.0 * sf * k.ln() + sf * (r / (TWO_PI * (r - sf))).ln();
            assert_close(lhs, rhs);
        }
    }

    #[test]
    fn qaic_differences_drop_the_constant_block() {
        let c = counts(&[40, 25, 20, 10, 5], 100);
        let r = c.r_hat();
        let reduced = |s: usize| {
            let fit = fit_mle(&c, s).unwrap();
            let head: f64 = fit.p_hat.iter().map(|p| p.ln()).sum();
            let tail = if s == r { 0.0 } else { (r - s) as f64 * fit.rho_hat.ln() };
            head + tail + s as f64
        };
        for s in 1..=r {
            for t in 1..=r {
                let full = qaic_local(&c, s).unwrap() - qaic_local(&c, t).unwrap();
                assert_close(full, reduced(s) - reduced(t));
            }
        }
    }

    #[test]
    fn mseic_equal_remainder_collapses_to_penalty() {
        // remainder entries all equal => quadratic term vanishes
        let c = counts(&[500, 100, 100, 100], 1000);
        assert_close(mseic_local(&c, 1).unwrap(), 2.0);
    }

    #[test]
    fn all_values_finite_on_valid_ranges() {
        let cases: [&[u64]; 4] = [&[7], &[5, 3], &[90, 5, 3, 1, 1], &[1000, 999, 2, 1]];
        for values in cases {
            let k: u64 = values.iter().sum();
            let c = counts(values, k as usize);
            for criterion in Criterion::ALL {
                if let Some(table) = criterion_table(&c, criterion) {
                    for (_, v) in table.values {
                        assert!(v.is_finite(), "{criterion} not finite on {values:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn mle_maximizes_the_likelihood() {
        // log L at the MLE dominates randomly drawn parameter vectors from
        // the model's parameter space (sorted head, pooled remainder), over
        // 200 random (counts, s) pairs with 1000 candidates each.
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut unit = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 + 0.5) / 9007199254740992.0
        };
        for _ in 0..200 {
            // random sorted positive counts summing exactly to k
            let r = 2 + (unit() * 5.0) as usize;
            let mut raw_counts: Vec<u64> = (0..r).map(|_| 1 + (unit() * 60.0) as u64).collect();
            raw_counts.sort_unstable_by(|a, b| b.cmp(a));
            let k: u64 = raw_counts.iter().sum();
            let c = counts(&raw_counts, k as usize);
            let s = 1 + (unit() * r as f64) as usize;
            let s = s.min(r);

            let fit = fit_mle(&c, s).unwrap();
            let best = log_likelihood(&fit, &c);
            for _ in 0..1000 {
                // draw a positive vector, normalize, take the head sorted
                let mut raw: Vec<f64> = (0..r).map(|_| -unit().ln()).collect();
                let total: f64 = raw.iter().sum();
                raw.iter_mut().for_each(|x| *x /= total);
                raw.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
                let head = &raw[..s];
                let rho = if s == r {
                    0.0
                } else {
                    (1.0 - head.iter().sum::<f64>()) / (r - s) as f64
                };
                let candidate = MultinomialFit {
                    s,
                    p_hat: head.to_vec(),
                    rho_hat: rho,
                    k: c.k(),
                    r,
                };
                let ll = log_likelihood(&candidate, &c);
                assert!(
                    ll <= best + 1e-9,
                    "random parameters beat the MLE at s = {s} on {raw_counts:?}: {ll} > {best}"
                );
            }
        }
    }
}
