//! Generators for the two benchmark models with known true direction sets,
//! plus the Monte Carlo harness that scores the selectors against them.
//!
//! Reproducibility: all randomness flows through a seeded ChaCha8 stream.
//! Distinct seeds give independent streams, and every replicate uses the
//! seed `base_seed + rep`, so replicates can run concurrently without
//! changing any result. Primitive draws are documented at their definitions:
//! Pareto(1) is 1/U and Exp(1) is -log U with U uniform on (0,1]; standard
//! normals come from the inverse CDF applied to a uniform on (0,1), so the
//! whole sample is a deterministic function of the raw ChaCha output.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::counts::empirical_direction_counts;
use crate::criteria::{renormalized_probability, select_s, Criterion};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::exec;
use crate::metrics::{confusion, f1_error_from_counts, hellinger_by_direction};
use crate::numerics::{std_normal_quantile, std_normal_sf};
use crate::sample::SampleMatrix;
use crate::threshold::GridSpec;

/// The true extreme directions of a simulated model, with their probability
/// weights (uniform; over the axes for the independent model and over the
/// generating blocks for the dependent one).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    pub directions: Vec<Direction>,
    pub probabilities: Vec<f64>,
    pub s_star: usize,
}

impl GroundTruth {
    fn uniform(directions: Vec<Direction>) -> Self {
        let s_star = directions.len();
        let w = 1.0 / s_star as f64;
        GroundTruth { probabilities: vec![w; s_star], directions, s_star }
    }

    pub fn labeled(&self) -> Vec<(Direction, f64)> {
        self.directions
            .iter()
            .cloned()
            .zip(self.probabilities.iter().copied())
            .collect()
    }
}

// ---- seeded uniform primitives ----

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on [0, 1) with 53 random bits.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}

/// Uniform on (0, 1]: 1 - unit.
fn unit_pos(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - unit(rng)
}

/// Uniform on (0, 1), bounded away from both endpoints.
fn unit_open(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
}

/// Pareto(1): P(X > x) = 1/x for x >= 1, sampled as 1/U with U on (0,1].
fn pareto1(rng: &mut ChaCha8Rng) -> f64 {
    1.0 / unit_pos(rng)
}

/// Exp(1), sampled as -log U with U on (0,1].
fn exp1(rng: &mut ChaCha8Rng) -> f64 {
    -unit_pos(rng).ln()
}

/// Standard normal via the inverse CDF (reproducible from the raw uniform
/// stream, unlike rejection samplers).
fn std_normal(rng: &mut ChaCha8Rng) -> f64 {
    std_normal_quantile(unit_open(rng)).expect("u in (0,1)")
}

// ---- correlation matrix and Gaussian sampling ----

/// Dense symmetric matrix in row-major order.
pub(crate) struct SquareMatrix {
    d: usize,
    a: Vec<f64>,
}

impl SquareMatrix {
    fn zero(d: usize) -> Self {
        SquareMatrix { d, a: vec![0.0; d * d] }
    }

    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.d + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.d + j] = v;
    }
}

/// Correlation matrix of the Gram matrix HᵀH with H a d x d matrix of i.i.d.
/// uniforms: Σ = D^{-1/2} (HᵀH) D^{-1/2} with D the Gram diagonal. The
/// diagonal is set to exactly one.
pub(crate) fn random_correlation(rng: &mut ChaCha8Rng, d: usize) -> SquareMatrix {
    let mut h = vec![0.0; d * d];
    for v in h.iter_mut() {
        *v = unit(rng);
    }
    let mut gram = SquareMatrix::zero(d);
    for i in 0..d {
        for j in i..d {
            let mut sum = 0.0;
            for row in 0..d {
                sum += h[row * d + i] * h[row * d + j];
            }
            gram.set(i, j, sum);
            gram.set(j, i, sum);
        }
    }
    let mut sigma = SquareMatrix::zero(d);
    for i in 0..d {
        sigma.set(i, i, 1.0);
        for j in i + 1..d {
            let v = gram.get(i, j) / (gram.get(i, i) * gram.get(j, j)).sqrt();
            sigma.set(i, j, v);
            sigma.set(j, i, v);
        }
    }
    sigma
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub(crate) fn cholesky(m: &SquareMatrix) -> Result<SquareMatrix> {
    let d = m.d;
    let mut l = SquareMatrix::zero(d);
    for i in 0..d {
        for j in 0..=i {
            let mut sum = m.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(Error::NotPositiveDefinite);
                }
                l.set(i, j, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Ok(l)
}

// ---- the two benchmark models ----

/// Asymptotically independent model: a Gaussian copula with a random
/// correlation matrix (redrawn on every call) and standard Pareto margins
/// X_j = 1/(1 - Φ(Y_j)). The true extreme directions are the d axes.
pub fn sample_asymptotic_independent(
    d: usize,
    n: usize,
    seed: u64,
) -> Result<(SampleMatrix, GroundTruth)> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidParameter { reason: "need d >= 1 and n >= 1".into() });
    }
    let mut rng = rng_for(seed);
    let sigma = random_correlation(&mut rng, d);
    let chol = cholesky(&sigma)?;
    let mut data = Vec::with_capacity(n * d);
    let mut z = vec![0.0; d];
    for _ in 0..n {
        for slot in z.iter_mut() {
            *slot = std_normal(&mut rng);
        }
        for i in 0..d {
            let mut y = 0.0;
            for (j, zj) in z.iter().enumerate().take(i + 1) {
                y += chol.get(i, j) * zj;
            }
            // 1/(1 - Φ(y)) through the survival function: no cancellation
            data.push(1.0 / std_normal_sf(y));
        }
    }
    let truth = GroundTruth::uniform((1..=d as u32).map(Direction::singleton).collect());
    Ok((SampleMatrix::new(data, n, d)?, truth))
}

/// Asymptotically dependent model with block structure: d1 singleton
/// Pareto(1) coordinates, d2 pairs (P, P + E), d3 triples (P, P + E, P + E'),
/// and i.i.d. Exp(1) noise on the remaining coordinates. The true directions
/// are the d1 + d2 + d3 generating blocks.
pub fn sample_asymptotic_dependent(
    d1: usize,
    d2: usize,
    d3: usize,
    d: usize,
    n: usize,
    seed: u64,
) -> Result<(SampleMatrix, GroundTruth)> {
    let used = d1 + 2 * d2 + 3 * d3;
    if d < used {
        return Err(Error::InvalidParameter {
            reason: format!("need d >= d1 + 2 d2 + 3 d3 = {used}, got d = {d}"),
        });
    }
    if d1 + d2 + d3 == 0 {
        return Err(Error::InvalidParameter {
            reason: "need at least one direction: d1 + d2 + d3 >= 1".into(),
        });
    }
    if n == 0 {
        return Err(Error::InvalidParameter { reason: "need n >= 1".into() });
    }
    let mut rng = rng_for(seed);
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        for _ in 0..d1 {
            data.push(pareto1(&mut rng));
        }
        for _ in 0..d2 {
            let p = pareto1(&mut rng);
            data.push(p);
            data.push(p + exp1(&mut rng));
        }
        for _ in 0..d3 {
            let p = pareto1(&mut rng);
            data.push(p);
            data.push(p + exp1(&mut rng));
            data.push(p + exp1(&mut rng));
        }
        for _ in used..d {
            data.push(exp1(&mut rng));
        }
    }

    let mut directions = Vec::with_capacity(d1 + d2 + d3);
    for j in 0..d1 {
        directions.push(Direction::singleton(j as u32 + 1));
    }
    for b in 0..d2 {
        let start = (d1 + 2 * b) as u32 + 1;
        directions.push(Direction::from_indices(&[start, start + 1])?);
    }
    for b in 0..d3 {
        let start = (d1 + 2 * d2 + 3 * b) as u32 + 1;
        directions.push(Direction::from_indices(&[start, start + 1, start + 2])?);
    }
    let truth = GroundTruth::uniform(directions);
    Ok((SampleMatrix::new(data, n, d)?, truth))
}

/// Which benchmark model to simulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelSpec {
    Independent { d: usize },
    Dependent { d1: usize, d2: usize, d3: usize, d: usize },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Independent { .. } => "independent",
            ModelSpec::Dependent { .. } => "dependent",
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            ModelSpec::Independent { d } => d,
            ModelSpec::Dependent { d, .. } => d,
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<(SampleMatrix, GroundTruth)> {
        match *self {
            ModelSpec::Independent { d } => sample_asymptotic_independent(d, n, seed),
            ModelSpec::Dependent { d1, d2, d3, d } => {
                sample_asymptotic_dependent(d1, d2, d3, d, n, seed)
            }
        }
    }
}

/// Local mode fixes k as a fraction of n; global mode estimates k over a grid.
#[derive(Debug, Clone, PartialEq)]
pub enum BenchMode {
    Local { k_fraction: f64 },
    Global { grid: GridSpec },
}

impl BenchMode {
    fn name(&self) -> &'static str {
        match self {
            BenchMode::Local { .. } => "local",
            BenchMode::Global { .. } => "global",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub model: ModelSpec,
    pub reps: usize,
    pub sample_sizes: Vec<usize>,
    pub criteria: Vec<Criterion>,
    pub mode: BenchMode,
    pub base_seed: u64,
}

/// One benchmark measurement. Skipped replicates (degenerate thresholds)
/// keep their row with `s_hat = 0` and NaN error metrics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRow {
    pub model: &'static str,
    pub rep: usize,
    pub n: usize,
    pub d: usize,
    pub criterion: Criterion,
    pub mode: &'static str,
    pub k_or_khat: usize,
    pub s_hat: usize,
    pub hellinger: f64,
    pub accuracy_error: f64,
    pub f1_error: f64,
    pub skipped: bool,
}

/// Runs the benchmark: for every (rep, n, criterion) the selected model is
/// scored against the ground truth with the Hellinger distance, the Accuracy
/// Error and the F1 Error. Replicates run concurrently; rows come back
/// ordered by (rep, n, criterion) regardless of scheduling.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> Result<Vec<BenchmarkRow>> {
    if cfg.reps == 0 {
        return Err(Error::InvalidParameter { reason: "reps must be >= 1".into() });
    }
    if cfg.sample_sizes.is_empty() || cfg.criteria.is_empty() {
        return Err(Error::InvalidParameter {
            reason: "need at least one sample size and one criterion".into(),
        });
    }
    if let BenchMode::Local { k_fraction } = cfg.mode {
        if !(k_fraction > 0.0 && k_fraction < 1.0) {
            return Err(Error::InvalidParameter {
                reason: format!("k_fraction must be in (0,1), got {k_fraction}"),
            });
        }
    }

    let reps: Vec<usize> = (0..cfg.reps).collect();
    let nested: Vec<Result<Vec<BenchmarkRow>>> =
        exec::map_collect(reps, |rep| run_replicate(cfg, rep));
    let mut rows = Vec::with_capacity(cfg.reps * cfg.sample_sizes.len() * cfg.criteria.len());
    for chunk in nested {
        rows.extend(chunk?);
    }
    Ok(rows)
}

fn run_replicate(cfg: &BenchmarkConfig, rep: usize) -> Result<Vec<BenchmarkRow>> {
    let seed = cfg.base_seed.wrapping_add(rep as u64);
    let mut rows = Vec::with_capacity(cfg.sample_sizes.len() * cfg.criteria.len());
    for &n in &cfg.sample_sizes {
        let (x, truth) = cfg.model.sample(n, seed)?;
        match &cfg.mode {
            BenchMode::Local { k_fraction } => {
                let k = ((n as f64 * k_fraction).round() as usize).clamp(1, n - 1);
                let counts = empirical_direction_counts(&x, k);
                for &criterion in &cfg.criteria {
                    let row = match &counts {
                        Ok(c) => {
                            let s_hat = select_s(c, criterion);
                            score(cfg, rep, n, criterion, k, s_hat, c, &truth)?
                        }
                        Err(_) => skipped_row(cfg, rep, n, criterion, k),
                    };
                    rows.push(row);
                }
            }
            BenchMode::Global { grid } => {
                let grid = grid.resolve(n, x.d())?;
                let per_k = crate::threshold::counts_for_grid(&x, &grid);
                for &criterion in &cfg.criteria {
                    // argmin over the grid of the per-k global minimum,
                    // ties toward smaller k then smaller s
                    let mut best: Option<(usize, usize, f64)> = None;
                    for (k, counts) in &per_k {
                        let Ok(c) = counts else { continue };
                        let Some((s_min, s_max)) = criterion.valid_s_range(c.r_hat()) else {
                            continue;
                        };
                        for s in s_min..=s_max {
                            let v = crate::threshold::ic_global(c, s, n, criterion)
                                .expect("valid s and k");
                            if best.is_none_or(|(_, _, bv)| v < bv) {
                                best = Some((*k, s, v));
                            }
                        }
                    }
                    let row = match best {
                        Some((k_hat, s_hat, _)) => {
                            let c = per_k
                                .iter()
                                .find(|(k, _)| *k == k_hat)
                                .and_then(|(_, c)| c.as_ref().ok())
                                .expect("winning k has counts");
                            score(cfg, rep, n, criterion, k_hat, s_hat, c, &truth)?
                        }
                        None => skipped_row(cfg, rep, n, criterion, 0),
                    };
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn score(
    cfg: &BenchmarkConfig,
    rep: usize,
    n: usize,
    criterion: Criterion,
    k: usize,
    s_hat: usize,
    counts: &crate::counts::DirectionCounts,
    truth: &GroundTruth,
) -> Result<BenchmarkRow> {
    let d = cfg.model.dimension();
    let p_star = renormalized_probability(counts, s_hat)?;
    let estimated: Vec<(Direction, f64)> = counts
        .directions()
        .take(s_hat)
        .cloned()
        .zip(p_star.iter().copied())
        .collect();
    let hellinger = hellinger_by_direction(&estimated, &truth.labeled())?;
    let est_dirs: Vec<Direction> = estimated.into_iter().map(|(dir, _)| dir).collect();
    let (accuracy_error, f1_error) = if d <= 30 {
        let c = confusion(&truth.directions, &est_dirs, d)?;
        (c.accuracy_error(), c.f1_error())
    } else {
        let truth_set: std::collections::HashSet<&Direction> = truth.directions.iter().collect();
        let tp = est_dirs.iter().filter(|dir| truth_set.contains(dir)).count() as u64;
        let fp = est_dirs.len() as u64 - tp;
        let fng = truth.directions.len() as u64 - tp;
        (f64::NAN, f1_error_from_counts(tp, fp, fng))
    };
    Ok(BenchmarkRow {
        model: cfg.model.name(),
        rep,
        n,
        d,
        criterion,
        mode: cfg.mode.name(),
        k_or_khat: k,
        s_hat,
        hellinger,
        accuracy_error,
        f1_error,
        skipped: false,
    })
}

fn skipped_row(
    cfg: &BenchmarkConfig,
    rep: usize,
    n: usize,
    criterion: Criterion,
    k: usize,
) -> BenchmarkRow {
    BenchmarkRow {
        model: cfg.model.name(),
        rep,
        n,
        d: cfg.model.dimension(),
        criterion,
        mode: cfg.mode.name(),
        k_or_khat: k,
        s_hat: 0,
        hellinger: f64::NAN,
        accuracy_error: f64::NAN,
        f1_error: f64::NAN,
        skipped: true,
    }
}
